"""Exception hierarchy shared across the toolkit."""


class HvqmError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(HvqmError, ValueError):
    """Bad input: non-unit direction, negative probability, malformed config."""


class SolverError(HvqmError, RuntimeError):
    """Linear system for a quasi-probability table did not close within tolerance."""


class NotSampleableError(HvqmError, RuntimeError):
    """Raised when per-trial sampling is requested from an analytic-only mode.

    Signed weight tables cannot be drawn from; analytic modes expose
    expectation values only.
    """


class SequenceError(ValidationError):
    """Malformed beamline sequence (recombine without a matching split, etc.)."""
