import math

from hypothesis import strategies as st

from hvqm.quaternion import Quaternion
from hvqm.spin import Direction

finite_components = st.floats(min_value=-10.0, max_value=10.0,
                              allow_nan=False, allow_infinity=False)

angles = st.floats(min_value=-2.0 * math.pi, max_value=2.0 * math.pi,
                   allow_nan=False, allow_infinity=False)

signs = st.sampled_from([1, -1])


@st.composite
def quaternions(draw):
    return Quaternion(draw(finite_components), draw(finite_components),
                      draw(finite_components), draw(finite_components))


@st.composite
def directions(draw):
    """Uniform-ish unit vectors via (cos polar, azimuth)."""
    u = draw(st.floats(min_value=-1.0, max_value=1.0,
                       allow_nan=False, allow_infinity=False))
    phi = draw(angles)
    s = math.sqrt(max(0.0, 1.0 - u * u))
    return Direction.normalized(s * math.cos(phi), s * math.sin(phi), u)
