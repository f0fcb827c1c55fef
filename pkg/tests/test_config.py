from pathlib import Path

import pytest

from hvqm.config import (ConfigParseError, ExperimentConfig, apply_overrides,
                         canonical_bytes, config_hash, parse_config,
                         parse_direction, parse_lhv_weights)
from hvqm.errors import ValidationError
from hvqm.runner import validate_experiment

CONFIG_DIR = Path(__file__).resolve().parents[1] / "configs"


def write(tmp_path, text):
    path = tmp_path / "exp.cfg"
    path.write_text(text, encoding="utf-8")
    return path


class TestParsing:
    def test_all_shipped_configs_parse_and_validate(self):
        for path in sorted(CONFIG_DIR.glob("*.cfg")):
            cfg = parse_config(path)
            notes = validate_experiment(cfg)
            assert notes, path

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigParseError):
            parse_config(tmp_path / "nope.cfg")

    def test_garbage_syntax(self, tmp_path):
        path = write(tmp_path, "this is not\n a config {{{\n")
        with pytest.raises(ConfigParseError):
            parse_config(path)

    def test_key_case_preserved(self, tmp_path):
        path = write(tmp_path, "[experiment]\nkind = chsh\nFoo = Bar\n")
        cfg = parse_config(path)
        assert cfg.get("experiment", "Foo") == "Bar"


class TestHashing:
    def test_order_insensitive(self):
        a = ExperimentConfig("chsh", {"experiment": {"kind": "chsh", "seed": "1"},
                                      "directions": {"a1": "0.0"}})
        b = ExperimentConfig("chsh", {"directions": {"a1": "0.0"},
                                      "experiment": {"seed": "1", "kind": "chsh"}})
        assert config_hash(a) == config_hash(b)

    def test_value_changes_hash(self):
        a = ExperimentConfig("chsh", {"experiment": {"kind": "chsh", "seed": "1"}})
        b = ExperimentConfig("chsh", {"experiment": {"kind": "chsh", "seed": "2"}})
        assert config_hash(a) != config_hash(b)

    def test_out_dir_and_workers_not_hashed(self):
        a = ExperimentConfig("chsh", {"experiment": {"kind": "chsh", "seed": "1"}})
        b = apply_overrides(a, out_dir="elsewhere", workers=8)
        assert config_hash(a) == config_hash(b)

    def test_seed_override_changes_hash(self):
        a = ExperimentConfig("chsh", {"experiment": {"kind": "chsh", "seed": "1"}})
        assert config_hash(apply_overrides(a, seed=2)) != config_hash(a)

    def test_canonical_bytes_sorted(self):
        cfg = ExperimentConfig("epr", {"b": {"k": "2"}, "a": {"z": "1", "a": "0"}})
        assert canonical_bytes(cfg) == b"a.a=0\na.z=1\nb.k=2\n"


class TestDirectionParsing:
    def test_angle(self):
        d = parse_direction("1.5707963267948966")
        assert d.nx == pytest.approx(0.0, abs=1e-12)
        assert d.ny == pytest.approx(1.0)

    def test_named_axes(self):
        assert parse_direction("x").nx == 1.0
        assert parse_direction("-y").ny == -1.0
        assert parse_direction("z").nz == 1.0

    def test_unit_triple(self):
        d = parse_direction("0.6,0.8,0.0")
        assert d.nx == pytest.approx(0.6)

    def test_non_unit_triple_reports_norm(self):
        with pytest.raises(ValidationError) as err:
            parse_direction("1.0,1.0,0.0")
        assert "norm" in str(err.value)
        assert "1.41" in str(err.value)

    def test_unparseable(self):
        with pytest.raises(ValidationError):
            parse_direction("north")
        with pytest.raises(ValidationError):
            parse_direction("1.0,2.0")


class TestLhvWeights:
    def cfg_with_lhv(self, entries):
        sections = {"experiment": {"kind": "chsh"}, "lhv": entries}
        return ExperimentConfig("chsh", sections)

    def test_valid_sparse(self):
        w = parse_lhv_weights(self.cfg_with_lhv({"w0": "0.5", "w3": "0.5"}), 2)
        assert w == [0.5, 0.0, 0.0, 0.5]

    def test_negative_entry_names_pattern(self):
        with pytest.raises(ValidationError) as err:
            parse_lhv_weights(self.cfg_with_lhv(
                {"w0": "0.6", "w5": "-0.1", "w3": "0.5"}), 3)
        assert "(+,-,+)" in str(err.value)

    def test_sum_enforced(self):
        with pytest.raises(ValidationError):
            parse_lhv_weights(self.cfg_with_lhv({"w0": "0.9"}), 2)

    def test_bad_keys(self):
        with pytest.raises(ValidationError):
            parse_lhv_weights(self.cfg_with_lhv({"q1": "1.0"}), 2)
        with pytest.raises(ValidationError):
            parse_lhv_weights(self.cfg_with_lhv({"w99": "1.0"}), 2)


class TestValidateExperiment:
    def test_missing_seed_names_field(self, tmp_path):
        path = write(tmp_path, (
            "[experiment]\nkind = chsh\nmode = born_sampling\ntrials = 10\n"
            "[directions]\na1 = 0.0\na2 = 1.0\nb1 = 2.0\nb2 = 3.0\n"))
        with pytest.raises(ValidationError) as err:
            validate_experiment(parse_config(path))
        assert "seed" in str(err.value)

    def test_unknown_kind(self, tmp_path):
        path = write(tmp_path, "[experiment]\nkind = teleport\n")
        with pytest.raises(ValidationError):
            validate_experiment(parse_config(path))

    def test_twoslit_diagnostics_include_fringe_spacing(self):
        cfg = parse_config(CONFIG_DIR / "twoslit.cfg")
        notes = validate_experiment(cfg)
        joined = "\n".join(notes)
        assert "fringe spacing" in joined
        # lambda l2 / d = 0.01 * 100 / 1 = 1.0
        assert "1.0" in joined

    def test_trials_must_be_positive(self, tmp_path):
        path = write(tmp_path, (
            "[experiment]\nkind = epr\nmode = born_sampling\nseed = 1\ntrials = 0\n"
            "[directions]\na = 0.0\nb = 1.0\n"))
        with pytest.raises(ValidationError):
            validate_experiment(parse_config(path))

    def test_malformed_sequence_rejected(self, tmp_path):
        path = write(tmp_path, (
            "[experiment]\nkind = sterngerlach\nseed = 1\ntrials = 10\n"
            "[sequence]\nstage1 = recombine y\nstage2 = analyze x\n"))
        with pytest.raises(ValidationError):
            validate_experiment(parse_config(path))

    def test_overrides_flow_into_validation(self, tmp_path):
        path = write(tmp_path, (
            "[experiment]\nkind = chsh\nmode = born_sampling\ntrials = 10\n"
            "[directions]\na1 = 0.0\na2 = 1.0\nb1 = 2.0\nb2 = 3.0\n"))
        cfg = apply_overrides(parse_config(path), seed=9)
        notes = validate_experiment(cfg)
        assert any("seed: 9" in n for n in notes)
