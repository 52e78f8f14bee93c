import pytest

from qdice import ConfigError, DeltaXMode
from qdice.config import load_config, parse_config_text

MINIMAL = """
schema = 1
case = a
gamma0_kbt = 1
"""


class TestParsing:
    def test_minimal_file_fills_defaults(self):
        run = parse_config_text(MINIMAL)
        assert run.cases == ["a"]
        assert run.temperatures == [1.0]
        assert run.n_steps == 2000
        assert run.epsilon == 0.01
        assert run.t_max == [10.0]
        assert run.delta_x_mode is DeltaXMode.BALLISTIC
        cfg = run.cell_model("a", 1.0)
        assert cfg.kb_t == 1.0 and cfg.gamma0 == 1.0

    def test_comments_and_blank_lines_ignored(self):
        run = parse_config_text("# header\n\nschema = 1  # trailing\ncase = b\ngamma0_kbt = 0\n")
        assert run.cases == ["b"]

    def test_unknown_key_rejected_with_line(self):
        text = MINIMAL + "wibble = 3\n"
        with pytest.raises(ConfigError, match=r":5: unknown key 'wibble'"):
            parse_config_text(text)

    def test_unknown_case_label_lists_allowed(self):
        with pytest.raises(ConfigError, match="a, b, c, d"):
            parse_config_text("schema = 1\ncase = e\ngamma0_kbt = 0\n")

    def test_n_steps_lower_bound(self):
        with pytest.raises(ConfigError, match="n_steps"):
            parse_config_text(MINIMAL + "n_steps = 1\n")

    def test_missing_schema(self):
        with pytest.raises(ConfigError, match="schema"):
            parse_config_text("case = a\ngamma0_kbt = 0\n")

    def test_duplicate_key(self):
        with pytest.raises(ConfigError, match="duplicate"):
            parse_config_text("schema = 1\nschema = 1\n")

    def test_malformed_line(self):
        with pytest.raises(ConfigError, match="key = value"):
            parse_config_text("schema = 1\njust words\n")

    def test_bad_number_has_context(self):
        with pytest.raises(ConfigError, match="line 2.*omega"):
            parse_config_text("schema = 1\nomega = fast\n")

    def test_t_max_broadcast_and_mismatch(self):
        run = parse_config_text("schema = 1\ngamma0_kbt = 0, 1, 100\nt_max = 5\n")
        assert run.t_max == [5.0, 5.0, 5.0]
        with pytest.raises(ConfigError, match="t_max"):
            parse_config_text("schema = 1\ngamma0_kbt = 0, 1\nt_max = 1, 2, 3\n")

    def test_negative_temperature_rejected(self):
        with pytest.raises(ConfigError, match="gamma0_kbt"):
            parse_config_text("schema = 1\ngamma0_kbt = -1\n")

    def test_epsilon_domain(self):
        with pytest.raises(ConfigError, match="epsilon"):
            parse_config_text(MINIMAL + "epsilon = 1.5\n")

    def test_delta_x_mode_values(self):
        run = parse_config_text(MINIMAL + "delta_x_mode = constant\n")
        assert run.delta_x_mode is DeltaXMode.CONSTANT
        with pytest.raises(ConfigError, match="delta_x_mode"):
            parse_config_text(MINIMAL + "delta_x_mode = wobbly\n")

    def test_formats_validated(self):
        with pytest.raises(ConfigError, match="formats"):
            parse_config_text(MINIMAL + "formats = csv, pdf\n")

    def test_model_invariants_checked_at_load(self):
        with pytest.raises(ConfigError, match="cutoff"):
            parse_config_text(MINIMAL + "omega = 5\ncutoff = 1\n")

    def test_lambda_key_maps_to_coupling(self):
        run = parse_config_text(MINIMAL + "lambda = 0.25\n")
        assert run.cell_model("a", 1.0).lam == 0.25


class TestCellModel:
    def test_zero_temperature_row_zeroes_gamma0(self):
        run = parse_config_text("schema = 1\ncase = d\ngamma0_kbt = 0\n")
        cfg = run.cell_model("d", 0.0)
        assert cfg.gamma0 == 0.0 and cfg.kb_t == 0.0

    def test_product_split(self):
        run = parse_config_text(MINIMAL + "gamma0 = 2.0\n")
        cfg = run.cell_model("a", 100.0)
        assert cfg.gamma0 * cfg.kb_t == pytest.approx(100.0)

    def test_trajectory_defaults_to_two_sigma(self):
        run = parse_config_text(MINIMAL + "sigma = 1.5\n")
        cfg = run.cell_model("a", 1.0)
        traj = run.trajectory(cfg)
        assert traj.dx0 == 3.0 and traj.dxf == 3.0


class TestLoadConfig:
    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read"):
            load_config(tmp_path / "nope.cfg")

    def test_round_trip_file(self, tmp_path):
        p = tmp_path / "run.cfg"
        p.write_text(MINIMAL)
        assert load_config(p).cases == ["a"]
