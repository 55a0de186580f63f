import json
import math
import os

import numpy as np
import pytest

from covertfas.cli import SWEEP_HEADER, main
from covertfas.config import ConfigParseError, load_config

pytestmark = pytest.mark.usefixtures("single_thread")


@pytest.fixture
def single_thread(monkeypatch):
    monkeypatch.setenv("COVERTFAS_THREADS", "1")


SMALL_SWEEP = """\
[sweep]
axis = zeta
start = 1.01
stop = 2.0
points = 5
scenarios = fas-20dbm, fpa-20dbm

[qmc]
target_abs_error = 1e-4
"""


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestEval:
    def test_preset_reports_optimal_threshold(self, capsys):
        code, out, _ = run_cli(capsys, "eval", "--preset", "paper-sec4")
        assert code == 0
        record = json.loads(out)
        assert record["zeta_star"] == pytest.approx(1.01)
        assert record["p_a"] == pytest.approx(0.1)
        assert record["sigma2_w"] == pytest.approx(1.0)
        for key in ("p_md", "p_fa", "cop", "p_out", "p_suc"):
            assert 0.0 <= record[key] <= 1.0
            if key != "p_fa":
                assert record[f"{key}_err"] >= 0.0

    def test_zero_rate_has_no_outage(self, capsys, tmp_path):
        cfg = tmp_path / "c.ini"
        cfg.write_text("[link]\nr_b = 0\n")
        code, out, _ = run_cli(capsys, "eval", "--preset", "paper-sec4", "--config", str(cfg))
        assert code == 0
        assert json.loads(out)["p_out"] == 0.0

    def test_single_port_exponential_point(self, capsys, tmp_path):
        # zeta - sigma_w^2 = p_a makes the single-port miss probability 1 - 1/e
        cfg = tmp_path / "c.ini"
        cfg.write_text("[link]\nzeta = 1.1\n\n[willie]\nn1 = 1\nn2 = 1\nw1 = 0\nw2 = 0\n")
        code, out, _ = run_cli(capsys, "eval", "--preset", "paper-sec4", "--config", str(cfg))
        assert code == 0
        assert json.loads(out)["p_md"] == pytest.approx(1 - math.exp(-1), abs=1e-9)


class TestSweep:
    def test_deterministic_bytes(self, capsys, tmp_path):
        cfg = tmp_path / "s.ini"
        cfg.write_text(SMALL_SWEEP)
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run_cli(capsys, "sweep", "--preset", "paper-sec4", "--config", str(cfg), "--out", str(a))[0] == 0
        assert run_cli(capsys, "sweep", "--preset", "paper-sec4", "--config", str(cfg), "--out", str(b))[0] == 0
        assert a.read_bytes() == b.read_bytes()

    def test_layout_and_ranges(self, capsys, tmp_path):
        cfg = tmp_path / "s.ini"
        cfg.write_text(SMALL_SWEEP)
        out = tmp_path / "s.csv"
        assert run_cli(capsys, "sweep", "--preset", "paper-sec4", "--config", str(cfg), "--out", str(out))[0] == 0
        lines = out.read_text().splitlines()
        assert lines[0] == SWEEP_HEADER
        rows = [ln.split(",") for ln in lines[1:]]
        assert len(rows) == 10  # 2 scenarios x 5 points
        assert [r[0] for r in rows] == ["fas-20dbm"] * 5 + ["fpa-20dbm"] * 5
        for scenario_rows in (rows[:5], rows[5:]):
            values = [float(r[2]) for r in scenario_rows]
            assert values == sorted(values)
            cops = [float(r[6]) for r in scenario_rows]
            assert all(b <= a + 2e-3 for a, b in zip(cops, cops[1:]))  # nonincreasing in zeta
        for r in rows:
            for idx in (3, 5, 6, 8, 10):  # p_md, p_fa, cop, p_out, p_suc
                assert 0.0 <= float(r[idx]) <= 1.0

    def test_empty_scenarios_header_only(self, capsys, tmp_path):
        cfg = tmp_path / "s.ini"
        cfg.write_text("[sweep]\nscenarios =\n")
        out = tmp_path / "s.csv"
        assert run_cli(capsys, "sweep", "--preset", "paper-sec4", "--config", str(cfg), "--out", str(out))[0] == 0
        assert out.read_text() == SWEEP_HEADER + "\n"

    def test_eval_reproduces_sweep_row(self, capsys, tmp_path):
        cfg = tmp_path / "s.ini"
        cfg.write_text(SMALL_SWEEP)
        out = tmp_path / "s.csv"
        run_cli(capsys, "sweep", "--preset", "paper-sec4", "--config", str(cfg), "--out", str(out))
        row = out.read_text().splitlines()[3].split(",")
        zeta, row_seed = row[2], row[12]
        point = tmp_path / "p.ini"
        point.write_text(f"[link]\nzeta = {zeta}\n")
        code, text, _ = run_cli(
            capsys, "eval", "--preset", "paper-sec4", "--config", str(point), "--seed", row_seed
        )
        assert code == 0
        record = json.loads(text)
        assert f"{record['p_md']:.17g}" == row[3]
        assert f"{record['cop']:.17g}" == row[6]
        assert f"{record['p_out']:.17g}" == row[8]
        assert f"{record['p_suc']:.17g}" == row[10]

    def test_thread_cap_does_not_change_bytes(self, capsys, tmp_path, monkeypatch):
        cfg = tmp_path / "s.ini"
        cfg.write_text(SMALL_SWEEP)
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        monkeypatch.setenv("COVERTFAS_THREADS", "1")
        run_cli(capsys, "sweep", "--preset", "paper-sec4", "--config", str(cfg), "--out", str(a))
        monkeypatch.setenv("COVERTFAS_THREADS", "4")
        run_cli(capsys, "sweep", "--preset", "paper-sec4", "--config", str(cfg), "--out", str(b))
        assert a.read_bytes() == b.read_bytes()


class TestValidate:
    def test_single_port_grid_passes(self, capsys, tmp_path):
        cfg = tmp_path / "v.ini"
        cfg.write_text(
            "[bob]\nn1 = 1\nn2 = 1\nw1 = 0\nw2 = 0\n\n"
            "[willie]\nn1 = 1\nn2 = 1\nw1 = 0\nw2 = 0\n\n"
            "[sweep]\naxis = zeta\nstart = 1.01\nstop = 2.0\npoints = 4\nscenarios = base\n\n"
            "[mc]\ntrials = 200000\n"
        )
        out = tmp_path / "v.csv"
        code, text, _ = run_cli(
            capsys, "validate", "--preset", "paper-sec4", "--config", str(cfg), "--out", str(out)
        )
        assert code == 0
        assert "VERDICT: PASS" in text
        lines = out.read_text().splitlines()
        assert len(lines) == 1 + 4 * 5
        assert all(ln.endswith(",PASS") for ln in lines[1:])

    def test_starved_oracle_fails_honestly(self, capsys, tmp_path):
        cfg = tmp_path / "v.ini"
        cfg.write_text(
            "[sweep]\naxis = zeta\nstart = 1.05\nstop = 1.3\npoints = 3\nscenarios = base\n\n"
            "[mc]\ntrials = 1\n"
        )
        out = tmp_path / "v.csv"
        code, text, _ = run_cli(
            capsys, "validate", "--preset", "paper-sec4", "--config", str(cfg), "--out", str(out)
        )
        assert code == 1
        assert "VERDICT: FAIL" in text
        assert any(ln.endswith(",FAIL") for ln in out.read_text().splitlines()[1:])


class TestErrorPaths:
    def test_malformed_config_exits_2_with_line(self, capsys, tmp_path):
        cfg = tmp_path / "bad.ini"
        cfg.write_text("[link]\np_a_dbm = twenty\n")
        code, _, err = run_cli(capsys, "eval", "--config", str(cfg))
        assert code == 2
        assert "bad.ini:2" in err
        assert "p_a_dbm" in err

    def test_unknown_key_exits_2(self, capsys, tmp_path):
        cfg = tmp_path / "bad.ini"
        cfg.write_text("[link]\nnonsense = 1\n")
        code, _, err = run_cli(capsys, "eval", "--config", str(cfg))
        assert code == 2
        assert "nonsense" in err

    def test_unparseable_ini_exits_2(self, capsys, tmp_path):
        cfg = tmp_path / "bad.ini"
        cfg.write_text("not an ini at all\n")
        assert run_cli(capsys, "eval", "--config", str(cfg))[0] == 2

    def test_invariant_violation_exits_3(self, capsys, tmp_path):
        cfg = tmp_path / "bad.ini"
        cfg.write_text("[link]\nmu = -1\n")
        assert run_cli(capsys, "eval", "--preset", "paper-sec4", "--config", str(cfg))[0] == 3
        cfg.write_text("[sweep]\npoints = 1\n")
        out = tmp_path / "x.csv"
        assert (
            run_cli(capsys, "sweep", "--preset", "paper-sec4", "--config", str(cfg), "--out", str(out))[0]
            == 3
        )

    def test_unwritable_out_exits_4(self, capsys, tmp_path):
        cfg = tmp_path / "s.ini"
        cfg.write_text(SMALL_SWEEP)
        code, _, err = run_cli(
            capsys,
            "sweep", "--preset", "paper-sec4", "--config", str(cfg),
            "--out", str(tmp_path / "no-such-dir" / "x.csv"),
        )
        assert code == 4
        assert "cannot write" in err

    def test_missing_config_exits_4(self, capsys, tmp_path):
        assert run_cli(capsys, "eval", "--config", str(tmp_path / "absent.ini"))[0] == 4


class TestConfigResolution:
    def test_defaults_to_reference_preset(self):
        cfg = load_config()
        assert cfg.link.p_a == pytest.approx(0.1)
        assert cfg.willie.grid.total_ports == 4
        assert cfg.sweep.axis == "zeta"
        assert [s.name for s in cfg.sweep.scenarios] == [
            "fas-20dbm", "fas-25dbm", "fpa-20dbm", "fpa-25dbm",
        ]

    def test_power_axis_switches_default_scenarios(self):
        cfg = load_config("[sweep]\naxis = p_a_dbm\nstart = 0\nstop = 40\n", preset="paper-sec4")
        assert [s.name for s in cfg.sweep.scenarios] == ["fpa", "bob-up", "willie-up", "both-up"]

    def test_undefined_scenario_rejected(self):
        with pytest.raises(ConfigParseError):
            load_config("[sweep]\nscenarios = ghost\n", preset="paper-sec4")

    def test_seed_override_wins(self):
        cfg = load_config("[qmc]\nseed = 9\n", preset="paper-sec4", seed_override=1234)
        assert cfg.seed == 1234

    def test_axis_application(self):
        from covertfas.cli import apply_axis

        cfg = load_config()
        assert apply_axis(cfg, "zeta", 1.7).zeta == 1.7
        assert apply_axis(cfg, "p_a_dbm", 30.0).link.p_a == pytest.approx(1.0)
        bumped = apply_axis(cfg, "n_ports_w", 6)
        assert bumped.willie.grid.total_ports == 6
        assert bumped.willie.grid.n1_count == 2
        wider = apply_axis(cfg, "w_aperture", 2.5)
        assert wider.bob.grid.w1 == 2.5
        assert wider.willie.grid.w2 == 2.5
        with pytest.raises(ValueError):
            apply_axis(cfg, "n_ports_w", 2.5)
