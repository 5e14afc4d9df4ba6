"""Command-line interface: subcommands, config handling, exit codes and
deterministic outputs."""

import json

import pytest

from comp_coverage.cli import build_parser, main
from comp_coverage.icri import beta_total


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestParsing:
    def test_help_enumerates_subcommands(self):
        text = build_parser().format_help()
        for name in ("beta", "icri", "icri-tiers", "ccp-map", "worst-case",
                     "solve-density", "sweep", "compare", "validate", "geometry"):
            assert name in text

    def test_unknown_config_key_fails(self, tmp_path, capsys):
        cfgfile = tmp_path / "bad.json"
        cfgfile.write_text(json.dumps({"network": {"d": 500, "n": 2, "zeta": 1}}))
        code, _, err = run(["beta", "--config", str(cfgfile)], capsys)
        assert code == 2
        record = json.loads(err.strip())
        assert record["error"] == "config"
        assert "zeta" in record["detail"]

    def test_invalid_network_value_fails(self, capsys):
        code, _, err = run(["beta", "--n", "2", "--alpha", "1.5"], capsys)
        assert code == 2
        assert json.loads(err.strip())["error"] == "config"

    def test_flag_overrides_config(self, tmp_path, capsys):
        cfgfile = tmp_path / "net.json"
        cfgfile.write_text(json.dumps({"network": {"d": 700.0, "n": 2}}))
        code, out, _ = run(["worst-case", "--config", str(cfgfile), "--d", "500"],
                           capsys)
        assert code == 0
        assert json.loads(out)["d_m"] == 500.0


class TestBeta:
    def test_single_entry(self, capsys):
        code, out, _ = run(["beta", "--alpha", "4", "--n", "2"], capsys)
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "alpha,n,tier,beta_j_sum,beta_total"
        value = float(lines[1].split(",")[-1])
        assert value == pytest.approx(beta_total(4.0, 2).total, rel=1e-9)
        assert any(line.startswith("# config") for line in lines)

    def test_full_grid(self, capsys):
        code, out, _ = run(["beta"], capsys)
        data = [l for l in out.strip().splitlines()
                if l and not l.startswith("#") and not l.startswith("alpha")]
        assert code == 0 and len(data) == 6


class TestOutputs:
    def test_ccp_map_columns(self, capsys):
        code, out, _ = run(["ccp-map", "--n", "3", "--d", "1006", "--grid", "10"],
                           capsys)
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "x_m,y_m,r1_m,r2_m,r3_m,ccp,ergodic_bps_hz"
        data = [l for l in lines if l and not l.startswith(("#", "x_m"))]
        assert len(data) == 100
        probs = [float(l.split(",")[5]) for l in data]
        assert all(0.0 <= p <= 1.0 for p in probs)

    def test_worst_case_fields(self, capsys):
        code, out, _ = run(["worst-case", "--n", "2", "--d", "1034", "--c0", "0.5"],
                           capsys)
        doc = json.loads(out)
        assert code == 0
        assert len(doc["points"]) == 2
        assert doc["points"][0]["distances_m"] == [1034.0, 1034.0]
        assert 0.0 <= doc["worst_case_ccp"] <= 1.0

    def test_geometry_dump(self, capsys):
        code, out, _ = run(["geometry", "dump", "--n", "2", "--d", "500"], capsys)
        doc = json.loads(out)
        assert code == 0
        tiers = [r["tier"] for r in doc["regions"]]
        assert tiers.count(1) == 4 and tiers.count(2) >= 1
        assert all(len(r["vertices"]) == 4 for r in doc["regions"])

    def test_icri_tiers(self, tmp_path, capsys):
        cfgfile = tmp_path / "cfg.json"
        cfgfile.write_text(json.dumps({"network": {"d": 500.0, "n": 2},
                                       "sweep": {"d_grid": [500.0]}}))
        code, out, _ = run(["icri-tiers", "--config", str(cfgfile)], capsys)
        assert code == 0
        data = [l for l in out.splitlines() if l and not l.startswith(("#", "d_m"))]
        assert len(data) == 2  # one row per tier

    def test_sweep_schemes(self, tmp_path, capsys):
        cfgfile = tmp_path / "cfg.json"
        cfgfile.write_text(json.dumps({"sweep": {"d_grid": [500.0, 1000.0]}}))
        code, out, _ = run(["sweep", "--config", str(cfgfile), "--n", "2",
                            "--schemes", "n2,n3"], capsys)
        assert code == 0
        data = [l for l in out.splitlines() if l.startswith("comp-")]
        assert len(data) == 4

    def test_solve_density_json(self, capsys):
        code, out, _ = run(["solve-density", "--n", "3", "--m", "1", "--alpha", "4",
                            "--sigma-l", "4", "--target", "0.5", "--c0", "0.5"],
                           capsys)
        doc = json.loads(out)
        assert code == 0
        assert doc["status"] == "solved"
        assert doc["lambda_per_m2"] == pytest.approx(3.1492e-07, rel=2e-3)

    def test_solver_infeasibility_exit_code(self, capsys):
        code, out, err = run(["solve-density", "--n", "2", "--alpha", "3",
                              "--target", "0.95", "--c0", "0.5"], capsys)
        assert code == 3
        assert json.loads(out)["status"] == "interference_limited_infeasible"
        assert json.loads(err.strip())["error"] == "infeasible"

    def test_too_few_trials_rejected(self, capsys):
        code, _, err = run(["validate", "--trials", "10"], capsys)
        assert code == 2


class TestDeterminism:
    def test_validate_is_byte_identical(self, tmp_path):
        cfgfile = tmp_path / "cfg.json"
        cfgfile.write_text(json.dumps({
            "network": {"d": 500.0, "n": 2, "sigma_l": 6.0},
            "mc": {"trials": 2000, "seed": 99},
            "sweep": {"c0_grid": [0.5, 1.0]},
        }))
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["validate", "--config", str(cfgfile), "--out", str(out1)]) == 0
        assert main(["validate", "--config", str(cfgfile), "--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_worker_count_does_not_change_bytes(self, tmp_path):
        a, b = tmp_path / "w1.csv", tmp_path / "w4.csv"
        base = ["validate", "--d", "500", "--n", "2", "--trials", "2000",
                "--seed", "7"]
        assert main(base + ["--workers", "1", "--out", str(a)]) == 0
        assert main(base + ["--workers", "4", "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_validate_columns(self, capsys):
        code, out, _ = run(["validate", "--d", "500", "--n", "2", "--sigma-l", "6",
                            "--trials", "1500", "--seed", "3"], capsys)
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "scenario_id,c0,analytic_ccp,mc_ccp,mc_stderr,trials,seed"
        footer = [l for l in lines if l.startswith("#")]
        assert any("seed = 3" in l for l in footer)
        assert any("config" in l for l in footer)
