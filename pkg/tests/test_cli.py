import csv
import json

import jsonschema
import pytest

from hamalg.cli import _load_schema, main


def run_cli(*argv):
    return main(list(argv))


def read_json(path):
    with open(path) as fh:
        return json.load(fh)


class TestVerify:
    def test_operator_passes(self, tmp_path):
        out = tmp_path / "report.json"
        code = run_cli("verify", "--realization", "operator", "--dim", "3",
                       "--hbar", "1", "--trials", "40", "--out", str(out))
        assert code == 0
        doc = read_json(out)
        jsonschema.validate(doc, _load_schema())
        assert doc["passed"]
        assert doc["algebra"]["dim"] == 3

    def test_phase_space_passes(self, tmp_path):
        out = tmp_path / "report.json"
        code = run_cli("verify", "--realization", "phase-space", "--pairs", "1",
                       "--degree", "3", "--trials", "20", "--out", str(out))
        assert code == 0

    def test_composed_theorem(self, tmp_path):
        out = tmp_path / "report.json"
        code = run_cli("verify", "--composed", "--a1", "1", "--a2", "4", "--a12", "9",
                       "--trials", "25", "--out", str(out))
        assert code == 0
        assert read_json(out)["algebra"]["kind"] == "qq"

    def test_hybrid(self, tmp_path):
        out = tmp_path / "report.json"
        code = run_cli("verify", "--hybrid", "--a1", "1", "--trials", "20",
                       "--out", str(out))
        assert code == 0
        assert read_json(out)["algebra"]["kind"] == "qc"

    def test_invalid_dim_usage_error(self):
        assert run_cli("verify", "--dim", "0") == 2

    def test_invalid_tolerance_usage_error(self):
        assert run_cli("verify", "--dim", "2", "--tolerance", "-1") == 2

    def test_unwritable_out_usage_error(self, tmp_path):
        assert run_cli("verify", "--dim", "2", "--trials", "5",
                       "--out", str(tmp_path / "nodir" / "x.json")) == 2

    def test_config_file_supplies_defaults(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"dim": 4, "trials": 10, "hbar": 2.0}))
        out = tmp_path / "report.json"
        assert run_cli("verify", "--config", str(cfg), "--out", str(out)) == 0
        doc = read_json(out)
        assert doc["algebra"]["dim"] == 4
        assert doc["checks"][0]["trials"] == 10

    def test_flags_override_config(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"dim": 4, "trials": 10}))
        out = tmp_path / "report.json"
        assert run_cli("verify", "--config", str(cfg), "--dim", "2",
                       "--out", str(out)) == 0
        assert read_json(out)["algebra"]["dim"] == 2

    def test_unknown_config_key_usage_error(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"no_such_option": 1}))
        assert run_cli("verify", "--config", str(cfg)) == 2

    def test_seed_env_fallback(self, tmp_path, monkeypatch):
        out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
        monkeypatch.setenv("HAMALG_SEED", "99")
        run_cli("verify", "--dim", "2", "--trials", "5", "--out", str(out1))
        monkeypatch.delenv("HAMALG_SEED")
        run_cli("verify", "--dim", "2", "--trials", "5", "--seed", "99",
                "--out", str(out2))
        a, b = read_json(out1), read_json(out2)
        assert a["checks"][0]["max_relative_defect"] == b["checks"][0]["max_relative_defect"]

    def test_determinism_with_seed(self, tmp_path):
        outs = []
        for name in ("a.json", "b.json"):
            out = tmp_path / name
            run_cli("verify", "--dim", "3", "--trials", "10", "--seed", "5",
                    "--out", str(out))
            outs.append(read_json(out))
        assert outs[0]["checks"] == outs[1]["checks"]


class TestBrackets:
    def test_full_pattern_confirmed(self, tmp_path):
        out = tmp_path / "brackets.json"
        code = run_cli("brackets", "--trials", "25", "--budget", "200",
                       "--out", str(out))
        assert code == 0
        doc = read_json(out)
        jsonschema.validate(doc, _load_schema())
        assert doc["passed"]
        kinds = {d["kind"]: d for d in doc["defects"]}
        assert kinds["hybrid_paper"]["jacobi_defect"] <= 1e-10
        assert kinds["boucher_traschen"]["jacobi_defect"] > 1e-6
        assert kinds["anderson"]["antisymmetry_defect"] > 1e-6
        searches = {(s["kind"], s["desideratum"]): s for s in doc["witness_searches"]}
        assert searches[("boucher_traschen", "jacobi")]["found"]
        assert searches[("boucher_traschen", "jacobi")]["replay_agrees"]
        assert not searches[("hybrid_paper", "jacobi")]["found"]

    def test_single_kind(self, tmp_path):
        out = tmp_path / "brackets.json"
        code = run_cli("brackets", "--kind", "hybrid_paper", "--trials", "20",
                       "--budget", "100", "--out", str(out))
        assert code == 0
        doc = read_json(out)
        assert len(doc["defects"]) == 1
        assert doc["defects"][0]["kind"] == "hybrid_paper"

    def test_zero_budget_usage_error(self):
        assert run_cli("brackets", "--kind", "anderson", "--budget", "0") == 2


class TestSimulate:
    def test_qq_csv_and_summary(self, tmp_path, capsys):
        out = tmp_path / "traj.csv"
        code = run_cli("simulate", "--regime", "qq", "--m1", "1", "--m2", "1",
                       "--g0", "0.7", "--t0", "0", "--dt", "1.3", "--hbar", "1",
                       "--t-end", "2", "--samples", "9", "--out", str(out))
        assert code == 0
        summary = json.loads(capsys.readouterr().out)
        jsonschema.validate(summary, _load_schema())
        assert summary["back_reaction_gap"] == pytest.approx(0.91, abs=1e-12)
        with open(out) as fh:
            rows = list(csv.reader(fh))
        assert rows[0][0] == "t"
        assert len(rows) == 10
        times = [float(r[0]) for r in rows[1:]]
        assert times == sorted(times)
        # p2 coefficient on p1 at the end
        idx = rows[0].index("p2.p1")
        assert float(rows[-1][idx]) == pytest.approx(-0.91, abs=1e-12)

    def test_qc_gap_zero(self, tmp_path, capsys):
        out = tmp_path / "traj.csv"
        code = run_cli("simulate", "--regime", "qc", "--g0", "0.7", "--dt", "1.3",
                       "--t-end", "2", "--out", str(out))
        assert code == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["back_reaction_gap"] <= 1e-12

    def test_missing_out_streams_csv(self, capsys):
        code = run_cli("simulate", "--regime", "qq", "--samples", "3")
        assert code == 0
        captured = capsys.readouterr().out
        assert captured.startswith("t,")

    def test_summary_out_file(self, tmp_path):
        out = tmp_path / "traj.csv"
        summary = tmp_path / "summary.json"
        code = run_cli("simulate", "--regime", "qq", "--out", str(out),
                       "--summary-out", str(summary))
        assert code == 0
        assert read_json(summary)["report_kind"] == "simulate"

    def test_bad_samples_usage_error(self):
        assert run_cli("simulate", "--samples", "1") == 2


class TestUniqueness:
    def test_diagonal_passes(self, tmp_path):
        out = tmp_path / "verdict.json"
        assert run_cli("uniqueness", "--a1", "1", "--a2", "1", "--a12", "1",
                       "--out", str(out)) == 0
        doc = read_json(out)
        jsonschema.validate(doc, _load_schema())
        assert doc["passed"]

    def test_off_diagonal_fails(self, tmp_path):
        out = tmp_path / "verdict.json"
        assert run_cli("uniqueness", "--a1", "1", "--a2", "4", "--a12", "9",
                       "--out", str(out)) == 1
        doc = read_json(out)
        factors = (doc["verdicts"][0]["left"]["measured_factor"],
                   doc["verdicts"][0]["right"]["measured_factor"])
        assert factors[0] == pytest.approx(1 / 3, abs=1e-10)
        assert factors[1] == pytest.approx(2 / 3, abs=1e-10)

    def test_missing_constant_usage_error(self):
        assert run_cli("uniqueness", "--a1", "1", "--a2", "1") == 2

    def test_scan_diagonal_only(self, tmp_path):
        out = tmp_path / "scan.csv"
        jout = tmp_path / "scan.json"
        code = run_cli("uniqueness", "scan", "--grid", "0.25:4:3",
                       "--out", str(out), "--json-out", str(jout))
        assert code == 0
        with open(out) as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 27
        passing = [r for r in rows if r["passed"] == "1"]
        assert len(passing) == 3
        for r in passing:
            assert r["a1"] == r["a2"] == r["a12"]
        doc = read_json(jout)
        jsonschema.validate(doc, _load_schema())
        assert doc["pass_set_is_diagonal"]

    def test_scan_bad_grid_usage_error(self):
        assert run_cli("uniqueness", "scan", "--grid", "4:1:5") == 2
