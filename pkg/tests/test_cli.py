"""Tests for the lastpass command line."""

import json

import numpy as np
import pytest

from presets import MODEL_PRESETS
from src.cli import cli_main
from src.stats_mc import SampleTable, ecdf


@pytest.fixture
def m1_file(tmp_path):
    path = tmp_path / "m1.json"
    path.write_text(json.dumps(MODEL_PRESETS["M1"]))
    return path


class TestExitCodes:
    """Usage errors exit 2, failed checks 1, success 0."""

    def test_unknown_subcommand(self, capsys):
        assert cli_main(["frobnicate"]) == 2
        assert "invalid choice" in capsys.readouterr().err

    def test_no_subcommand(self):
        assert cli_main([]) == 2

    def test_help(self):
        assert cli_main(["--help"]) == 0

    def test_missing_model(self, capsys):
        assert cli_main(["transform"]) == 2
        assert "model is required" in capsys.readouterr().err

    def test_unknown_preset(self, capsys):
        assert cli_main(["transform", "--preset", "M9"]) == 2
        assert "Unknown preset" in capsys.readouterr().err

    def test_bad_model_file(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"drift": 1.0}))

        assert cli_main(["transform", "--model", str(path)]) == 2
        assert "Model config invalid" in capsys.readouterr().err

    def test_bad_log_level(self):
        assert cli_main(["transform", "--preset", "M1", "--log-level", "chatty"]) == 2


class TestEnum:
    def test_prop3_fair_two_steps(self, capsys):
        code = cli_main(
            ["enum", "--n", "2", "--steps", "-1:1/2,1:1/2", "--cond", "all", "--check", "prop3"]
        )
        report = json.loads(capsys.readouterr().out)

        assert code == 0
        assert report["pass"] is True
        laws = next(c for c in report["checks"] if c["name"] == "exact_laws")["details"]["laws"]
        assert laws["n_minus"] == {"0": "1/4", "1": "1/4", "2": "1/2"}
        assert laws["n_plus"] == {"0": "1/2", "1": "1/4", "2": "1/4"}

    def test_laws_only(self, capsys):
        code = cli_main(["enum", "--n", "2", "--steps", "fair", "--functional", "f_fwd"])
        output = json.loads(capsys.readouterr().out)

        assert code == 0
        assert output["laws"] == {"f_fwd": {"0": "1/4", "1": "1/4", "2": "1/2"}}

    def test_corollary(self, capsys):
        assert cli_main(["enum", "--n", "4", "--steps", "fair", "--check", "corollary"]) == 0

    @pytest.mark.parametrize("cond", ["all", "lastzero"])
    def test_corollary_laws_are_on_last_visit_event(self, cond, capsys):
        code = cli_main(
            ["enum", "--n", "2", "--steps", "fair", "--cond", cond, "--check", "corollary"]
        )
        report = json.loads(capsys.readouterr().out)

        assert code == 0
        assert report["config"]["event"] == "lastzero"
        checks = {c["name"]: c for c in report["checks"]}
        summary = checks["exact_laws"]["details"]["laws"]
        certified = checks["six_laws_equal"]["details"]["laws"]
        for name, law in certified.items():
            assert summary[name] == law
        # (+1,+1), (+1,-1) and (-1,+1) end their last visit at 0; (-1,-1) does not
        assert summary["n_minus"] != {"0": "1/4", "1": "1/4", "2": "1/2"}

    def test_corollary_with_interval_event_is_config_error(self, capsys):
        code = cli_main(
            ["enum", "--n", "2", "--steps", "fair", "--cond", "[0,inf]", "--check", "corollary"]
        )

        assert code == 2

    def test_prop3_on_last_visit_event_is_config_error(self, capsys):
        code = cli_main(
            ["enum", "--n", "2", "--steps", "fair", "--cond", "lastzero", "--check", "prop3"]
        )

        assert code == 2

    def test_interval_event(self, capsys):
        code = cli_main(
            ["enum", "--n", "3", "--steps", "fair", "--cond", "[-1,inf]", "--check", "prop3"]
        )

        assert code == 0

    def test_csv_summary(self, capsys):
        cli_main(
            ["enum", "--n", "2", "--steps", "fair", "--check", "reversal"]
            + ["--format", "csv-summary"]
        )

        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "name,claim,statistic,threshold,pass,informational"
        assert lines[-1].startswith("reversal_tv,reversal-law")


class TestVerify:
    def test_list(self, capsys):
        assert cli_main(["verify", "--list"]) == 0
        names = [s["name"] for s in json.loads(capsys.readouterr().out)]
        assert "prop1" in names and "walk-corollary" in names

    def test_list_by_claim(self, capsys):
        assert cli_main(["verify", "--list", "--claim", "two-class-partition"]) == 0
        listed = json.loads(capsys.readouterr().out)

        assert [s["name"] for s in listed] == ["general", "walk-prop3"]
        assert all("two-class-partition" in s["claims"] for s in listed)

    def test_list_unknown_claim(self):
        assert cli_main(["verify", "--list", "--claim", "no-such-claim"]) == 2

    def test_walk_suite_to_file(self, tmp_path):
        out = tmp_path / "report.json"
        code = cli_main([
            "verify", "--suite", "walk-prop3", "--steps", "skip2", "--n", "5", "--out", str(out),
        ])

        assert code == 0
        assert json.loads(out.read_text())["suite"] == "walk-prop3"

    def test_walk_suite_needs_length(self):
        assert cli_main(["verify", "--suite", "walk-corollary", "--steps", "fair"]) == 2

    def test_suite_required(self):
        assert cli_main(["verify"]) == 2

    def test_model_suite_mismatch(self, capsys):
        assert cli_main(["verify", "--suite", "prop2", "--preset", "M1", "--paths", "10"]) == 2

    def test_model_file(self, m1_file, tmp_path):
        out = tmp_path / "prop1.json"
        code = cli_main([
            "verify", "--suite", "uniform", "--model", str(m1_file),
            "--paths", "200", "--seed", "42", "--out", str(out),
        ])
        report = json.loads(out.read_text())

        assert code in (0, 1)
        assert code == (0 if report["pass"] else 1)
        assert report["seed"] == 42
        assert report["config"]["model"]["drift"] == 2.0

    @pytest.mark.slow
    def test_acceptance_run(self, m1_file, tmp_path):
        out = tmp_path / "prop1.json"
        code = cli_main([
            "verify", "--suite", "prop1", "--model", str(m1_file),
            "--paths", "100000", "--seed", "42", "--out", str(out),
        ])

        assert code == 0


class TestTransformCommand:
    def test_table(self, tmp_path):
        out = tmp_path / "table.csv"
        code = cli_main([
            "transform", "--preset", "M1", "--s-grid", "1", "--joint", "1:0.5", "--out", str(out),
        ])
        lines = out.read_text().splitlines()

        assert code == 0
        assert lines[0] == "kind,s,t,value"
        rows = {line.split(",")[0]: line.split(",") for line in lines[1:]}
        assert float(rows["F"][3]) == pytest.approx(0.7071068, abs=1e-7)
        assert float(rows["PK"][3]) == pytest.approx(2 / 3)
        assert float(rows["SIGMA"][3]) == pytest.approx(0.6035534, abs=1e-7)
        assert float(rows["JOINT"][3]) == pytest.approx(0.6334372, abs=1e-7)

    def test_two_sided_model_rejected(self, capsys):
        assert cli_main(["transform", "--preset", "M2"]) == 2


class TestSimulateAndEcdf:
    def test_dump_and_ecdf_agree(self, tmp_path):
        samples = tmp_path / "samples.csv"
        curve = tmp_path / "ecdf.csv"

        assert cli_main([
            "simulate", "--preset", "M1", "--paths", "150", "--seed", "3", "--out", str(samples),
        ]) == 0
        assert cli_main([
            "ecdf", "--input", str(samples), "--column", "f_fwd", "--positive", "--out", str(curve),
        ]) == 0

        table = SampleTable.from_csv(samples)
        values, probs = ecdf(table.positive_sigma()["f_fwd"])
        lines = curve.read_text().splitlines()
        assert lines[0] == "value,ecdf"
        loaded = np.array([[float(x) for x in line.split(",")] for line in lines[1:]])
        np.testing.assert_array_equal(loaded[:, 0], values)
        np.testing.assert_array_equal(loaded[:, 1], probs)

    def test_simulate_finite_horizon_default_kind(self, tmp_path):
        samples = tmp_path / "m2.csv"

        assert cli_main(["simulate", "--preset", "M2", "--paths", "50", "--out", str(samples)]) == 0
        assert len(SampleTable.from_csv(samples)) == 50

    def test_ecdf_missing_input(self, tmp_path):
        assert cli_main(["ecdf", "--input", str(tmp_path / "none.csv"), "--column", "sigma"]) == 2
