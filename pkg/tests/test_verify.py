"""Tests for run_suite orchestration."""

from itertools import combinations

import pytest

from presets import MODEL_PRESETS, STEP_LAW_PRESETS
from src.errors import ConfigError
from src.stats_mc import SIX_TIMES
from src.verify import run_suite

M1_CONFIG = {"model": MODEL_PRESETS["M1"]}


@pytest.fixture(scope="module")
def prop1_report():
    return run_suite("prop1", M1_CONFIG, N=2000, seed=42)


@pytest.fixture(scope="module")
def transforms_report():
    return run_suite("transforms", M1_CONFIG, N=600, seed=7)


class TestWalkSuites:
    """Exact suites pass deterministically."""

    def test_walk_prop3_fair(self):
        config = {"steps": STEP_LAW_PRESETS["fair"], "n": 2, "event": "all"}
        report = run_suite("walk-prop3", config)

        assert report.passed
        assert {c.name for c in report.checks} == {
            "class1_laws_equal",
            "class2_laws_equal",
            "reversed_path_law",
        }
        assert len(report.checks) == 3
        laws = report.get("class2_laws_equal").details["laws"]
        assert laws["n_plus"] == {"0": "1/2", "1": "1/4", "2": "1/4"}

    def test_walk_prop3_default_event(self):
        report = run_suite("walk-prop3", {"steps": STEP_LAW_PRESETS["skip2"], "n": 7})

        assert report.passed

    def test_walk_corollary(self):
        report = run_suite("walk-corollary", {"steps": STEP_LAW_PRESETS["fair"], "n": 6})

        assert report.passed
        assert all(c.claim == "last-visit-zero" for c in report.checks)

    def test_walk_config_validated(self):
        with pytest.raises(ConfigError, match="Invalid config"):
            run_suite("walk-corollary", {"steps": STEP_LAW_PRESETS["fair"]})

    def test_walk_config_rejects_unknown_keys(self):
        with pytest.raises(ConfigError, match="Invalid config"):
            run_suite("walk-corollary", {"steps": STEP_LAW_PRESETS["fair"], "n": 2, "event": "all"})

    @pytest.mark.parametrize("kind", ["walk-prop3", "walk-corollary"])
    def test_empty_walk(self, kind):
        report = run_suite(kind, {"steps": STEP_LAW_PRESETS["fair"], "n": 0})

        assert report.passed
        assert all(c.statistic == 0.0 for c in report.checks)

    def test_empty_walk_laws_are_point_mass(self):
        report = run_suite("walk-prop3", {"steps": STEP_LAW_PRESETS["skip2"], "n": 0})

        laws = report.get("class1_laws_equal").details["laws"]
        assert all(law == {"0": "1"} for law in laws.values())
        assert report.get("reversed_path_law").details["distinct_paths"] == 1

    def test_negative_length_rejected(self):
        with pytest.raises(ConfigError, match="Invalid config"):
            run_suite("walk-prop3", {"steps": STEP_LAW_PRESETS["fair"], "n": -1})


class TestMonteCarloSuites:
    """Suite structure on small samples; full-size acceptance runs are marked slow."""

    def test_prop1_check_names(self, prop1_report):
        names = {c.name for c in prop1_report.checks}

        for a, b in combinations(SIX_TIMES, 2):
            assert f"ks_{a}_vs_{b}" in names
        assert "sigma_atom" in names
        assert "pair_sum_f_fwd_f_bwd" in names
        assert "pair_symmetry_g_fwd_g_bwd" in names
        assert "min_ks_n_minus_n_plus_vs_f_fwd_f_bwd" in names
        assert len(prop1_report.checks) == 15 + 5 + 1 + 3 + 3 + 3

    def test_prop1_exact_checks_pass(self, prop1_report):
        for name in ("pair_sum_n_minus_n_plus", "pair_sum_f_fwd_f_bwd", "pair_sum_g_fwd_g_bwd"):
            assert prop1_report.get(name).passed

    def test_prop1_sigma_atom(self, prop1_report):
        check = prop1_report.get("sigma_atom")

        assert check.details["predicted"] == pytest.approx(0.5)
        assert check.details["observed"] == pytest.approx(0.5, abs=0.06)

    def test_prop1_claims(self, prop1_report):
        claims = {c.claim for c in prop1_report.checks}

        assert claims == {"six-way-law", "atom-at-zero", "pair-exchangeability"}

    def test_reports_are_deterministic(self):
        a = run_suite("prop1", M1_CONFIG, N=300, seed=11)
        b = run_suite("prop1", M1_CONFIG, N=300, seed=11)

        assert a.outcome() == b.outcome()

    def test_transforms_predictions(self, transforms_report):
        details = {c.name: c.details for c in transforms_report.checks}

        assert details["transform_F_fwd_s1"]["predicted"] == pytest.approx(0.7071, abs=1e-4)
        assert details["transform_PK_s1"]["predicted"] == pytest.approx(2 / 3)
        assert details["transform_SIGMA_s1"]["predicted"] == pytest.approx(0.6036, abs=1e-4)
        assert details["transform_JOINT_s1_t0.5"]["predicted"] == pytest.approx(0.6334, abs=1e-4)

    def test_transforms_check_set(self, transforms_report):
        names = {c.name for c in transforms_report.checks}

        for s in ("0.25", "0.5", "1", "2"):
            assert f"transform_F_bwd_s{s}" in names
        assert {"infimum_passage_ks", "infimum_passage_atom"} <= names
        assert {"passage_at_depth_ks", "passage_at_depth_atom"} <= names

    def test_transforms_tolerance_floor(self, transforms_report):
        for check in transforms_report.checks:
            if check.name.startswith("transform_"):
                assert check.threshold >= 0.01

    def test_custom_s_grid(self):
        report = run_suite("transforms", {**M1_CONFIG, "s_grid": [3.0]}, N=200, seed=1)
        names = {c.name for c in report.checks}

        assert "transform_F_fwd_s3" in names
        assert "transform_JOINT_s3_t1.5" in names
        assert "transform_JOINT_s1_t0.5" in names

    def test_uniform_checks(self):
        report = run_suite("uniform", M1_CONFIG, N=500, seed=3)

        assert {c.name for c in report.checks} == {f"uniform_{n}" for n in SIX_TIMES}

    def test_general_cross_class_informational(self):
        report = run_suite("general", {"model": MODEL_PRESETS["M2"]}, N=800, seed=5)
        cross = [c for c in report.checks if c.claim == "cross-class-gap"]

        assert len(cross) == 2
        assert all(c.informational and c.passed for c in cross)
        assert len([c for c in report.checks if c.claim == "two-class-partition"]) == 12

    def test_prop2_tilde_match(self):
        report = run_suite("prop2", {"model": MODEL_PRESETS["M1-finite"]}, N=800, seed=5)

        assert report.get("tilde_occupation_match").passed

    def test_model_suite_mismatch(self):
        with pytest.raises(ConfigError):
            run_suite("prop1", {"model": MODEL_PRESETS["M2"]}, N=10)
        with pytest.raises(ConfigError):
            run_suite("prop2", M1_CONFIG, N=10)

    def test_unknown_suite(self):
        with pytest.raises(ConfigError, match="Unknown suite"):
            run_suite("prop9", M1_CONFIG)


@pytest.mark.slow
class TestAcceptanceRuns:
    """Full-size runs at N = 10^5."""

    def test_prop1(self):
        report = run_suite("prop1", M1_CONFIG, N=100_000, seed=42)

        assert report.passed, [c.to_dict() for c in report.failed_checks]
        assert abs(report.get("sigma_atom").details["observed"] - 0.5) <= 0.006

    def test_transforms(self):
        report = run_suite("transforms", M1_CONFIG, N=100_000, seed=42)

        assert report.passed, [c.to_dict() for c in report.failed_checks]

    def test_uniform(self):
        report = run_suite("uniform", M1_CONFIG, N=100_000, seed=42)

        assert report.passed, [c.to_dict() for c in report.failed_checks]

    def test_general_within_class(self):
        report = run_suite("general", {"model": MODEL_PRESETS["M2"]}, N=100_000, seed=42)

        assert report.passed, [c.to_dict() for c in report.failed_checks]

    def test_worker_count_invariance(self):
        single = run_suite("prop1", M1_CONFIG, N=5000, seed=8, workers=1)
        pooled = run_suite("prop1", M1_CONFIG, N=5000, seed=8, workers=3)

        assert single.outcome() == pooled.outcome()

    def test_general_cross_class_rejects(self):
        """Up jumps separate the two classes, so the cross-class KS must reject."""
        report = run_suite(
            "general",
            {"model": MODEL_PRESETS["M2"]},
            N=100_000,
            seed=42,
            expect_cross_class_reject=True,
        )
        cross = report.get("cross_f_fwd_vs_f_bwd")

        assert report.passed, [c.to_dict() for c in report.failed_checks]
        assert not cross.informational
        assert cross.threshold is not None
        assert cross.statistic < 0.01

    def test_prop2(self):
        report = run_suite("prop2", {"model": MODEL_PRESETS["M1-finite"]}, N=100_000, seed=42)

        assert report.passed, [c.to_dict() for c in report.failed_checks]
        assert report.get("tilde_occupation_match").passed
