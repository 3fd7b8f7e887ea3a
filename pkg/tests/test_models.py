"""Tests for model configs and jump laws."""

import json
import math

import numpy as np
import pytest

from presets import MODEL_PRESETS
from src.errors import ConfigError, DomainError
from src.models import (
    CpModel,
    Deterministic,
    Exponential,
    FiniteHorizon,
    TruncatedHorizon,
    TwoSidedExpMixture,
    Uniform,
    load_model,
    model_from_dict,
)


class TestModelConfig:
    """Loading and validating model documents."""

    @pytest.mark.parametrize("name", sorted(MODEL_PRESETS))
    def test_presets_load(self, name):
        model = model_from_dict(MODEL_PRESETS[name])

        assert model.mean_drift > 0
        assert model_from_dict(model.to_dict()).to_dict() == model.to_dict()

    def test_m1(self):
        model = model_from_dict(MODEL_PRESETS["M1"])

        assert model.jump_law == Exponential(1.0, "down")
        assert model.horizon == TruncatedHorizon(30.0)
        assert model.mean_drift == pytest.approx(1.0)
        assert model.spectrally_negative

    def test_m2_is_two_sided(self):
        model = model_from_dict(MODEL_PRESETS["M2"])

        assert isinstance(model.jump_law, TwoSidedExpMixture)
        assert not model.spectrally_negative
        assert model.mean_drift == pytest.approx(2.5)
        with pytest.raises(ConfigError, match="without up jumps"):
            model.require_spectrally_negative("test")

    def test_missing_field(self):
        with pytest.raises(ConfigError, match="Model config invalid"):
            model_from_dict({"drift": 1.0, "rate": 1.0})

    def test_bad_family_params(self):
        jump = {"family": "exponential", "params": {}, "sign": "down"}
        config = {**MODEL_PRESETS["M1"], "jump": jump}

        with pytest.raises(ConfigError, match="params invalid"):
            model_from_dict(config)

    def test_two_sided_sign_mismatch(self):
        jump = {"family": "exponential", "params": {"rate": 1}, "sign": "two-sided"}
        config = {**MODEL_PRESETS["M1"], "jump": jump}

        with pytest.raises(ConfigError, match="'up' or 'down'"):
            model_from_dict(config)

    def test_horizon_needs_parameter(self):
        with pytest.raises(ConfigError, match="needs 'T'"):
            model_from_dict({**MODEL_PRESETS["M1"], "horizon": {"type": "finite"}})

    def test_zero_drift(self):
        with pytest.raises(ConfigError, match="Zero drift"):
            CpModel(0.0, 1.0, Exponential(1.0), FiniteHorizon(1.0))

    def test_negative_mean_drift_rejected(self):
        model = CpModel(1.0, 2.0, Exponential(1.0), TruncatedHorizon(10.0))

        with pytest.raises(ConfigError, match="psi'\\(0\\) > 0"):
            model.require_spectrally_negative("test")

    def test_load_model(self, tmp_path):
        path = tmp_path / "m1.json"
        path.write_text(json.dumps(MODEL_PRESETS["M1"]))

        assert load_model(path).to_dict() == model_from_dict(MODEL_PRESETS["M1"]).to_dict()

    def test_load_model_bad_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")

        with pytest.raises(ConfigError, match="not valid JSON"):
            load_model(path)

    def test_load_model_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="Cannot read"):
            load_model(tmp_path / "absent.json")


class TestJumpLaws:
    """Closed-form moments against sampled moments."""

    def test_exponential_mgf(self):
        law = Exponential(2.0, "down")

        assert law.mgf(1.0) == pytest.approx(2.0 / 3.0)
        assert law.mean() == pytest.approx(-0.5)

    def test_up_exponential_diverges(self):
        with pytest.raises(DomainError):
            Exponential(1.0, "up").mgf(1.5)

    def test_deterministic(self):
        law = Deterministic(1.0, "down")

        assert not law.continuous
        assert law.mgf(1.0) == pytest.approx(math.exp(-1.0))

    def test_uniform_small_s_matches_series(self):
        law = Uniform(0.5, 1.5, "down")

        assert law.mgf(1e-9) == pytest.approx(1.0, abs=1e-8)
        assert law.mgf_prime(0.0) == pytest.approx(-1.0)
        assert law.mgf_prime(1e-3) == pytest.approx(law.mgf_prime(2e-6), abs=2e-3)

    def test_uniform_bounds(self):
        with pytest.raises(ConfigError):
            Uniform(1.5, 0.5)

    def test_two_sided_strip(self):
        law = TwoSidedExpMixture(0.5, 0.5, 2.0)

        assert law.mgf(0.0) == pytest.approx(1.0)
        with pytest.raises(DomainError, match="diverges"):
            law.mgf(0.5)

    @pytest.mark.parametrize(
        "law",
        [Exponential(1.0), Uniform(0.5, 1.5), TwoSidedExpMixture(0.5, 0.5, 2.0)],
        ids=["exponential", "uniform", "two-sided"],
    )
    def test_sample_mean(self, law):
        rng = np.random.default_rng(7)
        draws = law.sample(rng, 200_000)

        assert draws.mean() == pytest.approx(law.mean(), abs=0.02)
