"""
Models - Compound-Poisson-with-drift model definitions.

A model is X_t = c*t + (sum of jumps up to t), jumps arriving at rate λ with
sizes from one of a few families that have closed-form transforms.

Model configurations travel as JSON documents validated against MODEL_SCHEMA:

    {"drift": 2.0, "rate": 1.0,
     "jump": {"family": "exponential", "params": {"rate": 1.0}, "sign": "down"},
     "horizon": {"type": "truncated", "b": 30.0}}
"""

import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Literal

import numpy as np
from jsonschema import ValidationError, validate

from .errors import ConfigError, DomainError

logger = logging.getLogger(__name__)

Sign = Literal["down", "up"]

_POSITIVE = {"type": "number", "exclusiveMinimum": 0}

MODEL_SCHEMA = {
    "type": "object",
    "properties": {
        "drift": {"type": "number", "description": "Linear drift c per unit time"},
        "rate": {"type": "number", "minimum": 0, "description": "Jump rate λ"},
        "jump": {
            "type": "object",
            "properties": {
                "family": {
                    "type": "string",
                    "enum": ["exponential", "deterministic", "uniform", "two_sided_exponential"],
                },
                "params": {"type": "object"},
                "sign": {"type": "string", "enum": ["up", "down", "two-sided"]},
            },
            "required": ["family", "params", "sign"],
        },
        "horizon": {
            "type": "object",
            "properties": {
                "type": {"type": "string", "enum": ["finite", "truncated"]},
                "T": _POSITIVE,
                "b": _POSITIVE,
            },
            "required": ["type"],
        },
    },
    "required": ["drift", "rate", "jump", "horizon"],
}

# Per-family parameter schemas
JUMP_PARAM_SCHEMAS = {
    "exponential": {
        "type": "object",
        "properties": {"rate": _POSITIVE},
        "required": ["rate"],
    },
    "deterministic": {
        "type": "object",
        "properties": {"size": _POSITIVE},
        "required": ["size"],
    },
    "uniform": {
        "type": "object",
        "properties": {"low": {"type": "number", "minimum": 0}, "high": _POSITIVE},
        "required": ["low", "high"],
    },
    "two_sided_exponential": {
        "type": "object",
        "properties": {
            "p_up": {"type": "number", "minimum": 0, "maximum": 1},
            "rate_up": _POSITIVE,
            "rate_down": _POSITIVE,
        },
        "required": ["p_up", "rate_up", "rate_down"],
    },
}


class JumpLaw:
    """
    Base class for jump-size laws.

    Subclasses describe the jump magnitude J >= 0 through its Laplace transform
    L(s) = E e^{-sJ}; the sign decides whether jumps are -J (down) or +J (up).
    """

    family: str = ""
    sign: Sign = "down"
    continuous: bool = True

    @property
    def has_up_jumps(self) -> bool:
        return self.sign == "up"

    @property
    def has_down_jumps(self) -> bool:
        return self.sign == "down"

    def magnitude_mean(self) -> float:
        raise NotImplementedError

    def magnitude_laplace(self, s: float) -> float:
        raise NotImplementedError

    def magnitude_laplace_prime(self, s: float) -> float:
        raise NotImplementedError

    def sample_magnitudes(self, rng: np.random.Generator, size: int) -> np.ndarray:
        raise NotImplementedError

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Signed jump sizes."""
        magnitudes = self.sample_magnitudes(rng, size)
        return -magnitudes if self.sign == "down" else magnitudes

    def mean(self) -> float:
        m = self.magnitude_mean()
        return -m if self.sign == "down" else m

    def mgf(self, s: float) -> float:
        """E e^{sY} for the signed jump Y."""
        return self.magnitude_laplace(s) if self.sign == "down" else self.magnitude_laplace(-s)

    def mgf_prime(self, s: float) -> float:
        if self.sign == "down":
            return self.magnitude_laplace_prime(s)
        return -self.magnitude_laplace_prime(-s)

    def params(self) -> dict:
        raise NotImplementedError

    def to_dict(self) -> dict:
        return {"family": self.family, "params": self.params(), "sign": self.sign}


@dataclass(frozen=True)
class Exponential(JumpLaw):
    rate: float
    sign: Sign = "down"
    family = "exponential"

    def magnitude_mean(self) -> float:
        return 1.0 / self.rate

    def magnitude_laplace(self, s: float) -> float:
        if s <= -self.rate:
            raise DomainError(f"E e^(-sJ) diverges for s={s} <= -{self.rate}")
        return self.rate / (self.rate + s)

    def magnitude_laplace_prime(self, s: float) -> float:
        if s <= -self.rate:
            raise DomainError(f"E e^(-sJ) diverges for s={s} <= -{self.rate}")
        return -self.rate / (self.rate + s) ** 2

    def sample_magnitudes(self, rng, size):
        return rng.exponential(1.0 / self.rate, size)

    def params(self) -> dict:
        return {"rate": self.rate}


@dataclass(frozen=True)
class Deterministic(JumpLaw):
    size: float
    sign: Sign = "down"
    family = "deterministic"
    continuous = False

    def magnitude_mean(self) -> float:
        return self.size

    def magnitude_laplace(self, s: float) -> float:
        return math.exp(-s * self.size)

    def magnitude_laplace_prime(self, s: float) -> float:
        return -self.size * math.exp(-s * self.size)

    def sample_magnitudes(self, rng, size):
        return np.full(size, float(self.size))

    def params(self) -> dict:
        return {"size": self.size}


@dataclass(frozen=True)
class Uniform(JumpLaw):
    low: float
    high: float
    sign: Sign = "down"
    family = "uniform"

    def __post_init__(self):
        if not 0 <= self.low < self.high:
            raise ConfigError(f"Uniform jumps need 0 <= low < high, got [{self.low}, {self.high}]")

    def magnitude_mean(self) -> float:
        return 0.5 * (self.low + self.high)

    def magnitude_laplace(self, s: float) -> float:
        a, b = self.low, self.high
        if abs(s) < 1e-8:
            return 1.0 - s * (a + b) / 2
        return (math.exp(-s * a) - math.exp(-s * b)) / (s * (b - a))

    def magnitude_laplace_prime(self, s: float) -> float:
        a, b = self.low, self.high
        if abs(s) < 1e-6:
            return -(a + b) / 2 + s * (a * a + a * b + b * b) / 3
        ea, eb = math.exp(-s * a), math.exp(-s * b)
        return ((-a * ea + b * eb) * s - (ea - eb)) / (s * s * (b - a))

    def sample_magnitudes(self, rng, size):
        return rng.uniform(self.low, self.high, size)

    def params(self) -> dict:
        return {"low": self.low, "high": self.high}


@dataclass(frozen=True)
class TwoSidedExpMixture(JumpLaw):
    """Up jump Exp(rate_up) with probability p_up, else down jump Exp(rate_down)."""

    p_up: float
    rate_up: float
    rate_down: float
    family = "two_sided_exponential"
    sign = "two-sided"

    @property
    def has_up_jumps(self) -> bool:
        return self.p_up > 0

    @property
    def has_down_jumps(self) -> bool:
        return self.p_up < 1

    def mean(self) -> float:
        return self.p_up / self.rate_up - (1 - self.p_up) / self.rate_down

    def mgf(self, s: float) -> float:
        if s >= self.rate_up and self.p_up > 0:
            raise DomainError(f"Up-jump transform diverges for s={s} >= {self.rate_up}")
        if s <= -self.rate_down and self.p_up < 1:
            raise DomainError(f"Down-jump transform diverges for s={s} <= -{self.rate_down}")
        up = self.rate_up / (self.rate_up - s) if self.p_up > 0 else 0.0
        down = self.rate_down / (self.rate_down + s) if self.p_up < 1 else 0.0
        return self.p_up * up + (1 - self.p_up) * down

    def mgf_prime(self, s: float) -> float:
        self.mgf(s)
        up = self.rate_up / (self.rate_up - s) ** 2 if self.p_up > 0 else 0.0
        down = -self.rate_down / (self.rate_down + s) ** 2 if self.p_up < 1 else 0.0
        return self.p_up * up + (1 - self.p_up) * down

    def sample(self, rng, size):
        up = rng.random(size) < self.p_up
        up_sizes = rng.exponential(1.0 / self.rate_up, size)
        down_sizes = rng.exponential(1.0 / self.rate_down, size)
        return np.where(up, up_sizes, -down_sizes)

    def params(self) -> dict:
        return {"p_up": self.p_up, "rate_up": self.rate_up, "rate_down": self.rate_down}


@dataclass(frozen=True)
class FiniteHorizon:
    T: float

    def to_dict(self) -> dict:
        return {"type": "finite", "T": self.T}


@dataclass(frozen=True)
class TruncatedHorizon:
    """Infinite horizon realized up to the first passage above level b."""

    b: float

    def to_dict(self) -> dict:
        return {"type": "truncated", "b": self.b}


Horizon = FiniteHorizon | TruncatedHorizon


@dataclass(frozen=True)
class CpModel:
    """
    Compound Poisson process with linear drift.

    Zero drift is rejected: the segment analytics and the extremum conventions
    assume strictly monotone pieces between jumps.
    """

    drift: float
    rate: float
    jump_law: JumpLaw
    horizon: Horizon

    def __post_init__(self):
        if self.drift == 0:
            raise ConfigError("Zero drift is not supported")
        if self.rate < 0:
            raise ConfigError(f"Jump rate must be nonnegative, got {self.rate}")

    @property
    def spectrally_negative(self) -> bool:
        return self.rate == 0 or not self.jump_law.has_up_jumps

    @property
    def mean_drift(self) -> float:
        """ψ'(0) = E X_1 = c + λ E[jump]."""
        return self.drift + self.rate * self.jump_law.mean()

    @property
    def continuous_jumps(self) -> bool:
        return self.jump_law.continuous

    def require_spectrally_negative(self, purpose: str = "this computation"):
        """
        Raises:
            ConfigError: If the model has up jumps, or ψ'(0) <= 0, or c <= 0
        """
        if not self.spectrally_negative:
            raise ConfigError(f"{purpose} requires a model without up jumps")
        if self.drift <= 0:
            raise ConfigError(f"{purpose} requires positive drift, got {self.drift}")
        if self.mean_drift <= 0:
            raise ConfigError(
                f"{purpose} requires psi'(0) > 0, got {self.mean_drift:.6g}"
            )

    def with_horizon(self, horizon: Horizon) -> "CpModel":
        return CpModel(self.drift, self.rate, self.jump_law, horizon)

    def to_dict(self) -> dict:
        return {
            "drift": self.drift,
            "rate": self.rate,
            "jump": self.jump_law.to_dict(),
            "horizon": self.horizon.to_dict(),
        }

    def digest(self) -> str:
        """Stable text identity used in sample-table metadata."""
        return json.dumps(self.to_dict(), sort_keys=True)


def jump_law_from_dict(data: dict) -> JumpLaw:
    family = data["family"]
    params = data["params"]
    sign = data["sign"]
    try:
        validate(instance=params, schema=JUMP_PARAM_SCHEMAS[family])
    except ValidationError as e:
        raise ConfigError(f"Jump family '{family}' params invalid: {e.message}") from e

    if family == "two_sided_exponential":
        if sign != "two-sided":
            raise ConfigError("two_sided_exponential jumps need sign 'two-sided'")
        return TwoSidedExpMixture(
            float(params["p_up"]), float(params["rate_up"]), float(params["rate_down"])
        )
    if sign == "two-sided":
        raise ConfigError(f"Family '{family}' takes sign 'up' or 'down'")
    if family == "exponential":
        return Exponential(float(params["rate"]), sign)
    if family == "deterministic":
        return Deterministic(float(params["size"]), sign)
    return Uniform(float(params["low"]), float(params["high"]), sign)


def horizon_from_dict(data: dict) -> Horizon:
    if data["type"] == "finite":
        if "T" not in data:
            raise ConfigError("Finite horizon needs 'T'")
        return FiniteHorizon(float(data["T"]))
    if "b" not in data:
        raise ConfigError("Truncated horizon needs 'b'")
    return TruncatedHorizon(float(data["b"]))


def model_from_dict(data: dict) -> CpModel:
    """
    Validate a model configuration and build the model.

    Raises:
        ConfigError: If the document violates MODEL_SCHEMA or the model invariants
    """
    try:
        validate(instance=data, schema=MODEL_SCHEMA)
    except ValidationError as e:
        raise ConfigError(f"Model config invalid: {e.message}") from e

    model = CpModel(
        drift=float(data["drift"]),
        rate=float(data["rate"]),
        jump_law=jump_law_from_dict(data["jump"]),
        horizon=horizon_from_dict(data["horizon"]),
    )
    logger.debug(f"Loaded model: {model.digest()}")
    return model


def load_model(path: str | Path) -> CpModel:
    """Read and validate a model JSON file."""
    try:
        data = json.loads(Path(path).read_text())
    except OSError as e:
        raise ConfigError(f"Cannot read model file {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"Model file {path} is not valid JSON: {e}") from e
    return model_from_dict(data)
