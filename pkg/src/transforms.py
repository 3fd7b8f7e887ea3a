"""
Transforms - Laplace exponent, its right inverse, and predicted transforms.

For a model without up jumps and with ψ'(0) > 0:

    ψ(s)  = c*s + λ*(E e^{sY} - 1)          Y a (signed) jump
    Φ(s)  = the root x >= 0 of ψ(x) = s
    Φ'(s) = 1 / ψ'(Φ(s))

Predicted transforms of the last-passage functionals:

    F      E e^{-s F}        = ψ'(0) Φ(s) / s
    PK     E e^{-s I}        = ψ'(0) s / ψ(s)        (Pollaczek-Khinchine)
    SIGMA  E e^{-s σ}        = ψ'(0) Φ'(s)
    JOINT  E e^{-sF→ - tF←}  = ψ'(0) (Φ(s) - Φ(t)) / (s - t)
"""

import logging
import math
from dataclasses import dataclass
from typing import Literal

from scipy.optimize import brentq

from .errors import ConfigError, DomainError, NoConvergence, UnsupportedFamily
from .models import CpModel, Exponential

logger = logging.getLogger(__name__)

TransformKind = Literal["F", "PK", "SIGMA", "JOINT"]
TRANSFORM_KINDS = ("F", "PK", "SIGMA", "JOINT")

_NEWTON_STEPS = 3
_JOINT_DIAGONAL = 1e-8


@dataclass(frozen=True)
class TransformContext:
    """A model plus the root-finding tolerance; read-only and shareable."""

    model: CpModel
    root_tolerance: float = 1e-12

    @property
    def spectrally_negative(self) -> bool:
        return self.model.spectrally_negative

    def require_inverse(self, purpose: str):
        """
        Raises:
            UnsupportedFamily: For models with up jumps
            ConfigError: If c <= 0 or ψ'(0) <= 0
        """
        if not self.spectrally_negative:
            raise UnsupportedFamily(f"{purpose} requires a model without up jumps")
        self.model.require_spectrally_negative(purpose)


def psi(ctx: TransformContext, s: float) -> float:
    """
    Laplace exponent ψ(s) = log E e^{sX_1}.

    Raises:
        DomainError: If s < 0, or s lies outside the strip where an up-jump
            transform converges
    """
    if s < 0:
        raise DomainError(f"psi is evaluated on s >= 0, got {s}")
    model = ctx.model
    if model.rate == 0:
        return model.drift * s
    return model.drift * s + model.rate * (model.jump_law.mgf(s) - 1.0)


def psi_prime(ctx: TransformContext, s: float) -> float:
    """ψ'(s); increasing on [0, inf) for models without up jumps."""
    if s < 0:
        raise DomainError(f"psi' is evaluated on s >= 0, got {s}")
    model = ctx.model
    if model.rate == 0:
        return model.drift
    return model.drift + model.rate * model.jump_law.mgf_prime(s)


def phi(ctx: TransformContext, s: float) -> float:
    """
    Right inverse Φ(s): the unique x >= 0 with ψ(x) = s.

    The root is bracketed by [0, (s+λ)/c] (since ψ(x) >= cx - λ), located with
    Brent's method and polished with Newton steps.

    Raises:
        UnsupportedFamily, ConfigError: If the model does not admit Φ
        NoConvergence: If the residual stays above root_tolerance
    """
    ctx.require_inverse("phi")
    if s < 0:
        raise DomainError(f"phi is evaluated on s >= 0, got {s}")
    if s == 0:
        return 0.0

    model = ctx.model
    upper = (s + model.rate) / model.drift
    try:
        root = brentq(lambda x: psi(ctx, x) - s, 0.0, upper, xtol=1e-15, rtol=1e-15, maxiter=500)
    except (RuntimeError, ValueError) as e:
        raise NoConvergence(f"Root search for phi({s}) failed on [0, {upper}]: {e}") from e

    # Residuals are measured relative to s once s exceeds 1
    limit = ctx.root_tolerance * max(1.0, s)
    for _ in range(_NEWTON_STEPS):
        residual = psi(ctx, root) - s
        if abs(residual) <= limit:
            break
        root -= residual / psi_prime(ctx, root)

    residual = abs(psi(ctx, root) - s)
    if residual > limit:
        raise NoConvergence(f"phi({s}) residual {residual:.3e} above {limit:.3e}")
    return root


def phi_prime(ctx: TransformContext, s: float) -> float:
    """Φ'(s) = 1 / ψ'(Φ(s))."""
    return 1.0 / psi_prime(ctx, phi(ctx, s))


def predicted_transform(
    ctx: TransformContext,
    kind: TransformKind,
    s: float,
    t: float | None = None,
) -> float:
    """
    Closed-form transform predicted for a last-passage functional.

    Args:
        ctx: Transform context (model without up jumps, ψ'(0) > 0)
        kind: "F", "PK", "SIGMA" or "JOINT"
        s: Transform argument, s > 0
        t: Second argument for JOINT, t > 0

    Raises:
        DomainError: If s <= 0, or t is missing/nonpositive for JOINT
        ValueError: If the kind is unknown
    """
    if s <= 0:
        raise DomainError(f"Transforms are evaluated at s > 0, got {s}")
    ctx.require_inverse(f"predicted_transform({kind})")
    slope = ctx.model.mean_drift

    if kind == "F":
        return slope * phi(ctx, s) / s
    if kind == "PK":
        return slope * s / psi(ctx, s)
    if kind == "SIGMA":
        return slope * phi_prime(ctx, s)
    if kind == "JOINT":
        if t is None or t <= 0:
            raise DomainError(f"JOINT needs t > 0, got {t}")
        if abs(s - t) < _JOINT_DIAGONAL:
            return slope * phi_prime(ctx, s)
        return slope * (phi(ctx, s) - phi(ctx, t)) / (s - t)
    raise ValueError(f"Unknown transform kind: {kind}")


def passage_transform(ctx: TransformContext, s: float, x: float) -> float:
    """E e^{-s tau_x} = e^{-Φ(s) x}."""
    if x < 0:
        raise DomainError(f"Passage level must be nonnegative, got {x}")
    return math.exp(-phi(ctx, s) * x)


def atom_at_zero(ctx: TransformContext) -> float:
    """P(sigma = 0) = P(I = 0) = ψ'(0)/c, the s -> inf limit of the PK transform."""
    ctx.require_inverse("atom_at_zero")
    return ctx.model.mean_drift / ctx.model.drift


def ruin_probability(ctx: TransformContext, u: float) -> float:
    """
    P(inf_t X_t < -u) for exponential down jumps: (λ/(cμ)) e^{-(μ - λ/c) u}.

    Raises:
        UnsupportedFamily: For other jump laws
    """
    ctx.require_inverse("ruin_probability")
    model = ctx.model
    if model.rate == 0:
        return 0.0
    if not isinstance(model.jump_law, Exponential):
        raise UnsupportedFamily("Closed-form ruin probability needs exponential down jumps")
    mu, lam, c = model.jump_law.rate, model.rate, model.drift
    return lam / (c * mu) * math.exp(-(mu - lam / c) * u)


def transform_table(
    ctx: TransformContext,
    s_grid: list[float],
    joint_pairs: list[tuple[float, float]] | None = None,
) -> list[tuple[str, float, float | None, float]]:
    """Rows (kind, s, t, value) for every single-argument kind on the grid plus JOINT pairs."""
    rows = []
    for kind in ("F", "PK", "SIGMA"):
        for s in s_grid:
            rows.append((kind, s, None, predicted_transform(ctx, kind, s)))
    for s, t in joint_pairs or []:
        rows.append(("JOINT", s, t, predicted_transform(ctx, "JOINT", s, t)))
    return rows


def validate_context(model: CpModel, root_tolerance: float = 1e-12) -> TransformContext:
    """Build a context, failing early if the model does not admit Φ."""
    ctx = TransformContext(model, root_tolerance)
    try:
        ctx.require_inverse("transforms")
    except ConfigError:
        logger.warning(f"Model without a right inverse: {model.digest()}")
        raise
    return ctx
