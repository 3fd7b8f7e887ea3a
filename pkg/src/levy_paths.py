"""
Levy Paths - Exact per-path functionals of compound Poisson paths with drift.

A realized path is piecewise linear between jumps, so every functional is
computed segment by segment in closed form: level crossings are solved from
the segment's start value and slope, occupation times are sums of clipped
segment lengths, and extrema sit at segment ends. Nothing is gridded.

Conventions:
- X is càdlàg: X_t includes a jump at t, X_{t-} does not.
- sigma = sup of the closure of {t <= t_end : X_t <= 0}. If the path leaves
  (-inf, 0] by an up jump, sigma is the jump time and X_{sigma-} <= 0.
- When sigma = 0 every time functional is 0.
"""

import enum
import logging
import math
from dataclasses import dataclass, fields

import numpy as np

from . import settings
from .errors import ConfigError, InvalidSigma, NoConvergence
from .models import CpModel, Exponential
from .transforms import TransformContext, ruin_probability

logger = logging.getLogger(__name__)

# Draws are taken from the stream in fixed-size batches so a path depends only
# on its stream, never on how many draws a caller consumed elsewhere.
_DRAW_BATCH = 64

# Wall on simulated time while waiting for the first passage above b
_PASSAGE_TIME_CAP = 1e7


class ExtremumConvention(enum.Enum):
    """How backward extremum times are read off a path."""

    # forward = last attainment, backward = sigma - first attainment
    FIRST_LAST = "first-last"
    # backward = sigma - forward
    COMPLEMENT = "complement"


@dataclass(frozen=True, eq=False)
class CpPath:
    """One realization: X_t = drift*t + sum of jump_sizes at jump_times <= t."""

    drift: float
    t_end: float
    jump_times: np.ndarray
    jump_sizes: np.ndarray

    @classmethod
    def from_jumps(cls, drift: float, t_end: float, jumps=()) -> "CpPath":
        """Build a path from ``[(time, size), ...]`` pairs."""
        jumps = sorted(jumps)
        times = np.array([t for t, _ in jumps], dtype=float)
        sizes = np.array([s for _, s in jumps], dtype=float)
        return cls(float(drift), float(t_end), times, sizes)

    @property
    def jump_count(self) -> int:
        return len(self.jump_times)

    def value_at(self, t: float) -> float:
        """X_t (right-continuous)."""
        k = int(np.searchsorted(self.jump_times, t, side="right"))
        return self.drift * t + float(self.jump_sizes[:k].sum())

    def left_limit(self, t: float) -> float:
        """X_{t-}; X_{0-} is taken as 0."""
        if t <= 0:
            return 0.0
        k = int(np.searchsorted(self.jump_times, t, side="left"))
        return self.drift * t + float(self.jump_sizes[:k].sum())

    def segments(self, t_end: float | None = None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Linear pieces on [0, t_end].

        Returns:
            (starts, ends, start_values): piece j runs over [starts[j], ends[j])
            with X = start_values[j] + drift*(t - starts[j])
        """
        t_end = self.t_end if t_end is None else t_end
        keep = self.jump_times <= t_end
        times = self.jump_times[keep]
        sizes = self.jump_sizes[keep]
        starts = np.concatenate(([0.0], times))
        ends = np.concatenate((times, [t_end]))
        start_values = self.drift * starts + np.concatenate(([0.0], np.cumsum(sizes)))
        return starts, ends, start_values


@dataclass(frozen=True)
class LevyFunctionals:
    sigma: float
    n_minus: float
    n_plus: float
    nt_minus: float
    nt_plus: float
    f_fwd: float
    f_bwd: float
    g_fwd: float
    g_bwd: float
    x_sigma_minus: float
    depth: float
    terminal: float

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def last_nonpositive_time(path: CpPath, t_end: float | None = None) -> float:
    """
    sigma = sup of the closure of {t in [0, t_end] : X_t <= 0}.

    Each piece contributes the right end of its sub-level interval: for a
    rising piece starting at a <= 0 that is the zero crossing (or the piece end
    if the piece stays nonpositive); for a falling piece it is the piece end
    whenever the piece finishes nonpositive.
    """
    starts, ends, a = path.segments(t_end)
    lengths = ends - starts
    c = path.drift
    if c > 0:
        valid = a <= 0
        reach = -a / c
        candidates = np.where(reach >= lengths, ends, starts + reach)
    else:
        valid = a + c * lengths <= 0
        candidates = ends
    if not valid.any():
        return 0.0
    return float(candidates[valid].max())


def _occupation_below(a: np.ndarray, lengths: np.ndarray, c: float, level: float) -> float:
    """Lebesgue measure of {X <= level} over pieces a + c*u, u in [0, L]."""
    cross = np.clip((level - a) / c, 0.0, lengths)
    if c > 0:
        return float(cross.sum())
    return float((lengths - cross).sum())


def _occupation_above(a: np.ndarray, lengths: np.ndarray, c: float, level: float) -> float:
    """Lebesgue measure of {X >= level}."""
    cross = np.clip((level - a) / c, 0.0, lengths)
    if c > 0:
        return float((lengths - cross).sum())
    return float(cross.sum())


def _attainment(times: np.ndarray, values: np.ndarray, target: float) -> tuple[float, float]:
    """First and last candidate time whose value equals `target` up to the level tolerance."""
    hit = np.abs(values - target) <= settings.LEVEL_TOLERANCE
    chosen = times[hit]
    return float(chosen.min()), float(chosen.max())


def levy_functionals(
    path: CpPath,
    sigma: float,
    convention: ExtremumConvention = ExtremumConvention.FIRST_LAST,
) -> LevyFunctionals:
    """
    Compute the last-passage functionals of a path given its sigma.

    Args:
        path: Realized path
        sigma: Output of last_nonpositive_time on the same path
        convention: Extremum-time convention

    Returns:
        LevyFunctionals with occupation and extremum times on [0, sigma]

    Raises:
        InvalidSigma: If sigma lies outside [0, t_end]
    """
    if sigma < 0 or sigma > path.t_end + settings.LEVEL_TOLERANCE:
        raise InvalidSigma(f"sigma={sigma} outside [0, {path.t_end}]")

    c = path.drift
    starts, ends, a = path.segments()
    whole_lows = np.minimum(a, a + c * (ends - starts))
    depth = -min(0.0, float(whole_lows.min()))
    terminal = path.value_at(path.t_end)

    if sigma == 0:
        return LevyFunctionals(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, depth, terminal)

    inside = starts < sigma
    starts, a = starts[inside], a[inside]
    stops = np.minimum(ends[inside], sigma)
    lengths = stops - starts
    x_sigma_minus = path.left_limit(sigma)

    n_minus = _occupation_below(a, lengths, c, 0.0)
    n_plus = _occupation_above(a, lengths, c, 0.0)
    nt_minus = _occupation_below(a, lengths, c, x_sigma_minus)
    nt_plus = _occupation_above(a, lengths, c, x_sigma_minus)

    # Extremes of a monotone piece sit at its ends: the value at the start and
    # the left limit at the (sigma-clipped) stop.
    times = np.concatenate((starts, stops))
    values = np.concatenate((a, a + c * lengths))
    low_first, low_last = _attainment(times, values, float(values.min()))
    high_first, high_last = _attainment(times, values, float(values.max()))

    f_fwd, g_fwd = low_last, high_last
    if convention is ExtremumConvention.COMPLEMENT:
        f_bwd, g_bwd = sigma - low_last, sigma - high_last
    else:
        f_bwd, g_bwd = sigma - low_first, sigma - high_first

    return LevyFunctionals(
        sigma=float(sigma),
        n_minus=n_minus,
        n_plus=n_plus,
        nt_minus=nt_minus,
        nt_plus=nt_plus,
        f_fwd=f_fwd,
        f_bwd=f_bwd,
        g_fwd=g_fwd,
        g_bwd=g_bwd,
        x_sigma_minus=x_sigma_minus,
        depth=depth,
        terminal=terminal,
    )


class _CompensatedClock:
    """Running sum of inter-arrival gaps with Kahan compensation."""

    def __init__(self):
        self.value = 0.0
        self._carry = 0.0

    def add(self, gap: float) -> float:
        y = gap - self._carry
        t = self.value + y
        self._carry = (t - self.value) - y
        self.value = t
        return t


class _DrawStream:
    """Batched gap and jump-size draws from one generator."""

    def __init__(self, model: CpModel, rng: np.random.Generator):
        self.model = model
        self.rng = rng
        self._gaps = np.empty(0)
        self._sizes = np.empty(0)
        self._pos = 0

    def next(self) -> tuple[float, float]:
        if self.model.rate == 0:
            return math.inf, 0.0
        if self._pos == len(self._gaps):
            self._gaps = self.rng.exponential(1.0 / self.model.rate, _DRAW_BATCH)
            self._sizes = self.model.jump_law.sample(self.rng, _DRAW_BATCH)
            self._pos = 0
        gap, size = float(self._gaps[self._pos]), float(self._sizes[self._pos])
        self._pos += 1
        return gap, size


def _simulate(
    model: CpModel,
    rng: np.random.Generator,
    time_limit: float,
    level: float | None = None,
) -> tuple[list[float], list[float], float | None]:
    """
    Run the path forward until `time_limit` or the first passage above `level`.

    Returns:
        (jump_times, jump_sizes, passage_time); passage_time is None when the
        level is not passed by `time_limit` (or no level was given)
    """
    c = model.drift
    draws = _DrawStream(model, rng)
    clock = _CompensatedClock()
    times: list[float] = []
    sizes: list[float] = []
    jump_total = 0.0

    while True:
        t_prev = clock.value
        gap, size = draws.next()
        t_next = clock.add(gap) if math.isfinite(gap) else math.inf

        if level is not None and c > 0:
            x_prev = c * t_prev + jump_total
            t_cross = t_prev + (level - x_prev) / c
            if t_cross <= min(t_next, time_limit):
                return times, sizes, t_cross

        if t_next > time_limit:
            return times, sizes, None

        times.append(t_next)
        sizes.append(size)
        jump_total += size
        if level is not None and c * t_next + jump_total > level:
            return times, sizes, t_next


def sample_cp_path(model: CpModel, t_end: float, rng: np.random.Generator) -> CpPath:
    """
    Sample a path on [0, t_end].

    Jump times come from exponential gaps at rate λ; sizes are iid from the
    model's jump law.
    """
    if t_end <= 0:
        raise ConfigError(f"t_end must be positive, got {t_end}")
    times, sizes, _ = _simulate(model, rng, t_end)
    return CpPath(model.drift, float(t_end), np.array(times), np.array(sizes))


def first_passage_time(
    model: CpModel,
    x: float,
    rng: np.random.Generator,
    cap: float,
) -> float | None:
    """
    tau_x = inf{t >= 0 : X_t > x} on a freshly simulated path.

    Returns:
        The passage time (by creeping or by an up jump), or None if the level
        is not passed by time `cap`
    """
    if x < 0 or cap <= 0:
        raise ConfigError(f"Need x >= 0 and cap > 0, got x={x}, cap={cap}")
    _, _, passage = _simulate(model, rng, cap, level=x)
    return passage


def sigma_truncated(
    model: CpModel,
    b: float,
    rng: np.random.Generator,
) -> tuple[CpPath, float, float | None]:
    """
    Realize the infinite-horizon sigma by stopping at the first passage above b.

    The path is observed up to tau_b; a later return to (-inf, 0] would move
    sigma, and the probability of that event is the returned bias bound. It is
    known in closed form for exponential down jumps; for other jump laws the
    bound is None and choosing b is up to the caller.

    Returns:
        (path up to tau_b, sigma, bias_bound)

    Raises:
        ConfigError: If the model has up jumps or psi'(0) <= 0
        NoConvergence: If b is not passed within the simulated-time cap
    """
    model.require_spectrally_negative("sigma_truncated")
    if b <= 0:
        raise ConfigError(f"Truncation level must be positive, got {b}")

    times, sizes, passage = _simulate(model, rng, _PASSAGE_TIME_CAP, level=b)
    if passage is None:
        raise NoConvergence(f"Level {b} not passed within simulated time {_PASSAGE_TIME_CAP}")
    path = CpPath(model.drift, passage, np.array(times), np.array(sizes))
    sigma = last_nonpositive_time(path)

    if model.rate == 0:
        bias_bound = 0.0
    elif isinstance(model.jump_law, Exponential):
        bias_bound = ruin_probability(TransformContext(model), b)
    else:
        bias_bound = None
    return path, sigma, bias_bound
