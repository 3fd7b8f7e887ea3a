"""
Walk Core - Exact last-passage functionals of a finite random walk.

Everything here works on `fractions.Fraction` values; no floating point is
involved, so equalities between laws built from these functionals can be
certified exactly.

For a walk S_0 = 0, S_i = ζ_1 + ... + ζ_i (i <= n):
- sigma:   last index with S_i <= 0
- n_minus: #{1 <= i <= sigma : S_i <= 0}, n_plus: #{1 <= i <= sigma : S_i >= 0}
- nt_minus/nt_plus: the same counts over 0 <= i < sigma relative to S_sigma
- f_fwd/f_bwd: last index of the minimum over {0..sigma}, sigma minus its first index
- g_fwd/g_bwd: the same for the maximum
"""

from dataclasses import dataclass, fields
from fractions import Fraction
from itertools import accumulate
from typing import Iterable

# The nine functionals a caller may ask a law for
FUNCTIONAL_NAMES = (
    "sigma",
    "n_minus",
    "n_plus",
    "nt_minus",
    "nt_plus",
    "f_fwd",
    "f_bwd",
    "g_fwd",
    "g_bwd",
)


@dataclass(frozen=True)
class WalkPath:
    """A walk given by its increments; partial sums are derived with S_0 = 0."""

    increments: tuple[Fraction, ...] = ()

    @classmethod
    def from_steps(cls, steps: Iterable) -> "WalkPath":
        """Build a path from ints, strings or Fractions (e.g. ``(-1, "1/2")``)."""
        return cls(tuple(Fraction(step) for step in steps))

    @classmethod
    def from_partial_sums(cls, sums: Iterable[Fraction]) -> "WalkPath":
        """Inverse of `partial_sums`; the first entry must be 0."""
        values = [Fraction(v) for v in sums]
        if not values or values[0] != 0:
            raise ValueError("partial sums must start at 0")
        return cls(tuple(b - a for a, b in zip(values, values[1:])))

    @property
    def n(self) -> int:
        return len(self.increments)

    @property
    def partial_sums(self) -> tuple[Fraction, ...]:
        return tuple(accumulate(self.increments, initial=Fraction(0)))


@dataclass(frozen=True)
class WalkFunctionals:
    sigma: int
    n_minus: int
    n_plus: int
    nt_minus: int
    nt_plus: int
    f_fwd: int
    f_bwd: int
    g_fwd: int
    g_bwd: int
    s_sigma: Fraction

    def get(self, name: str) -> int:
        """Look up one of FUNCTIONAL_NAMES."""
        if name not in FUNCTIONAL_NAMES:
            raise KeyError(f"Unknown functional: {name}")
        return getattr(self, name)

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def last_nonpositive_index(sums: tuple[Fraction, ...]) -> int:
    """max{i : S_i <= 0}; S_0 = 0 keeps the set nonempty."""
    for i in range(len(sums) - 1, -1, -1):
        if sums[i] <= 0:
            return i
    return 0


def functionals_from_sums(sums: tuple[Fraction, ...]) -> WalkFunctionals:
    """Evaluate all functionals on a tuple of partial sums starting at S_0 = 0."""
    sigma = last_nonpositive_index(sums)
    s_sigma = sums[sigma]
    if sigma == 0:
        return WalkFunctionals(0, 0, 0, 0, 0, 0, 0, 0, 0, s_sigma)

    head = sums[1 : sigma + 1]
    before = sums[:sigma]
    window = sums[: sigma + 1]

    low = min(window)
    high = max(window)
    low_first = window.index(low)
    high_first = window.index(high)
    low_last = sigma - window[::-1].index(low)
    high_last = sigma - window[::-1].index(high)

    return WalkFunctionals(
        sigma=sigma,
        n_minus=sum(1 for v in head if v <= 0),
        n_plus=sum(1 for v in head if v >= 0),
        nt_minus=sum(1 for v in before if v <= s_sigma),
        nt_plus=sum(1 for v in before if v >= s_sigma),
        f_fwd=low_last,
        f_bwd=sigma - low_first,
        g_fwd=high_last,
        g_bwd=sigma - high_first,
        s_sigma=s_sigma,
    )


def walk_functionals(path: WalkPath) -> WalkFunctionals:
    """
    Compute sigma and the eight last-passage functionals of a walk.

    Args:
        path: Walk to evaluate (the empty walk is allowed)

    Returns:
        WalkFunctionals; all fields are 0 when sigma = 0
    """
    return functionals_from_sums(path.partial_sums)


def reverse_at_sigma(path: WalkPath) -> WalkPath:
    """
    Time-reverse the walk at sigma: Ŝ_i = S_sigma - S_{sigma-i}, i = 0..sigma.

    The increments of Ŝ are ζ_sigma, ..., ζ_1, so the result has length sigma
    (empty when sigma = 0).
    """
    sums = path.partial_sums
    sigma = last_nonpositive_index(sums)
    return WalkPath.from_partial_sums(sums[sigma] - sums[sigma - i] for i in range(sigma + 1))
