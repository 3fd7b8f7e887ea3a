"""
Walk Enumeration - Exact laws of walk functionals by exhaustive enumeration.

Every path of a finite-support step law is visited once with its product
weight. Laws are accumulated as exact Fractions and renormalized on the
conditioning event, so two laws are equal only if they are equal exactly.

Large enumerations are split by fixed-length prefixes of atom indices and
farmed out to worker processes. Partial tallies are merged by exact addition,
which makes the result independent of the worker count.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import accumulate, combinations, product

from . import settings
from .errors import ConfigError, SizeLimit, ZeroProbabilityEvent
from .report import CheckReport, CheckResult
from .walk_core import FUNCTIONAL_NAMES, functionals_from_sums

logger = logging.getLogger(__name__)

CLASS_ONE = ("n_minus", "nt_plus", "f_fwd", "g_bwd")
CLASS_TWO = ("n_plus", "nt_minus", "f_bwd", "g_fwd")
LAST_VISIT_SIX = ("n_minus", "n_plus", "f_fwd", "f_bwd", "g_fwd", "g_bwd")


@dataclass(frozen=True)
class StepLaw:
    """Finite-support increment law; weights are exact and sum to 1."""

    atoms: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        if not self.atoms:
            raise ConfigError("Step law needs at least one atom")
        values = [v for v, _ in self.atoms]
        if len(set(values)) != len(values):
            raise ConfigError(f"Step law values must be distinct: {values}")
        if any(w <= 0 for _, w in self.atoms):
            raise ConfigError("Step law weights must be positive")
        total = sum(w for _, w in self.atoms)
        if total != 1:
            raise ConfigError(f"Step law weights sum to {total}, expected 1")

    @classmethod
    def from_pairs(cls, pairs) -> "StepLaw":
        return cls(tuple((Fraction(v), Fraction(w)) for v, w in pairs))

    @classmethod
    def parse(cls, text: str) -> "StepLaw":
        """
        Parse ``"value:weight,value:weight"``, e.g. ``"-1:1/2,1:1/2"``.

        Raises:
            ConfigError: If the text is malformed or the law is invalid
        """
        pairs = []
        for chunk in text.split(","):
            chunk = chunk.strip()
            if not chunk:
                continue
            value, sep, weight = chunk.rpartition(":")
            if not sep:
                raise ConfigError(f"Step atom '{chunk}' is not of the form value:weight")
            try:
                pairs.append((Fraction(value.strip()), Fraction(weight.strip())))
            except (ValueError, ZeroDivisionError) as e:
                raise ConfigError(f"Cannot parse step atom '{chunk}': {e}") from e
        return cls(tuple(pairs))

    @property
    def values(self) -> tuple[Fraction, ...]:
        return tuple(v for v, _ in self.atoms)

    @property
    def weights(self) -> tuple[Fraction, ...]:
        return tuple(w for _, w in self.atoms)

    def __str__(self) -> str:
        return ",".join(f"{v}:{w}" for v, w in self.atoms)


class ConditionEvent:
    """Base class of the conditioning events; `contains` sees the partial sums."""

    def contains(self, sums: tuple[Fraction, ...], s_sigma: Fraction) -> bool:
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class AllPaths(ConditionEvent):
    def contains(self, sums, s_sigma) -> bool:
        return True

    def describe(self) -> str:
        return "all"


@dataclass(frozen=True)
class TerminalIn(ConditionEvent):
    """{S_n in [low, high]}; None stands for an infinite endpoint."""

    low: Fraction | None = None
    high: Fraction | None = None

    def __post_init__(self):
        if self.low is not None and self.high is not None and self.low > self.high:
            raise ConfigError(f"Empty terminal interval [{self.low}, {self.high}]")

    def contains(self, sums, s_sigma) -> bool:
        terminal = sums[-1]
        if self.low is not None and terminal < self.low:
            return False
        if self.high is not None and terminal > self.high:
            return False
        return True

    def describe(self) -> str:
        low = "-inf" if self.low is None else str(self.low)
        high = "inf" if self.high is None else str(self.high)
        return f"[{low},{high}]"


@dataclass(frozen=True)
class LastVisitZero(ConditionEvent):
    """{S_sigma = 0}."""

    def contains(self, sums, s_sigma) -> bool:
        return s_sigma == 0

    def describe(self) -> str:
        return "lastzero"


def parse_event(text: str) -> ConditionEvent:
    """
    Parse an event selector: ``all``, ``nonneg`` (S_n >= 0), ``lastzero`` or an
    interval ``[a,b]`` with ``inf``/``-inf`` endpoints allowed.
    """
    text = text.strip().lower()
    if text in ("all", "r"):
        return AllPaths()
    if text in ("nonneg", "nonnegative"):
        return TerminalIn(Fraction(0), None)
    if text in ("lastzero", "last-visit-zero"):
        return LastVisitZero()
    if text.startswith("[") and text.endswith("]"):
        parts = text[1:-1].split(",")
        if len(parts) != 2:
            raise ConfigError(f"Interval event needs two endpoints: {text}")
        bounds = []
        for part in parts:
            part = part.strip()
            if part in ("inf", "+inf", "-inf"):
                bounds.append(None)
            else:
                try:
                    bounds.append(Fraction(part))
                except (ValueError, ZeroDivisionError) as e:
                    raise ConfigError(f"Bad interval endpoint '{part}'") from e
        if bounds[0] is None and bounds[1] is None:
            return AllPaths()
        return TerminalIn(bounds[0], bounds[1])
    raise ConfigError(f"Unknown event selector: {text}")


@dataclass(frozen=True)
class ExactDist:
    """Finite law with exact probabilities; values strictly increasing."""

    support: tuple[tuple[Fraction, Fraction], ...]

    @classmethod
    def from_masses(cls, masses: dict) -> "ExactDist":
        """Normalize a value -> mass mapping, dropping zero masses."""
        total = sum(masses.values(), Fraction(0))
        if total == 0:
            raise ZeroProbabilityEvent("Cannot normalize a law with zero total mass")
        return cls(tuple(
            (Fraction(value), Fraction(mass) / total)
            for value, mass in sorted(masses.items())
            if mass != 0
        ))

    def as_dict(self) -> dict:
        return dict(self.support)

    def to_json(self) -> dict:
        return {str(v): str(p) for v, p in self.support}

    def __str__(self) -> str:
        inner = ", ".join(f"{v}: {p}" for v, p in self.support)
        return "{" + inner + "}"


def total_variation(a: dict, b: dict) -> Fraction:
    """Half the L1 distance between two normalized mass mappings."""
    keys = set(a) | set(b)
    return sum((abs(a.get(k, 0) - b.get(k, 0)) for k in keys), Fraction(0)) / 2


@dataclass
class EnumerationTally:
    """Exact masses accumulated over the paths that satisfy the event."""

    total: Fraction = Fraction(0)
    marginals: dict = field(default_factory=dict)
    by_sigma: dict = field(default_factory=dict)
    forward_paths: dict = field(default_factory=dict)
    reversed_paths: dict = field(default_factory=dict)
    paths_seen: int = 0
    paths_in_event: int = 0
    tilde_mismatches: int = 0

    def add_path(self, sums: tuple, weight: Fraction, event: ConditionEvent, track_paths: bool):
        self.paths_seen += 1
        functionals = functionals_from_sums(sums)
        if not event.contains(sums, functionals.s_sigma):
            return
        self.paths_in_event += 1
        self.total += weight
        sigma = functionals.sigma
        for name in FUNCTIONAL_NAMES:
            value = getattr(functionals, name)
            marginal = self.marginals.setdefault(name, {})
            marginal[value] = marginal.get(value, 0) + weight
            conditional = self.by_sigma.setdefault(name, {})
            key = (sigma, value)
            conditional[key] = conditional.get(key, 0) + weight
        if (functionals.n_minus != functionals.nt_minus
                or functionals.n_plus != functionals.nt_plus):
            self.tilde_mismatches += 1
        if track_paths:
            forward = sums[: sigma + 1]
            s_sigma = functionals.s_sigma
            backward = tuple(s_sigma - forward[sigma - i] for i in range(sigma + 1))
            self.forward_paths[forward] = self.forward_paths.get(forward, 0) + weight
            self.reversed_paths[backward] = self.reversed_paths.get(backward, 0) + weight

    def merge(self, other: "EnumerationTally") -> None:
        self.total += other.total
        self.paths_seen += other.paths_seen
        self.paths_in_event += other.paths_in_event
        self.tilde_mismatches += other.tilde_mismatches
        for target, source in (
            (self.marginals, other.marginals),
            (self.by_sigma, other.by_sigma),
        ):
            for name, masses in source.items():
                bucket = target.setdefault(name, {})
                for key, mass in masses.items():
                    bucket[key] = bucket.get(key, 0) + mass
        for target, source in (
            (self.forward_paths, other.forward_paths),
            (self.reversed_paths, other.reversed_paths),
        ):
            for key, mass in source.items():
                target[key] = target.get(key, 0) + mass

    def law(self, name: str) -> ExactDist:
        self._require_mass()
        return ExactDist.from_masses(self.marginals[name])

    def law_by_sigma(self, name: str) -> dict[int, ExactDist]:
        self._require_mass()
        grouped: dict[int, dict] = {}
        for (sigma, value), mass in self.by_sigma[name].items():
            grouped.setdefault(sigma, {})[value] = mass
        return {sigma: ExactDist.from_masses(grouped[sigma]) for sigma in sorted(grouped)}

    def path_laws(self) -> tuple[dict, dict]:
        """Normalized forward and reversed path-space measures."""
        self._require_mass()
        forward = {k: v / self.total for k, v in self.forward_paths.items()}
        backward = {k: v / self.total for k, v in self.reversed_paths.items()}
        return forward, backward

    def _require_mass(self):
        if self.total == 0:
            raise ZeroProbabilityEvent("No enumerated path satisfies the conditioning event")


def _tally_prefix(
    law: StepLaw,
    n: int,
    event: ConditionEvent,
    prefix: tuple[int, ...],
    track_paths: bool,
) -> EnumerationTally:
    """Enumerate every path whose first atoms are `prefix` (worker entry point)."""
    tally = EnumerationTally()
    values = law.values
    weights = law.weights
    head_weight = math.prod((weights[i] for i in prefix), start=Fraction(1))
    head_steps = [values[i] for i in prefix]
    for tail in product(range(len(values)), repeat=n - len(prefix)):
        steps = head_steps + [values[i] for i in tail]
        weight = head_weight * math.prod((weights[i] for i in tail), start=Fraction(1))
        sums = tuple(accumulate(steps, initial=Fraction(0)))
        tally.add_path(sums, weight, event, track_paths)
    return tally


def _prefix_length(support: int, n: int, workers: int) -> int:
    if workers <= 1 or support <= 1:
        return 0
    target = workers * 4
    length = 0
    while length < n and support**length < target:
        length += 1
    return length


def enumerate_paths(
    law: StepLaw,
    n: int,
    event: ConditionEvent,
    track_paths: bool = False,
    workers: int | None = None,
    path_cap: int | None = None,
) -> EnumerationTally:
    """
    Visit all |support|^n paths and tally the event-restricted masses.

    Args:
        law: Step law
        n: Walk length (n >= 0)
        event: Conditioning event
        track_paths: Also accumulate forward/reversed path-space measures
        workers: Worker processes (defaults to settings.DEFAULT_WORKERS)
        path_cap: Maximum number of paths (defaults to settings.PATH_CAP)

    Raises:
        SizeLimit: If |support|^n exceeds the cap
        ZeroProbabilityEvent: If no path satisfies the event
    """
    if n < 0:
        raise ConfigError(f"Walk length must be nonnegative, got {n}")
    workers = settings.DEFAULT_WORKERS if workers is None else workers
    cap = settings.PATH_CAP if path_cap is None else path_cap
    support = len(law.atoms)
    count = support**n
    if count > cap:
        raise SizeLimit(f"{support}^{n} = {count} paths exceeds the cap of {cap}")

    prefix_len = _prefix_length(support, n, workers)
    prefixes = list(product(range(support), repeat=prefix_len))
    logger.debug(
        f"Enumerating {count} paths of law {law} (n={n}, event={event.describe()}) "
        f"in {len(prefixes)} chunks on {workers} worker(s)"
    )

    tally = EnumerationTally()
    if workers <= 1 or len(prefixes) <= 1:
        for prefix in prefixes:
            tally.merge(_tally_prefix(law, n, event, prefix, track_paths))
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            futures = [
                executor.submit(_tally_prefix, law, n, event, prefix, track_paths)
                for prefix in prefixes
            ]
            # Merge in prefix order; exact addition makes the order immaterial anyway
            for future in futures:
                tally.merge(future.result())

    if tally.total == 0:
        raise ZeroProbabilityEvent(
            f"Event {event.describe()} has probability 0 for law {law} at n={n}"
        )
    return tally


def exact_distribution(
    law: StepLaw,
    n: int,
    event: ConditionEvent,
    functional: str,
    workers: int | None = None,
    path_cap: int | None = None,
) -> ExactDist:
    """
    Exact conditional law of one functional given the event.

    Raises:
        ConfigError: If the functional name is unknown
        ZeroProbabilityEvent, SizeLimit: As enumerate_paths
    """
    _require_functional(functional)
    tally = enumerate_paths(law, n, event, workers=workers, path_cap=path_cap)
    return tally.law(functional)


def exact_conditional_by_sigma(
    law: StepLaw,
    n: int,
    event: ConditionEvent,
    functional: str,
    workers: int | None = None,
    path_cap: int | None = None,
) -> dict[int, ExactDist]:
    """Exact law of the functional given the event and sigma, keyed by sigma."""
    _require_functional(functional)
    tally = enumerate_paths(law, n, event, workers=workers, path_cap=path_cap)
    return tally.law_by_sigma(functional)


def _require_functional(name: str):
    if name not in FUNCTIONAL_NAMES:
        raise ConfigError(f"Unknown functional '{name}', expected one of {FUNCTIONAL_NAMES}")


def _class_check(name: str, claim: str, tally: EnumerationTally, members: tuple) -> CheckResult:
    """Exact equality of the laws of all members; statistic = largest pairwise TV."""
    laws = {m: tally.law(m) for m in members}
    worst = Fraction(0)
    for a, b in combinations(members, 2):
        worst = max(worst, total_variation(laws[a].as_dict(), laws[b].as_dict()))
    return CheckResult(
        name=name,
        claim=claim,
        statistic=float(worst),
        threshold=0.0,
        passed=worst == 0,
        details={
            "max_tv": str(worst),
            "laws": {m: laws[m].to_json() for m in members},
        },
    )


def _reversal_check(name: str, tally: EnumerationTally) -> CheckResult:
    forward, backward = tally.path_laws()
    tv = total_variation(forward, backward)
    return CheckResult(
        name=name,
        claim="reversal-law",
        statistic=float(tv),
        threshold=0.0,
        passed=tv == 0,
        details={"tv": str(tv), "distinct_paths": len(forward)},
    )


def check_prop3(
    law: StepLaw,
    n: int,
    event: ConditionEvent,
    workers: int | None = None,
    path_cap: int | None = None,
) -> CheckReport:
    """
    Certify the two-class partition and the reversal law for {S_n in B}.

    Checks:
        class1_laws_equal: n_minus, nt_plus, f_fwd, g_bwd share one law
        class2_laws_equal: n_plus, nt_minus, f_bwd, g_fwd share one law
        reversed_path_law: (S_0..S_sigma) and (Ŝ_0..Ŝ_sigma) have the same law

    Raises:
        ConfigError: For LastVisitZero (use check_corollary)
    """
    if isinstance(event, LastVisitZero):
        raise ConfigError(
            "check_prop3 takes {S_n in B} events; use check_corollary for {S_sigma = 0}"
        )
    tally = enumerate_paths(law, n, event, track_paths=True, workers=workers, path_cap=path_cap)
    report = CheckReport([
        _class_check("class1_laws_equal", "two-class-partition", tally, CLASS_ONE),
        _class_check("class2_laws_equal", "two-class-partition", tally, CLASS_TWO),
        _reversal_check("reversed_path_law", tally),
    ])
    logger.info(
        f"prop3 law={law} n={n} event={event.describe()}: "
        f"{'pass' if report.passed else 'FAIL'} over {tally.paths_in_event} paths"
    )
    return report


def check_corollary(
    law: StepLaw,
    n: int,
    workers: int | None = None,
    path_cap: int | None = None,
) -> CheckReport:
    """
    Certify the single-law statement on {S_sigma = 0}.

    Checks:
        six_laws_equal: n_minus, n_plus, f_fwd, f_bwd, g_fwd, g_bwd share one law
        tilde_counts_match: every path on the event has n_minus = nt_minus and
            n_plus = nt_plus
    """
    tally = enumerate_paths(law, n, LastVisitZero(), workers=workers, path_cap=path_cap)
    six = _class_check("six_laws_equal", "last-visit-zero", tally, LAST_VISIT_SIX)
    per_path = CheckResult(
        name="tilde_counts_match",
        claim="last-visit-zero",
        statistic=float(tally.tilde_mismatches),
        threshold=0.0,
        passed=tally.tilde_mismatches == 0,
        details={"paths_in_event": tally.paths_in_event, "mismatches": tally.tilde_mismatches},
    )
    return CheckReport([six, per_path])


def check_reversal_law(
    law: StepLaw,
    n: int,
    event: ConditionEvent,
    workers: int | None = None,
    path_cap: int | None = None,
) -> CheckReport:
    """Exact TV distance between the forward and reversed path measures up to sigma."""
    tally = enumerate_paths(law, n, event, track_paths=True, workers=workers, path_cap=path_cap)
    return CheckReport([_reversal_check("reversal_tv", tally)])
