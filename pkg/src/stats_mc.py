"""
Monte Carlo - Reproducible sample tables and the statistics run on them.

Every sampled path draws from its own generator keyed by (master seed,
stream, path index) through numpy's SeedSequence/Philox, so row i of a table
depends on nothing but the seed and i. Tables are built in fixed chunks,
optionally on worker processes, and stacked in index order; the worker count
never changes a single bit of the output.

Statistics:
- ks_two_sample / ks_uniform01: exact sup-distance of ECDFs, asymptotic
  Kolmogorov p-value (scipy.special.kolmogorov)
- symmetry_ks: KS between a sample and its negation
- empirical_laplace: mean of e^{-sx} with its standard error
- atom_ztest: two-proportion z-test for the masses at 0
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import kolmogorov
from scipy.stats import norm

from . import settings
from .errors import ConfigError, DomainError, EmptySample, NoConvergence, ReportIOError
from .levy_paths import (
    first_passage_time,
    last_nonpositive_time,
    levy_functionals,
    sample_cp_path,
    sigma_truncated,
)
from .models import CpModel, Exponential, FiniteHorizon, TruncatedHorizon
from .transforms import TransformContext, ruin_probability

logger = logging.getLogger(__name__)

TABLE_COLUMNS = (
    "sigma",
    "n_minus",
    "n_plus",
    "nt_minus",
    "nt_plus",
    "f_fwd",
    "f_bwd",
    "g_fwd",
    "g_bwd",
    "depth",
    "terminal",
)
SIX_TIMES = ("n_minus", "n_plus", "f_fwd", "f_bwd", "g_fwd", "g_bwd")

# Horizon each sampling suite runs on, and whether it needs a model without up jumps
SUITE_REQUIREMENTS = {
    "prop1": ("truncated", True),
    "transforms": ("truncated", True),
    "uniform": ("truncated", True),
    "prop2": ("finite", True),
    "general": ("finite", False),
}

RELIABLE_KS_SIZE = 1000
CHUNK_SIZE = 2000
_PASSAGE_CAP = 1e7


@dataclass(frozen=True)
class KsResult:
    d: float
    n: int
    m: int | None
    p_value: float

    @property
    def reliable(self) -> bool:
        """Asymptotic p-values are trusted only for min(n, m) >= 1000."""
        sizes = [self.n] if self.m is None else [self.n, self.m]
        return min(sizes) >= RELIABLE_KS_SIZE

    def to_dict(self) -> dict:
        return {"d": self.d, "n": self.n, "m": self.m, "p_value": self.p_value,
                "reliable": self.reliable}


@dataclass(frozen=True)
class ZTestResult:
    z: float
    p_value: float
    mass_a: float
    mass_b: float

    def to_dict(self) -> dict:
        return {"z": self.z, "p_value": self.p_value, "mass_a": self.mass_a,
                "mass_b": self.mass_b}


@dataclass(frozen=True, eq=False)
class SampleTable:
    """Immutable column table of per-path functionals."""

    columns: dict[str, np.ndarray]
    metadata: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.columns["sigma"])

    def __getitem__(self, name: str) -> np.ndarray:
        return self.columns[name]

    def select(self, mask: np.ndarray) -> "SampleTable":
        return SampleTable({k: v[mask] for k, v in self.columns.items()}, dict(self.metadata))

    def positive_sigma(self) -> "SampleTable":
        return self.select(self.columns["sigma"] > 0)

    def identical_to(self, other: "SampleTable") -> bool:
        """Bit-level equality of every column and of the metadata."""
        if self.metadata != other.metadata or set(self.columns) != set(other.columns):
            return False
        return all(
            self.columns[k].tobytes() == other.columns[k].tobytes() for k in self.columns
        )

    def to_csv(self, path: str | Path) -> None:
        """Header row plus one row per path, 17 significant digits."""
        data = np.column_stack([self.columns[c] for c in TABLE_COLUMNS])
        try:
            np.savetxt(path, data, fmt="%.17g", delimiter=",",
                       header=",".join(TABLE_COLUMNS), comments="")
        except OSError as e:
            raise ReportIOError(f"Cannot write samples to {path}: {e}") from e

    @classmethod
    def from_csv(cls, path: str | Path) -> "SampleTable":
        with open(path) as f:
            header = f.readline().strip().split(",")
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        if data.size == 0:
            data = np.empty((0, len(header)))
        columns = {name: np.ascontiguousarray(data[:, i]) for i, name in enumerate(header)}
        return cls(columns, {"source": str(path)})


def sample_stream(master_seed: int, index: int, stream: int = 0) -> np.random.Generator:
    """Counter-based generator for one path: a pure function of (seed, stream, index)."""
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence(master_seed, spawn_key=(stream, index)))
    )


def check_model_for_suite(model: CpModel, suite_kind: str) -> None:
    """
    Raises:
        ConfigError: If the suite kind is unknown or the model does not fit it
    """
    if suite_kind not in SUITE_REQUIREMENTS:
        raise ConfigError(f"Unknown sampling suite '{suite_kind}'")
    horizon, needs_negative = SUITE_REQUIREMENTS[suite_kind]
    if horizon == "truncated" and not isinstance(model.horizon, TruncatedHorizon):
        raise ConfigError(f"Suite '{suite_kind}' needs a truncated horizon")
    if horizon == "finite" and not isinstance(model.horizon, FiniteHorizon):
        raise ConfigError(f"Suite '{suite_kind}' needs a finite horizon")
    if needs_negative:
        model.require_spectrally_negative(f"suite '{suite_kind}'")


def sample_row(model: CpModel, rng: np.random.Generator) -> tuple[float, ...]:
    """Functionals of one freshly sampled path, in TABLE_COLUMNS order."""
    if isinstance(model.horizon, TruncatedHorizon):
        path, sigma, _ = sigma_truncated(model, model.horizon.b, rng)
    else:
        path = sample_cp_path(model, model.horizon.T, rng)
        sigma = last_nonpositive_time(path)
    values = levy_functionals(path, sigma)
    return tuple(getattr(values, c) for c in TABLE_COLUMNS)


def _sample_chunk(model: CpModel, start: int, stop: int, master_seed: int) -> np.ndarray:
    rows = [sample_row(model, sample_stream(master_seed, i)) for i in range(start, stop)]
    return np.array(rows, dtype=float).reshape(stop - start, len(TABLE_COLUMNS))


def _passage_chunk(model: CpModel, start: int, stop: int, master_seed: int, stream: int):
    out = np.empty(stop - start)
    b = model.horizon.b
    for k, i in enumerate(range(start, stop)):
        rng = sample_stream(master_seed, i, stream)
        path, _, _ = sigma_truncated(model, b, rng)
        _, _, lows = path.segments()
        depth = -min(0.0, float(lows.min()))
        tau = first_passage_time(model, depth, rng, _PASSAGE_CAP)
        if tau is None:
            raise NoConvergence(f"Passage above {depth} not reached within {_PASSAGE_CAP}")
        out[k] = tau
    return out


def _chunks(count: int, size: int) -> list[tuple[int, int]]:
    return [(start, min(start + size, count)) for start in range(0, count, size)]


def _run_chunks(fn, chunks, args: tuple, workers: int) -> list:
    if workers <= 1 or len(chunks) <= 1:
        return [fn(*args[:1], start, stop, *args[1:]) for start, stop in chunks]
    with ProcessPoolExecutor(max_workers=workers) as executor:
        futures = [executor.submit(fn, *args[:1], start, stop, *args[1:]) for start, stop in chunks]
        return [f.result() for f in futures]


def truncation_bias(model: CpModel) -> float | None:
    """Probability that the truncated sigma misses a later return; None if unknown."""
    if not isinstance(model.horizon, TruncatedHorizon):
        return 0.0
    if model.rate == 0:
        return 0.0
    if isinstance(model.jump_law, Exponential):
        return ruin_probability(TransformContext(model), model.horizon.b)
    return None


def run_monte_carlo(
    model: CpModel,
    suite_kind: str,
    N: int,
    master_seed: int,
    workers: int | None = None,
) -> SampleTable:
    """
    Sample N paths and tabulate their functionals.

    Args:
        model: Model; its horizon decides finite-T or truncated sampling
        suite_kind: Suite the table is for (checked against the model)
        N: Number of paths, N >= 1
        master_seed: Master seed; row i uses stream (master_seed, 0, i)
        workers: Worker processes (defaults to settings.DEFAULT_WORKERS)

    Raises:
        ConfigError: On a model/suite mismatch or N < 1
    """
    if N < 1:
        raise ConfigError(f"Need at least one path, got N={N}")
    check_model_for_suite(model, suite_kind)
    workers = settings.DEFAULT_WORKERS if workers is None else workers

    bias = truncation_bias(model)
    if bias is None:
        logger.warning(
            f"Truncation bias unquantified for {model.jump_law.family} jumps; "
            f"level b={model.horizon.b} is taken as given"
        )

    chunks = _chunks(N, CHUNK_SIZE)
    logger.debug(
        f"Sampling {N} paths for '{suite_kind}' in {len(chunks)} chunks, {workers} worker(s)"
    )
    blocks = _run_chunks(_sample_chunk, chunks, (model, master_seed), workers)
    data = np.vstack(blocks)

    columns = {name: np.ascontiguousarray(data[:, i]) for i, name in enumerate(TABLE_COLUMNS)}
    metadata = {
        "master_seed": master_seed,
        "model": model.digest(),
        "horizon": model.horizon.to_dict(),
        "suite": suite_kind,
        "N": N,
        "truncation_bias": bias,
    }
    return SampleTable(columns, metadata)


def run_passage_at_depth(
    model: CpModel,
    N: int,
    master_seed: int,
    stream: int = 1,
    workers: int | None = None,
) -> np.ndarray:
    """
    Sample tau_I with I and tau independent: I is the depth of one fresh path,
    tau the first passage above I on another fresh path.

    `stream` keeps this sample independent of the main table (stream 0) and of
    other comparison samples.
    """
    if N < 1:
        raise ConfigError(f"Need at least one path, got N={N}")
    check_model_for_suite(model, "transforms")
    if stream == 0:
        raise ConfigError("Stream 0 is reserved for the main sample table")
    workers = settings.DEFAULT_WORKERS if workers is None else workers
    chunks = _chunks(N, CHUNK_SIZE)
    blocks = _run_chunks(_passage_chunk, chunks, (model, master_seed, stream), workers)
    return np.concatenate(blocks)


def _as_sample(x, name: str = "sample") -> np.ndarray:
    arr = np.asarray(x, dtype=float).ravel()
    if arr.size == 0:
        raise EmptySample(f"Empty {name}")
    return arr


def ks_two_sample(a, b) -> KsResult:
    """
    Two-sample Kolmogorov-Smirnov comparison.

    Raises:
        EmptySample: If either sample is empty
    """
    a = np.sort(_as_sample(a, "first sample"))
    b = np.sort(_as_sample(b, "second sample"))
    n, m = a.size, b.size
    grid = np.concatenate((a, b))
    cdf_a = np.searchsorted(a, grid, side="right") / n
    cdf_b = np.searchsorted(b, grid, side="right") / m
    d = float(np.max(np.abs(cdf_a - cdf_b)))
    p_value = float(np.clip(kolmogorov(math.sqrt(n * m / (n + m)) * d), 0.0, 1.0))
    result = KsResult(d, n, m, p_value)
    if not result.reliable:
        logger.debug(f"KS p-value with n={n}, m={m} is below the reliability size")
    return result


def ks_uniform01(u) -> KsResult:
    """
    One-sample KS against the uniform law on [0, 1].

    Raises:
        DomainError: If a value lies outside [0, 1] by more than 1e-12
    """
    u = _as_sample(u)
    tol = settings.LEVEL_TOLERANCE
    if u.min() < -tol or u.max() > 1 + tol:
        raise DomainError(f"Values outside [0, 1]: min={u.min()}, max={u.max()}")
    u = np.sort(np.clip(u, 0.0, 1.0))
    n = u.size
    ranks = np.arange(1, n + 1)
    d = float(max(np.max(ranks / n - u), np.max(u - (ranks - 1) / n)))
    p_value = float(np.clip(kolmogorov(math.sqrt(n) * d), 0.0, 1.0))
    return KsResult(d, n, None, p_value)


def empirical_laplace(x, s: float) -> tuple[float, float]:
    """
    Mean of e^{-s x} and its standard error.

    Raises:
        EmptySample: If x is empty
        DomainError: If s < 0
    """
    x = _as_sample(x)
    if s < 0:
        raise DomainError(f"Laplace argument must be nonnegative, got {s}")
    values = np.exp(-s * x)
    mean = float(values.mean())
    stderr = float(values.std(ddof=1) / math.sqrt(values.size)) if values.size > 1 else 0.0
    return mean, stderr


def symmetry_ks(d) -> KsResult:
    """KS between a sample of differences and its mirror image."""
    d = _as_sample(d)
    return ks_two_sample(d, -d)


def atom_ztest(a, b) -> ZTestResult:
    """Two-proportion z-test for P(value = 0) in two samples."""
    a = _as_sample(a, "first sample")
    b = _as_sample(b, "second sample")
    n, m = a.size, b.size
    pa = float(np.count_nonzero(a == 0)) / n
    pb = float(np.count_nonzero(b == 0)) / m
    pooled = (pa * n + pb * m) / (n + m)
    spread = pooled * (1 - pooled) * (1 / n + 1 / m)
    if spread <= 0:
        return ZTestResult(0.0, 1.0, pa, pb)
    z = (pa - pb) / math.sqrt(spread)
    return ZTestResult(z, float(2 * norm.sf(abs(z))), pa, pb)


def compare_with_atom(a, b) -> tuple[KsResult, ZTestResult]:
    """KS on the strictly positive parts plus a z-test on the masses at 0."""
    a = _as_sample(a, "first sample")
    b = _as_sample(b, "second sample")
    return ks_two_sample(a[a > 0], b[b > 0]), atom_ztest(a, b)


def ecdf(x) -> tuple[np.ndarray, np.ndarray]:
    """Distinct sorted values and the ECDF evaluated at each."""
    x = _as_sample(x)
    values, counts = np.unique(x, return_counts=True)
    return values, np.cumsum(counts) / x.size


def duplicate_fraction(x) -> float:
    """Share of entries that repeat an earlier value."""
    x = _as_sample(x)
    return 1.0 - np.unique(x).size / x.size
