"""
Monte Carlo oracle
Final distances of simulated uniform random walks, moment and CDF estimates
and Kolmogorov-Smirnov comparison with reference distribution functions
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import mpmath
import numpy as np
from scipy import stats
from scipy.interpolate import PchipInterpolator

from .config import get_settings
from .densities import cdf_odd_dim, cdf_p2_closed
from .errors import DomainError, UnsupportedPathError
from .models_pydantic import Estimate, KSReference, KSResult, QuadSpec, WalkStats
from .numcore import HalfInt, PiecewiseFn
from .quadrature import cdf_quad

logger = logging.getLogger(__name__)

KS_C_001 = 1.628
RNG_ALGORITHM = "Philox"

CdfFn = Callable[[np.ndarray], np.ndarray]

# =============================================================================
# SAMPLING
# =============================================================================

def unit_vectors(rng: np.random.Generator, shape: Tuple[int, ...], dim: int) -> np.ndarray:
    """Uniform points on the unit sphere in R^dim from normalized Gaussians."""
    g = rng.standard_normal(shape + (dim,))
    norms = np.linalg.norm(g, axis=-1)
    bad = norms == 0
    while bad.any():
        g[bad] = rng.standard_normal((int(bad.sum()), dim))
        norms = np.linalg.norm(g, axis=-1)
        bad = norms == 0
    return g / norms[..., None]


def sample_walk(n: int, dim: int, rng: np.random.Generator) -> float:
    """Distance from the origin after n unit steps in uniformly random directions."""
    if dim < 2:
        raise DomainError("walks need dim >= 2", dim=dim)
    return float(np.linalg.norm(unit_vectors(rng, (n,), dim).sum(axis=0)))


def _chunk_size(n: int, dim: int) -> int:
    return max(1000, min(100_000, 4_000_000 // (n * dim)))


def _chunk_plan(samples: int, n: int, dim: int) -> List[int]:
    size = _chunk_size(n, dim)
    sizes = [size] * (samples // size)
    if samples % size:
        sizes.append(samples % size)
    return sizes


def sample_distances(n: int, dim: int, samples: int, seed: int, workers: Optional[int] = None) -> np.ndarray:
    """Final distances of ``samples`` walks; identical for every worker count."""
    if dim < 2:
        raise DomainError("walks need dim >= 2", dim=dim)
    if n < 1 or samples < 1:
        raise DomainError("need n >= 1 steps and at least one sample", n=n, samples=samples)
    sizes = _chunk_plan(samples, n, dim)
    children = np.random.SeedSequence(seed).spawn(len(sizes))

    def run(job: Tuple[int, np.random.SeedSequence]) -> np.ndarray:
        size, child = job
        rng = np.random.Generator(np.random.Philox(child))
        return np.linalg.norm(unit_vectors(rng, (size, n), dim).sum(axis=1), axis=-1)

    workers = workers or get_settings().workers
    jobs = list(zip(sizes, children))
    if workers == 1:
        parts = [run(job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, jobs))
    return np.concatenate(parts)

# =============================================================================
# ESTIMATES
# =============================================================================

def _mean_estimate(values: np.ndarray) -> Estimate:
    return Estimate(mean=float(values.mean()), stderr=float(values.std(ddof=1) / np.sqrt(values.size)))


def _format_key(value: float) -> str:
    return format(value, "g")


def estimate_moments(n: int, dim: int, s_list: Iterable[float], samples: int, seed: int,
                     cdf_points: Sequence[float] = (), workers: Optional[int] = None) -> WalkStats:
    """Sample means of d^s and of the indicator d <= x with standard errors."""
    d = sample_distances(n, dim, samples, seed, workers)
    moments = {}
    for s in s_list:
        s = float(s)
        if s < 0 and np.any(d == 0):
            raise DomainError("negative moments of an exactly zero distance", s=s)
        moments[_format_key(s)] = _mean_estimate(d ** s)
    cdfs = {}
    for x in cdf_points:
        p = float(np.mean(d <= x))
        cdfs[_format_key(float(x))] = Estimate(mean=p, stderr=float(np.sqrt(p * (1 - p) / d.size)))
    return WalkStats(n_steps=n, dim=dim, samples=samples, seed=seed, rng_algorithm=RNG_ALGORITHM,
                     moment_estimates=moments, cdf_estimates=cdfs)

# =============================================================================
# REFERENCE CDFS
# =============================================================================

def piecewise_cdf(fn: PiecewiseFn, upper: float) -> CdfFn:
    """Vectorized float evaluation of an exact piecewise CDF, clamped to [0, 1]."""
    breaks = np.array([float(b) for b in fn.breaks])
    pieces = []
    for p in fn.pieces:
        exps = np.array([e for e, _ in p.items()], dtype=float)
        coeffs = np.array([float(c) for _, c in p.items()])
        pieces.append((exps, coeffs))

    def cdf(x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        idx = np.clip(np.searchsorted(breaks, x, side="left") - 1, 0, len(pieces) - 1)
        inside = (x > breaks[0]) & (x < upper)
        for i, (exps, coeffs) in enumerate(pieces):
            mask = inside & (idx == i)
            if mask.any():
                xs = x[mask]
                out[mask] = (coeffs[None, :] * xs[:, None] ** exps[None, :]).sum(axis=1)
        out[x >= upper] = 1.0
        return np.clip(out, 0.0, 1.0)

    return cdf


def interpolated_cdf(scalar_cdf: Callable[[float], float], n: int, points: int = 81) -> CdfFn:
    """PCHIP interpolant of a scalar CDF on [0, n] on a grid containing every integer."""
    grid = np.union1d(np.linspace(0.0, float(n), points), np.arange(0, n + 1, dtype=float))
    values = np.array([scalar_cdf(float(x)) for x in grid])
    values = np.maximum.accumulate(np.clip(values, 0.0, 1.0))
    spline = PchipInterpolator(grid, values, extrapolate=False)

    def cdf(x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.where(x >= n, 1.0, 0.0)
        inside = (x > 0) & (x < n)
        out[inside] = spline(x[inside])
        return out

    return cdf


def reference_cdf(n: int, dim: int, kind: KSReference = KSReference.CLOSED,
                  spec: Optional[QuadSpec] = None, points: int = 81) -> CdfFn:
    """Exact piecewise CDF in odd dimensions, the two-step closed CDF, or quadrature."""
    nu = HalfInt.from_dim(dim)
    kind = KSReference(kind)
    if kind == KSReference.CLOSED:
        if not nu.is_integer:
            return piecewise_cdf(cdf_odd_dim(n, (nu.twice + 1) // 2), float(n))
        if n == 2:
            return interpolated_cdf(lambda x: float(cdf_p2_closed(nu, x)), n, points)
        raise UnsupportedPathError(f"no closed distribution function for n={n}, dim={dim}", n=n, dim=dim)
    if kind == KSReference.QUAD:
        spec = spec or QuadSpec(tol=1e-8)
        return interpolated_cdf(lambda x: float(cdf_quad(n, nu, mpmath.mpf(x), spec).value), n, points)
    raise DomainError("a KS test needs a reference distribution function", kind=kind.value)

# =============================================================================
# KOLMOGOROV-SMIRNOV
# =============================================================================

def ks_test(n: int, dim: int, samples: int, seed: int, cdf: CdfFn, workers: Optional[int] = None) -> KSResult:
    """Two-sided KS test; passes iff the statistic is below 1.628/sqrt(samples)."""
    d = sample_distances(n, dim, samples, seed, workers)
    result = stats.kstest(d, cdf)
    return KSResult(statistic=float(result.statistic), critical=KS_C_001 / np.sqrt(samples),
                    pvalue=float(result.pvalue), samples=samples, seed=seed)


def ks_check(n: int, dim: int, samples: int, seed: int, cdf: CdfFn,
             workers: Optional[int] = None) -> Tuple[KSResult, Optional[KSResult]]:
    """KS test with one rerun at seed+1 after a failure; the rerun then decides."""
    first = ks_test(n, dim, samples, seed, cdf, workers)
    if first.passed:
        return first, None
    logger.warning("KS statistic %.5f above %.5f for n=%d dim=%d; rerunning with seed %d",
                   first.statistic, first.critical, n, dim, seed + 1)
    return first, ks_test(n, dim, samples, seed + 1, cdf, workers)


def ks_passed(first: KSResult, rerun: Optional[KSResult]) -> bool:
    return first.passed if rerun is None else rerun.passed


def simulate(n: int, dim: int, s_list: Iterable[float], samples: int, seed: int,
             ks: KSReference = KSReference.NONE, cdf_points: Sequence[float] = (),
             workers: Optional[int] = None, spec: Optional[QuadSpec] = None) -> WalkStats:
    """Moment and CDF estimates plus an optional KS comparison."""
    walk = estimate_moments(n, dim, s_list, samples, seed, cdf_points, workers)
    if KSReference(ks) == KSReference.NONE:
        return walk
    first, rerun = ks_check(n, dim, samples, seed, reference_cdf(n, dim, ks, spec), workers)
    return walk.model_copy(update={"ks": first, "ks_rerun": rerun})
