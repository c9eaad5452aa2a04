"""Eigenvalue distribution studies: spectra, histograms, CDFs, uniformity."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import stats

from . import shiftsolver
from .closedform import comb_spectrum_values
from .errors import DomainError
from .gridmodel import EigenIndex, GridSpec, LaplacianKind, enumerate_eigen_indices, tensor_sum

logger = logging.getLogger(__name__)

RANGE_SLACK = 1e-9
LIMIT_SAMPLES = 201
_EXACT_QUADRATURE_POINTS = 4_000_000   # above this the limit CDF is convolved on bins
_CONVOLUTION_BINS = 4096               # per unit-dimension span [0, 4]

CdfSamples = list[tuple[float, float]]


@dataclass(frozen=True)
class SpectrumSummary:
    spec: GridSpec
    kind: LaplacianKind
    values: tuple[float, ...]
    fiedler: float
    max: float

    @classmethod
    def from_values(cls, spec: GridSpec, kind: LaplacianKind, values: Sequence[float]) -> "SpectrumSummary":
        ordered = tuple(sorted(float(v) for v in values))
        if len(ordered) != spec.n:
            raise DomainError(f"expected {spec.n} eigenvalues, got {len(ordered)}")
        return cls(spec, kind, ordered, ordered[1], ordered[-1])


@dataclass(frozen=True)
class EigenRow:
    index: int
    z: EigenIndex
    eigenvalue: float
    shifts: Optional[tuple[float, ...]] = None


@dataclass(frozen=True)
class PairedRow:
    z: EigenIndex
    combinatorial: float
    normalized: float


@dataclass(frozen=True)
class ShiftProfileRow:
    layers: int
    z: EigenIndex
    eigenvalue: float
    delta_first: float
    delta_rest: Optional[float]


@dataclass(frozen=True)
class DistributionReport:
    summary: SpectrumSummary
    range_max: float
    counts: tuple[int, ...]
    edges: tuple[float, ...]
    cdf: CdfSamples
    ks_statistic: float
    paired: list[PairedRow] = field(default_factory=list)


# ── Spectra ─────────────────────────────────────────────────

def eigen_table(spec: GridSpec, kind: LaplacianKind, threads: Optional[int] = None) -> list[EigenRow]:
    """One row per eigen index, in enumeration order."""
    if kind.uses_shifts:
        return [
            EigenRow(k + 1, s.z, s.eigenvalue, s.shifts)
            for k, s in enumerate(shiftsolver.solve_all(spec, threads))
        ]
    values = comb_spectrum_values(spec)
    return [
        EigenRow(k + 1, z, float(lam))
        for k, (z, lam) in enumerate(zip(enumerate_eigen_indices(spec), values))
    ]


def full_spectrum(spec: GridSpec, kind: LaplacianKind, threads: Optional[int] = None) -> SpectrumSummary:
    if kind.uses_shifts:
        values = [s.eigenvalue for s in shiftsolver.solve_all(spec, threads)]
    else:
        values = comb_spectrum_values(spec).tolist()
    return SpectrumSummary.from_values(spec, kind, values)


def default_range(spec: GridSpec, kind: LaplacianKind) -> float:
    return 2.0 if kind.uses_shifts else 4.0 * spec.weight_sum


# ── Histograms and CDFs ─────────────────────────────────────

def _checked_values(values: Sequence[float], range_max: float) -> np.ndarray:
    if not range_max > 0:
        raise DomainError(f"range_max must be positive, got {range_max}")
    arr = np.asarray(values, dtype=float)
    if arr.size and (arr.min() < -RANGE_SLACK or arr.max() > range_max + RANGE_SLACK):
        raise DomainError(
            f"eigenvalues span [{arr.min():.17g}, {arr.max():.17g}], outside [0, {range_max}]"
        )
    return np.clip(arr, 0.0, range_max)


def histogram_edges(bins: int, range_max: float) -> np.ndarray:
    return np.linspace(0.0, range_max, bins + 1)


def eigenvalue_histogram(values: Sequence[float], bins: int, range_max: float) -> np.ndarray:
    """Counts over equal-width bins on [0, range_max]; the last bin is closed."""
    if bins < 1:
        raise DomainError(f"bins must be >= 1, got {bins}")
    arr = _checked_values(values, range_max)
    counts, _ = np.histogram(arr, bins=bins, range=(0.0, range_max))
    return counts


def empirical_cdf(values: Sequence[float]) -> CdfSamples:
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        return []
    points, counts = np.unique(arr, return_counts=True)
    fractions = np.cumsum(counts) / arr.size
    fractions[-1] = 1.0
    return list(zip(points.tolist(), fractions.tolist()))


def _axis_table(resolution: int) -> np.ndarray:
    t = (np.arange(resolution) + 0.5) / resolution
    return 4.0 * np.sin(np.pi * t / 2.0) ** 2


def _limit_cdf_at(d: int, resolution: int, points: np.ndarray) -> np.ndarray:
    """Measure of ``{t in [0,1]^d : sum_j 4 sin^2(pi t_j / 2) <= v}`` at each point."""
    if d < 1:
        raise DomainError(f"d must be >= 1, got {d}")
    if resolution < 2:
        raise DomainError(f"resolution must be >= 2, got {resolution}")
    table = _axis_table(resolution)
    if resolution ** d <= _EXACT_QUADRATURE_POINTS:
        sums = np.sort(tensor_sum([table] * d))
        return np.searchsorted(sums, points, side="right") / sums.size

    width = 4.0 / _CONVOLUTION_BINS
    mass = np.histogram(table, bins=_CONVOLUTION_BINS, range=(0.0, 4.0))[0] / resolution
    dist = mass
    for _ in range(d - 1):
        dist = np.convolve(dist, mass)
    cumulative = np.cumsum(dist)
    cumulative /= cumulative[-1]
    centers = (np.arange(dist.size) + 0.5 * d) * width
    idx = np.searchsorted(centers, points, side="right")
    return np.where(idx > 0, cumulative[np.maximum(idx - 1, 0)], 0.0)


def limit_cdf_combinatorial(d: int, resolution: int, samples: int = LIMIT_SAMPLES) -> CdfSamples:
    """Large-grid eigenvalue CDF of the unweighted combinatorial Laplacian on [0, 4d]."""
    if samples < 2:
        raise DomainError(f"samples must be >= 2, got {samples}")
    grid = np.linspace(0.0, 4.0 * d, samples)
    return list(zip(grid.tolist(), _limit_cdf_at(d, resolution, grid).tolist()))


def limit_cdf_normalized(d: int, resolution: int, samples: int = LIMIT_SAMPLES) -> CdfSamples:
    """Large-grid eigenvalue CDF of the normalized Laplacian on [0, 2].

    Shifts vanish as the layer counts grow, so the eigenvalue tends to
    ``2 - S/(2d)`` with ``S`` the combinatorial sum, and by the ``t -> 1-t``
    symmetry of that sum ``F_norm(v) = F_comb(2 d v)``.
    """
    if samples < 2:
        raise DomainError(f"samples must be >= 2, got {samples}")
    grid = np.linspace(0.0, 2.0, samples)
    return list(zip(grid.tolist(), _limit_cdf_at(d, resolution, 2.0 * d * grid).tolist()))


def cdf_distance(
    values: Sequence[float], limit: Callable[[np.ndarray], np.ndarray]
) -> float:
    """Sup distance between the empirical CDF of ``values`` and ``limit``.

    Both one-sided limits of the empirical step function are compared at
    every jump.
    """
    arr = np.sort(np.asarray(values, dtype=float))
    if arr.size == 0:
        raise DomainError("cannot compare an empty sample")
    points, counts = np.unique(arr, return_counts=True)
    above = np.cumsum(counts) / arr.size
    below = above - counts / arr.size
    reference = limit(points)
    return float(max(np.max(np.abs(above - reference)), np.max(np.abs(below - reference))))


def combinatorial_limit(d: int, resolution: int, weight: float = 1.0) -> Callable[[np.ndarray], np.ndarray]:
    """Limit CDF of a grid whose directions all carry ``weight``, as a callable."""
    return lambda points: _limit_cdf_at(d, resolution, np.asarray(points, dtype=float) / weight)


def normalized_limit(d: int, resolution: int) -> Callable[[np.ndarray], np.ndarray]:
    return lambda points: _limit_cdf_at(d, resolution, 2.0 * d * np.asarray(points, dtype=float))


def ks_uniformity(values: Sequence[float], range_max: float) -> float:
    """Kolmogorov-Smirnov distance to uniform[0, range_max]."""
    arr = _checked_values(values, range_max)
    if arr.size == 0:
        raise DomainError("cannot compute a KS statistic of an empty sample")
    return float(stats.kstest(arr, "uniform", args=(0.0, range_max)).statistic)


# ── Paired and profile studies ──────────────────────────────

def paired_spectra(spec: GridSpec, threads: Optional[int] = None) -> list[PairedRow]:
    """Combinatorial and normalized eigenvalues matched with the normalized index reversed."""
    comb = comb_spectrum_values(spec)
    solutions = shiftsolver.solve_all(spec, threads)
    last = spec.n - 1
    # reversing every coordinate of z reverses the lexicographic position
    return [
        PairedRow(z, float(comb[k]), solutions[last - k].eigenvalue)
        for k, z in enumerate(enumerate_eigen_indices(spec))
    ]


PROFILE_PATTERNS = ("fiedler", "middle")


def _profile_index(pattern: str, d: int, layers: int) -> EigenIndex:
    if pattern == "fiedler":
        return (layers - 2,) + (layers - 1,) * (d - 1)
    return (layers // 4,) + (layers // 2,) * (d - 1)


def shift_profile(d: int, layers: Sequence[int], pattern: str = "fiedler") -> list[ShiftProfileRow]:
    """Shifts of one eigen index pattern on regular grids ``n^d`` as ``n`` grows."""
    if pattern not in PROFILE_PATTERNS:
        raise DomainError(f"unknown pattern {pattern!r}; expected one of {', '.join(PROFILE_PATTERNS)}")
    if d < 1:
        raise DomainError(f"d must be >= 1, got {d}")
    rows = []
    for n in layers:
        spec = GridSpec.unweighted([n] * d)
        z = _profile_index(pattern, d, n)
        solution = shiftsolver.solve_eigenvalue_and_shifts(z, spec)
        rows.append(ShiftProfileRow(
            n, solution.z, solution.eigenvalue, solution.shifts[0],
            solution.shifts[1] if d > 1 else None,
        ))
        logger.debug("shift profile n=%d z=%s delta=%s", n, list(z), list(solution.shifts))
    return rows


# ── Combined report ─────────────────────────────────────────

def analyze(
    spec: GridSpec,
    kind: LaplacianKind,
    bins: int = 50,
    threads: Optional[int] = None,
    paired: bool = False,
) -> DistributionReport:
    summary = full_spectrum(spec, kind, threads)
    range_max = default_range(spec, kind)
    counts = eigenvalue_histogram(summary.values, bins, range_max)
    report = DistributionReport(
        summary=summary,
        range_max=range_max,
        counts=tuple(int(c) for c in counts),
        edges=tuple(histogram_edges(bins, range_max).tolist()),
        cdf=empirical_cdf(summary.values),
        ks_statistic=ks_uniformity(summary.values, range_max),
        paired=paired_spectra(spec, threads) if paired else [],
    )
    logger.info("analyzed %s dims=%s: ks=%.4f fiedler=%.6g",
                kind.value, list(spec.dims), report.ks_statistic, summary.fiedler)
    return report
