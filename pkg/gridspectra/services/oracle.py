"""Ground truth for small grids: explicit matrices, a Jacobi eigensolver, residuals."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional, Sequence

import numpy as np
from scipy import sparse

from ..config import dense_cap
from . import closedform, shiftsolver
from .analysis import full_spectrum
from .closedform import EigenPair
from .errors import CapacityError, DomainError, SolverError
from .gridmodel import GridSpec, LaplacianKind, degree_vector, enumerate_eigen_indices

logger = logging.getLogger(__name__)

SYMMETRY_TOL = 1e-14
JACOBI_TOL = 1e-12        # off-diagonal Frobenius mass relative to ||A||_F
JACOBI_MAX_SWEEPS = 100


# ── Adjacency ───────────────────────────────────────────────

@dataclass(frozen=True)
class SparseAdjacency:
    """Undirected weighted edges, stored once each as 0-based ``rows < cols``."""

    n: int
    rows: np.ndarray
    cols: np.ndarray
    weights: np.ndarray

    def edges(self) -> list[tuple[int, int, float]]:
        """``(i, l, s_il)`` with 1-based ids and ``i < l``."""
        return [(int(i) + 1, int(l) + 1, float(w)) for i, l, w in zip(self.rows, self.cols, self.weights)]

    def entries(self) -> Iterator[tuple[int, int, float]]:
        """Both orientations of every edge, 1-based."""
        for i, l, w in self.edges():
            yield i, l, w
            yield l, i, w

    def to_csr(self) -> sparse.csr_matrix:
        rows = np.concatenate([self.rows, self.cols])
        cols = np.concatenate([self.cols, self.rows])
        data = np.concatenate([self.weights, self.weights])
        return sparse.csr_matrix((data, (rows, cols)), shape=(self.n, self.n))

    def incident_weights(self) -> np.ndarray:
        return (np.bincount(self.rows, weights=self.weights, minlength=self.n)
                + np.bincount(self.cols, weights=self.weights, minlength=self.n))


def assemble_adjacency(spec: GridSpec) -> SparseAdjacency:
    ids = np.arange(spec.n).reshape(spec.dims)
    rows, cols, weights = [], [], []
    for j, w_j in enumerate(spec.weights):
        lower = [slice(None)] * spec.d
        upper = [slice(None)] * spec.d
        lower[j] = slice(None, -1)
        upper[j] = slice(1, None)
        left = ids[tuple(lower)].ravel()
        rows.append(left)
        cols.append(ids[tuple(upper)].ravel())
        weights.append(np.full(left.size, w_j))
    rows_a = np.concatenate(rows)
    cols_a = np.concatenate(cols)
    weights_a = np.concatenate(weights)
    order = np.lexsort((cols_a, rows_a))
    return SparseAdjacency(spec.n, rows_a[order], cols_a[order], weights_a[order])


@lru_cache(maxsize=8)
def _adjacency_operator(spec: GridSpec) -> sparse.csr_matrix:
    return assemble_adjacency(spec).to_csr()


@lru_cache(maxsize=8)
def _degrees(spec: GridSpec) -> np.ndarray:
    return degree_vector(spec)


# ── Dense matrices ──────────────────────────────────────────

@dataclass(frozen=True)
class DenseSymMatrix:
    values: np.ndarray
    kind: LaplacianKind
    conjugation: Optional[np.ndarray] = None   # D^{1/2} diagonal for the random-walk kind

    def __post_init__(self) -> None:
        if self.values.ndim != 2 or self.values.shape[0] != self.values.shape[1]:
            raise DomainError(f"expected a square matrix, got shape {self.values.shape}")
        asym = float(np.max(np.abs(self.values - self.values.T))) if self.values.size else 0.0
        if asym > SYMMETRY_TOL:
            raise DomainError(f"matrix is not symmetric (max |a_il - a_li| = {asym:.3e})")

    @property
    def n(self) -> int:
        return self.values.shape[0]


def _check_cap(spec: GridSpec, cap: Optional[int]) -> None:
    limit = dense_cap() if cap is None else cap
    if spec.n > limit:
        raise CapacityError(
            f"grid {list(spec.dims)} has {spec.n} nodes, above the dense cap of {limit} "
            "(raise GRIDSPECTRA_DENSE_CAP to override)"
        )


def assemble_laplacian(spec: GridSpec, kind: LaplacianKind, cap: Optional[int] = None) -> DenseSymMatrix:
    """Explicit Laplacian; the random-walk kind comes back as its symmetric twin."""
    _check_cap(spec, cap)
    adjacency = _adjacency_operator(spec).toarray()
    degrees = _degrees(spec)
    if kind is LaplacianKind.COMBINATORIAL:
        return DenseSymMatrix(np.diag(degrees) - adjacency, kind)
    if kind is LaplacianKind.UNORIENTED:
        return DenseSymMatrix(np.diag(degrees) + adjacency, kind)
    inv_sqrt = 1.0 / np.sqrt(degrees)
    values = np.eye(spec.n) - inv_sqrt[:, None] * adjacency * inv_sqrt[None, :]
    values = 0.5 * (values + values.T)
    conjugation = np.sqrt(degrees) if kind is LaplacianKind.RANDOM_WALK else None
    return DenseSymMatrix(values, kind, conjugation)


def random_walk_matrix(spec: GridSpec, cap: Optional[int] = None) -> np.ndarray:
    """Explicit ``I - S D^{-1}`` (not symmetric)."""
    _check_cap(spec, cap)
    adjacency = _adjacency_operator(spec).toarray()
    return np.eye(spec.n) - adjacency / _degrees(spec)[None, :]


# ── Jacobi eigensolver ──────────────────────────────────────

def _offdiag_mass(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def _rotate(a: np.ndarray, p: int, q: int) -> None:
    apq = a[p, q]
    theta = (a[q, q] - a[p, p]) / (2.0 * apq)
    if abs(theta) > 1e150:
        t = 1.0 / (2.0 * theta)
    else:
        t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = t * c

    col_p = a[:, p].copy()
    col_q = a[:, q].copy()
    a[:, p] = c * col_p - s * col_q
    a[:, q] = s * col_p + c * col_q
    row_p = a[p, :].copy()
    row_q = a[q, :].copy()
    a[p, :] = c * row_p - s * row_q
    a[q, :] = s * row_p + c * row_q
    a[p, q] = a[q, p] = 0.0


def dense_symmetric_eigenvalues(m: DenseSymMatrix) -> np.ndarray:
    """Ascending eigenvalues by cyclic Jacobi rotations on a private copy."""
    a = np.array(m.values, dtype=float, copy=True)
    n = a.shape[0]
    scale = float(np.linalg.norm(a))
    if n < 2 or scale == 0.0:
        return np.sort(np.diag(a))
    threshold = JACOBI_TOL * scale

    off = _offdiag_mass(a)
    sweeps = 0
    while off >= threshold:
        if sweeps == JACOBI_MAX_SWEEPS:
            raise SolverError(
                f"Jacobi eigensolver did not converge on a {n}x{n} matrix",
                best_residual=off, iterations=sweeps,
            )
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                if a[p, q] != 0.0:
                    _rotate(a, p, q)
        off = _offdiag_mass(a)
        logger.debug("Jacobi sweep %d: off-diagonal mass %.3e", sweeps, off)
    logger.info("Jacobi converged on %dx%d after %d sweeps", n, n, sweeps)
    return np.sort(np.diag(a))


# ── Residuals and diagnostics ───────────────────────────────

def apply_operator(spec: GridSpec, kind: LaplacianKind, vector: Sequence[float]) -> np.ndarray:
    """``A v`` for the kind's operator using sparse products only."""
    v = np.asarray(vector, dtype=float)
    if v.shape != (spec.n,):
        raise DomainError(f"vector has shape {v.shape}, grid has {spec.n} nodes")
    adjacency = _adjacency_operator(spec)
    degrees = _degrees(spec)
    if kind is LaplacianKind.COMBINATORIAL:
        return degrees * v - adjacency @ v
    if kind is LaplacianKind.UNORIENTED:
        return degrees * v + adjacency @ v
    if kind is LaplacianKind.NORMALIZED:
        inv_sqrt = 1.0 / np.sqrt(degrees)
        return v - inv_sqrt * (adjacency @ (inv_sqrt * v))
    return v - adjacency @ (v / degrees)


def residual_norm(spec: GridSpec, kind: LaplacianKind, pair: EigenPair) -> float:
    v = np.asarray(pair.vector, dtype=float)
    residual = apply_operator(spec, kind, v) - pair.eigenvalue * v
    scale = max(1.0, float(np.max(np.abs(v))))
    return float(np.max(np.abs(residual))) / scale


def gram_offdiag_max(vectors: Sequence[Sequence[float]]) -> float:
    """Largest |cosine| between two distinct vectors of the family."""
    if len(vectors) < 2:
        return 0.0
    m = np.vstack([np.asarray(v, dtype=float) for v in vectors])
    norms = np.linalg.norm(m, axis=1)
    if np.any(norms == 0.0):
        raise DomainError(f"vector {int(np.argmin(norms))} of the family is zero")
    gram = (m @ m.T) / np.outer(norms, norms)
    np.fill_diagonal(gram, 0.0)
    return float(np.max(np.abs(gram)))


@dataclass(frozen=True)
class SpectrumComparison:
    analytic: tuple[float, ...]
    oracle: tuple[float, ...]
    max_deviation: float
    passed: bool


def spectrum_compare(
    spec: GridSpec,
    kind: LaplacianKind,
    tol: float,
    cap: Optional[int] = None,
    analytic: Optional[Sequence[float]] = None,
) -> SpectrumComparison:
    """Sorted analytic eigenvalues against the Jacobi oracle."""
    if not tol > 0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    _check_cap(spec, cap)
    if analytic is None:
        analytic = full_spectrum(spec, kind).values
    ours = np.sort(np.asarray(analytic, dtype=float))
    reference = dense_symmetric_eigenvalues(assemble_laplacian(spec, kind, cap))
    deviation = float(np.max(np.abs(ours - reference)))
    return SpectrumComparison(tuple(ours.tolist()), tuple(reference.tolist()), deviation, deviation <= tol)


# ── Full verification ───────────────────────────────────────

def gram_tolerance(spec: GridSpec, tol: float) -> float:
    """Orthogonality bound: cosines between eigenvectors may grow with the node count."""
    return tol * spec.n


@dataclass(frozen=True)
class VerificationReport:
    spec: GridSpec
    kind: LaplacianKind
    tol: float
    max_deviation: Optional[float]
    max_residual: float
    gram_max: Optional[float]
    passed: bool

    @property
    def gram_tol(self) -> float:
        return gram_tolerance(self.spec, self.tol)

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "kind": self.kind.value,
            "tol": self.tol,
            "gram_tol": self.gram_tol,
            "max_deviation": self.max_deviation,
            "max_residual": self.max_residual,
            "gram_max": self.gram_max,
            "passed": self.passed,
        }


def all_eigenpairs(spec: GridSpec, kind: LaplacianKind, threads: Optional[int] = None) -> Iterator[EigenPair]:
    """Every eigenpair of the kind, in enumeration order."""
    if kind.uses_shifts:
        for solution in shiftsolver.solve_all(spec, threads):
            yield shiftsolver.eigenpair(kind, solution.z, spec, solution=solution)
    else:
        for z in enumerate_eigen_indices(spec):
            yield closedform.eigenpair(kind, z, spec)


def verify(
    spec: GridSpec,
    kind: LaplacianKind,
    tol: float,
    cap: Optional[int] = None,
    threads: Optional[int] = None,
) -> VerificationReport:
    """Residuals for all eigenpairs, plus spectrum and Gram checks when dense is allowed."""
    if not tol > 0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    limit = dense_cap() if cap is None else cap
    dense = spec.n <= limit
    if not dense:
        logger.info("n=%d above dense cap %d: residual checks only", spec.n, limit)

    values, vectors = [], []
    max_residual = 0.0
    for pair in all_eigenpairs(spec, kind, threads):
        values.append(pair.eigenvalue)
        max_residual = max(max_residual, residual_norm(spec, kind, pair))
        if dense:
            # random-walk vectors are orthogonal in the degree-weighted inner product
            vectors.append(pair.vector / np.sqrt(_degrees(spec)) if kind is LaplacianKind.RANDOM_WALK else pair.vector)

    max_deviation = gram_max = None
    if dense:
        max_deviation = spectrum_compare(spec, kind, tol, limit, analytic=values).max_deviation
        gram_max = gram_offdiag_max(vectors)

    passed = max_residual <= tol
    if dense:
        passed = passed and max_deviation <= tol and gram_max <= gram_tolerance(spec, tol)
    logger.info("verify %s dims=%s: deviation=%s residual=%.3e gram=%s passed=%s",
                kind.value, list(spec.dims), max_deviation, max_residual, gram_max, passed)
    return VerificationReport(spec, kind, tol, max_deviation, max_residual, gram_max, passed)
