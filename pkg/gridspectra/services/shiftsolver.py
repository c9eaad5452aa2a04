"""Normalized and random-walk eigenpairs via the per-index shift equations.

For an eigen index ``z`` the eigenvalue ``lam`` and the shift vector
``delta`` solve

    lam = 1 + sum_j (w_j / w_sum) * cos(theta_j)
    (lam - 1) * cos(delta_l) = cos(delta_l - theta_l)        for every l

with ``theta_j = (z_j*pi - 2*delta_j) / (n_j - 1)``.  The second equation
carries no weights, so for a trial ``lam`` every ``delta_l`` is a 1-d root;
bisection on ``lam`` then closes the first equation.

Both roots are bracketed analytically.  At ``lam = 2`` the shift equation is
solved by ``delta = z*pi/(2n)`` and at ``lam = 0`` by
``delta = (z+1)*pi/(2n) - pi/2``; in between the matching ``theta`` stays in
``[z*pi/n, (z+1)*pi/n]``, which in turn pins ``lam`` between
``1 + sum_j p_j cos((z_j+1)*pi/n_j)`` and ``1 + sum_j p_j cos(z_j*pi/n_j)``.
"""
from __future__ import annotations

import asyncio
import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import optimize

from ..config import resolve_threads
from .closedform import EigenPair, normalized
from .errors import DomainError, SolverError
from .gridmodel import (
    EigenIndex,
    GridSpec,
    LaplacianKind,
    check_canonical,
    check_node_vector,
    degree_vector,
    enumerate_eigen_indices,
    node_degree,
    tensor_product,
)

logger = logging.getLogger(__name__)

SHIFT_TOL = 1e-12        # bisection tolerance on lambda
DELTA_XTOL = 1e-15       # bisection tolerance on each shift
SHIFT_MAX_ITER = 200
BRACKET_EPS = 1e-9       # keeps every bracket strictly inside (-pi/2, pi/2)
RESIDUAL_TOL = 1e-10     # accepted residual of the shift system
RANGE_SLACK = 1e-10

_SNAP = 1e-14            # endpoint values this small already count as roots
_ZERO_SHIFT_TOL = 1e-13


@dataclass(frozen=True)
class ShiftSolution:
    z: EigenIndex
    eigenvalue: float
    shifts: tuple[float, ...]
    iterations: int
    residual: float


# ── Shift equation ──────────────────────────────────────────

def _theta(delta: float, z_l: int, n_l: int) -> float:
    return (z_l * math.pi - 2.0 * delta) / (n_l - 1)


def _shift_equation(delta: float, mu: float, z_l: int, n_l: int) -> float:
    return mu * math.cos(delta) - math.cos(delta - (z_l * math.pi - 2.0 * delta) / (n_l - 1))


def delta_bracket(z_l: int, n_l: int) -> tuple[float, float]:
    """Interval that holds the shift of ``z_l`` for every lambda in [0, 2]."""
    lo = (z_l + 1) * math.pi / (2 * n_l) - math.pi / 2
    hi = z_l * math.pi / (2 * n_l)
    return max(lo, -math.pi / 2 + BRACKET_EPS), min(hi, math.pi / 2 - BRACKET_EPS)


def _solve_delta(mu: float, z_l: int, n_l: int) -> float:
    lo, hi = delta_bracket(z_l, n_l)
    f_lo = _shift_equation(lo, mu, z_l, n_l)
    if abs(f_lo) <= _SNAP:
        return lo
    f_hi = _shift_equation(hi, mu, z_l, n_l)
    if abs(f_hi) <= _SNAP:
        return hi
    if (f_lo > 0) == (f_hi > 0):
        raise SolverError(
            f"shift equation for z_l={z_l}, n_l={n_l} has no sign change "
            f"on [{lo:.6g}, {hi:.6g}] at lambda={mu + 1.0:.17g}",
            best_residual=min(abs(f_lo), abs(f_hi)),
        )
    root, info = optimize.bisect(
        _shift_equation, lo, hi, args=(mu, z_l, n_l),
        xtol=DELTA_XTOL, maxiter=SHIFT_MAX_ITER, full_output=True, disp=False,
    )
    if not info.converged:
        raise SolverError(
            f"shift bisection for z_l={z_l}, n_l={n_l} did not converge",
            best_residual=abs(_shift_equation(root, mu, z_l, n_l)),
            iterations=info.iterations,
        )
    return root


def delta_from_lambda(lam: float, z_l: int, n_l: int) -> float:
    """Shift of one dimension for a given eigenvalue."""
    if n_l < 2:
        raise DomainError(f"n_l must be >= 2, got {n_l}")
    if not 0 <= z_l <= n_l - 1:
        raise DomainError(f"z_l={z_l} is outside [0, {n_l - 1}]")
    if not -RANGE_SLACK <= lam <= 2.0 + RANGE_SLACK:
        raise DomainError(f"lambda={lam} is outside [0, 2]")
    return _solve_delta(lam - 1.0, z_l, n_l)


# ── Eigenvalue / shift system ───────────────────────────────

def _probabilities(spec: GridSpec) -> list[float]:
    total = spec.weight_sum
    return [w_j / total for w_j in spec.weights]


def _lambda_prime(lam: float, index: EigenIndex, spec: GridSpec, probs: Sequence[float]):
    mu = lam - 1.0
    deltas = []
    total = 0.0
    for z_j, n_j, p_j in zip(index, spec.dims, probs):
        delta = _solve_delta(mu, z_j, n_j)
        deltas.append(delta)
        total += p_j * math.cos(_theta(delta, z_j, n_j))
    return 1.0 + total, deltas


def _fixed_point_gap(lam: float, index: EigenIndex, spec: GridSpec, probs: Sequence[float]) -> float:
    return lam - _lambda_prime(lam, index, spec, probs)[0]


def shift_system_residuals(
    z: Sequence[int], spec: GridSpec, lam: float, shifts: Sequence[float]
) -> tuple[float, float]:
    """(eigenvalue-equation residual, worst per-dimension shift residual)."""
    index = check_canonical(z, spec)
    probs = _probabilities(spec)
    thetas = [_theta(d_j, z_j, n_j) for d_j, z_j, n_j in zip(shifts, index, spec.dims)]
    eig_res = abs(lam - (1.0 + math.fsum(p * math.cos(t) for p, t in zip(probs, thetas))))
    shift_res = max(
        abs((lam - 1.0) * math.cos(d_j) - math.cos(d_j - t_j)) for d_j, t_j in zip(shifts, thetas)
    )
    return eig_res, shift_res


def _zero_shift_eigenvalue(index: EigenIndex, spec: GridSpec, probs: Sequence[float]) -> Optional[float]:
    # delta = 0 solves the system exactly when every cos(z_j*pi/(n_j-1)) agrees
    cosines = [math.cos(z_j * math.pi / (n_j - 1)) for z_j, n_j in zip(index, spec.dims)]
    mu = math.fsum(p * c for p, c in zip(probs, cosines))
    if all(abs(mu - c) <= _ZERO_SHIFT_TOL for c in cosines):
        return 1.0 + mu
    return None


def _finish(index: EigenIndex, spec: GridSpec, lam: float, shifts: tuple[float, ...], iterations: int) -> ShiftSolution:
    eig_res, shift_res = shift_system_residuals(index, spec, lam, shifts)
    residual = max(eig_res, shift_res)
    if residual > RESIDUAL_TOL:
        raise SolverError(
            "shift system residual above tolerance",
            z=index, best_residual=residual, iterations=iterations,
        )
    if not -RANGE_SLACK <= lam <= 2.0 + RANGE_SLACK:
        raise SolverError(f"eigenvalue {lam!r} outside [0, 2]", z=index, iterations=iterations)
    logger.debug("z=%s lambda=%.17g shifts=%s iterations=%d residual=%.2e",
                 list(index), lam, list(shifts), iterations, residual)
    return ShiftSolution(index, lam, shifts, iterations, residual)


def solve_eigenvalue_and_shifts(z: Sequence[int], spec: GridSpec) -> ShiftSolution:
    """Eigenvalue and shift vector of the normalized Laplacian for index ``z``."""
    index = check_canonical(z, spec)
    if spec.d == 1:
        lam = onedim_normalized_eigenvalue(index[0], spec.dims[0])
        return _finish(index, spec, lam, (0.0,), 0)

    probs = _probabilities(spec)
    trivial = _zero_shift_eigenvalue(index, spec, probs)
    if trivial is not None:
        return _finish(index, spec, trivial, (0.0,) * spec.d, 0)

    # combinatorial analogue is the upper end of the bracket
    hi = min(2.0, 1.0 + math.fsum(p * math.cos(z_j * math.pi / n_j)
                                  for p, z_j, n_j in zip(probs, index, spec.dims)))
    lo = max(0.0, 1.0 + math.fsum(p * math.cos((z_j + 1) * math.pi / n_j)
                                  for p, z_j, n_j in zip(probs, index, spec.dims)))
    try:
        g_lo = _fixed_point_gap(lo, index, spec, probs)
        g_hi = _fixed_point_gap(hi, index, spec, probs)
        iterations = 0
        if abs(g_lo) <= _SNAP:
            root = lo
        elif abs(g_hi) <= _SNAP:
            root = hi
        elif (g_lo > 0) == (g_hi > 0):
            raise SolverError(
                f"eigenvalue bracket [{lo:.17g}, {hi:.17g}] has no sign change",
                z=index, best_residual=min(abs(g_lo), abs(g_hi)),
            )
        else:
            root, info = optimize.bisect(
                _fixed_point_gap, lo, hi, args=(index, spec, probs),
                xtol=SHIFT_TOL, maxiter=SHIFT_MAX_ITER, full_output=True, disp=False,
            )
            iterations = info.iterations
            if not info.converged:
                raise SolverError(
                    "eigenvalue bisection did not converge",
                    z=index,
                    best_residual=abs(_fixed_point_gap(root, index, spec, probs)),
                    iterations=iterations,
                )
        _, deltas = _lambda_prime(root, index, spec, probs)
    except SolverError as exc:
        raise exc.with_index(index) from exc
    return _finish(index, spec, root, tuple(deltas), iterations)


async def _solve_all_async(indices: list[EigenIndex], spec: GridSpec, workers: int) -> list[ShiftSolution]:
    gate = asyncio.Semaphore(workers)

    async def _solve(z: EigenIndex) -> ShiftSolution:
        async with gate:
            return await asyncio.to_thread(solve_eigenvalue_and_shifts, z, spec)

    return await asyncio.gather(*[_solve(z) for z in indices])


def solve_all(spec: GridSpec, threads: Optional[int] = None) -> list[ShiftSolution]:
    """Shift solutions for every eigen index, in enumeration order."""
    indices = list(enumerate_eigen_indices(spec))
    workers = resolve_threads(threads)
    logger.info("solving %d shift systems for dims=%s with %d workers",
                len(indices), list(spec.dims), workers)
    if workers > 1 and len(indices) > 1:
        try:
            asyncio.get_running_loop()
        except RuntimeError:
            return list(asyncio.run(_solve_all_async(indices, spec, workers)))
        logger.warning("event loop already running; solving sequentially")
    return [solve_eigenvalue_and_shifts(z, spec) for z in indices]


# ── Eigenvectors ────────────────────────────────────────────

def _check_shifts(shifts: Sequence[float], spec: GridSpec) -> tuple[float, ...]:
    values = tuple(float(s) for s in shifts)
    if len(values) != spec.d:
        raise DomainError(f"shift vector has {len(values)} entries, grid has {spec.d}")
    if any(not abs(s) < math.pi for s in values):
        raise DomainError(f"shifts {list(values)} must lie in (-pi, pi)")
    return values


def shifted_cosine_vector(z: Sequence[int], shifts: Sequence[float], spec: GridSpec) -> np.ndarray:
    """``prod_j (-1)^x_j cos(theta_j (x_j - 1) + delta_j)``, i.e. ``D^{-1/2} v``."""
    index = check_canonical(z, spec)
    deltas = _check_shifts(shifts, spec)
    factors = []
    for z_j, d_j, n_j in zip(index, deltas, spec.dims):
        x = np.arange(1, n_j + 1)
        alternating = np.where(x % 2 == 0, 1.0, -1.0)
        factors.append(alternating * np.cos(_theta(d_j, z_j, n_j) * (x - 1) + d_j))
    return tensor_product(factors)


def normalized_eigenvector(
    z: Sequence[int], shifts: Sequence[float], spec: GridSpec, normalize: bool = False
) -> np.ndarray:
    vector = np.sqrt(degree_vector(spec)) * shifted_cosine_vector(z, shifts, spec)
    return normalized(vector) if normalize else vector


def randomwalk_eigenvector(
    z: Sequence[int], shifts: Sequence[float], spec: GridSpec, normalize: bool = False
) -> np.ndarray:
    vector = np.sqrt(degree_vector(spec)) * normalized_eigenvector(z, shifts, spec)
    return normalized(vector) if normalize else vector


def normalized_component(
    z: Sequence[int], shifts: Sequence[float], x: Sequence[int], spec: GridSpec
) -> float:
    """Single entry of a normalized-Laplacian eigenvector."""
    index = check_canonical(z, spec)
    deltas = _check_shifts(shifts, spec)
    coords = check_node_vector(x, spec)
    value = math.sqrt(node_degree(coords, spec))
    for z_j, d_j, x_j, n_j in zip(index, deltas, coords, spec.dims):
        value *= math.cos(_theta(d_j, z_j, n_j) * (x_j - 1) + d_j)
        if x_j % 2:
            value = -value
    return value


# ── One-dimensional special case ────────────────────────────

def onedim_normalized_eigenvalue(z: int, n: int) -> float:
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    if not 0 <= z <= n - 1:
        raise DomainError(f"z={z} is outside [0, {n - 1}]")
    return 2.0 * math.cos(math.pi * z / (2 * (n - 1))) ** 2


def onedim_normalized_eigenpair(z: int, n: int) -> tuple[float, np.ndarray]:
    """Path-graph eigenpair with the end nodes divided by sqrt(2)."""
    lam = onedim_normalized_eigenvalue(z, n)
    x = np.arange(1, n + 1)
    alternating = np.where(x % 2 == 0, 1.0, -1.0)
    vector = alternating * np.cos(math.pi * z / (n - 1) * (x - 1))
    vector[0] /= math.sqrt(2.0)
    vector[-1] /= math.sqrt(2.0)
    return lam, vector


def eigenpair(
    kind: LaplacianKind,
    z: Sequence[int],
    spec: GridSpec,
    normalize: bool = False,
    solution: Optional[ShiftSolution] = None,
) -> EigenPair:
    if not kind.uses_shifts:
        raise DomainError(f"{kind.value} eigenpairs are closed-form; use closedform.eigenpair")
    if solution is None:
        solution = solve_eigenvalue_and_shifts(z, spec)
    if kind is LaplacianKind.NORMALIZED:
        vector = normalized_eigenvector(solution.z, solution.shifts, spec, normalize)
    else:
        vector = randomwalk_eigenvector(solution.z, solution.shifts, spec, normalize)
    return EigenPair(kind, solution.z, solution.eigenvalue, vector, solution.shifts)
