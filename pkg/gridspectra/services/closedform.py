"""Closed-form eigenpairs of combinatorial and unoriented grid Laplacians."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError
from .gridmodel import (
    EigenIndex,
    GridSpec,
    LaplacianKind,
    canonicalize_eigen_index,
    check_canonical,
    check_node_vector,
    tensor_product,
    tensor_sum,
)


@dataclass(frozen=True)
class EigenPair:
    kind: LaplacianKind
    z: EigenIndex
    eigenvalue: float
    vector: np.ndarray
    shifts: Optional[tuple[float, ...]] = None


def normalized(vector: np.ndarray) -> np.ndarray:
    norm = float(np.linalg.norm(vector))
    if norm == 0.0:
        raise DomainError("cannot normalize the zero vector")
    return vector / norm


# ── Eigenvalues ─────────────────────────────────────────────

def comb_eigenvalue(z: Sequence[int], spec: GridSpec) -> float:
    index = check_canonical(z, spec)
    return math.fsum(
        2.0 * w_j * (1.0 - math.cos(math.pi * z_j / n_j))
        for z_j, n_j, w_j in zip(index, spec.dims, spec.weights)
    )


def comb_eigenvalue_sine_form(z: Sequence[int], spec: GridSpec) -> float:
    index = check_canonical(z, spec)
    return math.fsum(
        4.0 * w_j * math.sin(math.pi * z_j / (2 * n_j)) ** 2
        for z_j, n_j, w_j in zip(index, spec.dims, spec.weights)
    )


def _value_table(n_j: int, w_j: float) -> np.ndarray:
    return 2.0 * w_j * (1.0 - np.cos(np.pi * np.arange(n_j) / n_j))


def comb_spectrum_values(spec: GridSpec) -> np.ndarray:
    """All ``n`` eigenvalues in eigen-index enumeration order."""
    return tensor_sum([_value_table(n_j, w_j) for n_j, w_j in zip(spec.dims, spec.weights)])


# ── Eigenvectors ────────────────────────────────────────────

def _cosine_factor(z_j: int, n_j: int) -> np.ndarray:
    x = np.arange(1, n_j + 1)
    return np.cos(np.pi * z_j / n_j * (x - 0.5))


def _alternating(n_j: int) -> np.ndarray:
    # (-1)^x for x = 1..n_j
    return np.where(np.arange(1, n_j + 1) % 2 == 0, 1.0, -1.0)


def comb_eigenvector(z: Sequence[int], spec: GridSpec, normalize: bool = False) -> np.ndarray:
    index = check_canonical(z, spec)
    vector = tensor_product([_cosine_factor(z_j, n_j) for z_j, n_j in zip(index, spec.dims)])
    return normalized(vector) if normalize else vector


def unoriented_eigenvector(z: Sequence[int], spec: GridSpec, normalize: bool = False) -> np.ndarray:
    index = check_canonical(z, spec)
    vector = tensor_product(
        [_alternating(n_j) * _cosine_factor(z_j, n_j) for z_j, n_j in zip(index, spec.dims)]
    )
    return normalized(vector) if normalize else vector


def eigenvector_component(
    kind: LaplacianKind, z: Sequence[int], x: Sequence[int], spec: GridSpec
) -> float:
    """Single entry of a combinatorial or unoriented eigenvector."""
    if kind.uses_shifts:
        raise DomainError(f"{kind.value} components need shifts; use the shift solver")
    index = check_canonical(z, spec)
    coords = check_node_vector(x, spec)
    value = 1.0
    for z_j, x_j, n_j in zip(index, coords, spec.dims):
        value *= math.cos(math.pi * z_j / n_j * (x_j - 0.5))
        if kind is LaplacianKind.UNORIENTED and x_j % 2:
            value = -value
    return value


def reduce_eigenvector(z: Sequence[int], spec: GridSpec) -> Optional[np.ndarray]:
    """Combinatorial vector of a raw index, or ``None`` when it is the zero vector."""
    reduced = canonicalize_eigen_index(z, spec)
    if reduced.is_zero_vector:
        return None
    return reduced.sign * comb_eigenvector(reduced.z, spec)


def eigenpair(
    kind: LaplacianKind, z: Sequence[int], spec: GridSpec, normalize: bool = False
) -> EigenPair:
    index = check_canonical(z, spec)
    if kind is LaplacianKind.COMBINATORIAL:
        vector = comb_eigenvector(index, spec, normalize)
    elif kind is LaplacianKind.UNORIENTED:
        vector = unoriented_eigenvector(index, spec, normalize)
    else:
        raise DomainError(f"{kind.value} eigenpairs are not closed-form; use the shift solver")
    return EigenPair(kind, index, comb_eigenvalue(index, spec), vector)
