"""Weighted grid graphs: node numbering, degrees and eigen-index bookkeeping.

Node ids are 1-based and row-major: the last dimension varies fastest, so
``i = 1 + sum_j (x_j - 1) * prod_{k>j} n_k``.  Arrays returned by the
vectorized helpers are 0-based and ordered by node id.
"""
from __future__ import annotations

import enum
import itertools
import math
import sys
from dataclasses import dataclass
from functools import reduce
from typing import Iterator, NamedTuple, Optional, Sequence

import numpy as np

from .errors import DomainError

NodeVector = tuple[int, ...]
EigenIndex = tuple[int, ...]


def _integers(values: Sequence, what: str) -> tuple[int, ...]:
    """Exact integers; integral floats are accepted, fractional ones are not."""
    out = []
    for v in values:
        try:
            as_int = int(v)
        except (TypeError, ValueError, OverflowError):
            raise DomainError(f"{what} must be integers, got {v!r}") from None
        if as_int != v:
            raise DomainError(f"{what} must be integers, got {v!r}")
        out.append(as_int)
    return tuple(out)


class LaplacianKind(str, enum.Enum):
    COMBINATORIAL = "combinatorial"
    UNORIENTED = "unoriented"
    NORMALIZED = "normalized"
    RANDOM_WALK = "randomwalk"

    @classmethod
    def parse(cls, text: str) -> "LaplacianKind":
        key = text.strip().lower().replace("-", "").replace("_", "")
        for kind in cls:
            if kind.value == key:
                return kind
        raise DomainError(
            f"unknown Laplacian kind {text!r}; expected one of "
            + ", ".join(k.value for k in cls)
        )

    @property
    def uses_shifts(self) -> bool:
        """Normalized and random-walk eigenpairs need a shift solve."""
        return self in (LaplacianKind.NORMALIZED, LaplacianKind.RANDOM_WALK)


@dataclass(frozen=True)
class GridSpec:
    """Layer counts ``dims`` and direction weights ``weights`` of a grid graph."""

    dims: tuple[int, ...]
    weights: tuple[float, ...]

    def __post_init__(self) -> None:
        dims = _integers(self.dims, "layer counts")
        weights = tuple(float(w) for w in self.weights)
        if not dims:
            raise DomainError("a grid needs at least one dimension")
        if len(dims) != len(weights):
            raise DomainError(
                f"dims and weights differ in length ({len(dims)} vs {len(weights)})"
            )
        for j, n_j in enumerate(dims):
            if n_j < 2:
                raise DomainError(f"dimension {j + 1} has {n_j} layers; every n_j must be >= 2")
        for j, w_j in enumerate(weights):
            if not (w_j > 0 and math.isfinite(w_j)):
                raise DomainError(f"weight of dimension {j + 1} must be positive, got {w_j}")
        if math.prod(dims) > sys.maxsize:
            raise DomainError(f"node count of {list(dims)} exceeds the index range")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "weights", weights)

    # ── Constructors ────────────────────────────────────────
    @classmethod
    def unweighted(cls, dims: Sequence[int]) -> "GridSpec":
        return cls(tuple(dims), (1.0,) * len(dims))

    @classmethod
    def parse(cls, dims_text: str, weights_text: Optional[str] = None) -> "GridSpec":
        """Build a spec from comma-separated lists; weights default to all 1."""
        dims = parse_int_list(dims_text, "--dims")
        if weights_text is None or not weights_text.strip():
            return cls.unweighted(dims)
        weights = parse_float_list(weights_text, "--weights")
        if len(weights) != len(dims):
            raise DomainError(
                f"--weights has {len(weights)} entries but --dims has {len(dims)}"
            )
        return cls(tuple(dims), tuple(weights))

    def scaled(self, factor: float) -> "GridSpec":
        if not factor > 0:
            raise DomainError(f"weight scale must be positive, got {factor}")
        return GridSpec(self.dims, tuple(w * factor for w in self.weights))

    # ── Derived quantities ──────────────────────────────────
    @property
    def d(self) -> int:
        return len(self.dims)

    @property
    def n(self) -> int:
        return math.prod(self.dims)

    @property
    def weight_sum(self) -> float:
        return math.fsum(self.weights)

    @property
    def is_regular(self) -> bool:
        return len(set(self.dims)) == 1 and len(set(self.weights)) == 1

    def has_inner_node(self) -> bool:
        return all(n_j >= 3 for n_j in self.dims)

    def to_dict(self) -> dict:
        return {"dims": list(self.dims), "weights": list(self.weights)}


class ReducedIndex(NamedTuple):
    z: Optional[EigenIndex]
    sign: int
    is_zero_vector: bool


# ── Parsing helpers ─────────────────────────────────────────

def parse_int_list(text: str, flag: str) -> list[int]:
    parts = [p.strip() for p in text.replace(";", ",").split(",") if p.strip()]
    if not parts:
        raise DomainError(f"{flag}: expected a comma-separated list of integers")
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise DomainError(f"{flag}: cannot parse {text!r} as integers") from None


def parse_float_list(text: str, flag: str) -> list[float]:
    parts = [p.strip() for p in text.replace(";", ",").split(",") if p.strip()]
    if not parts:
        raise DomainError(f"{flag}: expected a comma-separated list of numbers")
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise DomainError(f"{flag}: cannot parse {text!r} as numbers") from None


# ── Node identity ───────────────────────────────────────────

def check_node_vector(x: Sequence[int], spec: GridSpec) -> NodeVector:
    coords = _integers(x, "node coordinates")
    if len(coords) != spec.d:
        raise DomainError(f"node vector {list(coords)} has {len(coords)} coordinates, grid has {spec.d}")
    for j, (x_j, n_j) in enumerate(zip(coords, spec.dims)):
        if not 1 <= x_j <= n_j:
            raise DomainError(f"coordinate {j + 1} of {list(coords)} is outside [1, {n_j}]")
    return coords


def node_id_from_vector(x: Sequence[int], spec: GridSpec) -> int:
    coords = check_node_vector(x, spec)
    i = 0
    for x_j, n_j in zip(coords, spec.dims):
        i = i * n_j + (x_j - 1)
    return i + 1


def node_vector_from_id(i: int, spec: GridSpec) -> NodeVector:
    n = spec.n
    if not 1 <= i <= n:
        raise DomainError(f"node id {i} is outside [1, {n}]")
    rest = i - 1
    coords = []
    for n_j in reversed(spec.dims):
        rest, r = divmod(rest, n_j)
        coords.append(r + 1)
    return tuple(reversed(coords))


def node_vectors(spec: GridSpec) -> np.ndarray:
    """All node vectors as an ``(n, d)`` array, row ``i-1`` holding node ``i``."""
    return np.indices(spec.dims).reshape(spec.d, -1).T + 1


# ── Degrees ─────────────────────────────────────────────────

def node_degree(x: Sequence[int], spec: GridSpec) -> float:
    coords = check_node_vector(x, spec)
    return math.fsum(
        w_j * (1 if x_j in (1, n_j) else 2)
        for x_j, n_j, w_j in zip(coords, spec.dims, spec.weights)
    )


def _degree_table(n_j: int, w_j: float) -> np.ndarray:
    table = np.full(n_j, 2.0 * w_j)
    table[0] = table[-1] = w_j
    return table


def degree_vector(spec: GridSpec) -> np.ndarray:
    return tensor_sum([_degree_table(n_j, w_j) for n_j, w_j in zip(spec.dims, spec.weights)])


# ── Tensor helpers (row-major, matching node ids) ───────────

def tensor_sum(tables: Sequence[np.ndarray]) -> np.ndarray:
    """``out[i] = sum_j tables[j][x_j - 1]`` for every node ``i``."""
    return reduce(np.add.outer, tables).ravel()


def tensor_product(factors: Sequence[np.ndarray]) -> np.ndarray:
    """``out[i] = prod_j factors[j][x_j - 1]`` for every node ``i``."""
    return reduce(np.multiply.outer, factors).ravel()


# ── Eigen indices ───────────────────────────────────────────

def enumerate_eigen_indices(spec: GridSpec) -> Iterator[EigenIndex]:
    """Every canonical eigen index, in lexicographic order."""
    return itertools.product(*(range(n_j) for n_j in spec.dims))


def check_canonical(z: Sequence[int], spec: GridSpec) -> EigenIndex:
    index = _integers(z, "eigen index entries")
    if len(index) != spec.d:
        raise DomainError(f"eigen index {list(index)} has {len(index)} entries, grid has {spec.d}")
    for j, (z_j, n_j) in enumerate(zip(index, spec.dims)):
        if not 0 <= z_j <= n_j - 1:
            raise DomainError(f"eigen index entry {j + 1} of {list(index)} is outside [0, {n_j - 1}]")
    return index


def canonicalize_eigen_index(z: Sequence[int], spec: GridSpec) -> ReducedIndex:
    """Map a raw index in ``[-n_j+1, 2n_j-1]`` onto its canonical eigenvector.

    Negative entries flip sign for free, ``n_j`` yields the zero vector and
    entries above ``n_j`` reflect to ``2n_j - z_j`` at the cost of a sign.
    """
    raw = _integers(z, "eigen index entries")
    if len(raw) != spec.d:
        raise DomainError(f"eigen index {list(raw)} has {len(raw)} entries, grid has {spec.d}")
    reduced = []
    sign = 1
    zero = False
    for j, (z_j, n_j) in enumerate(zip(raw, spec.dims)):
        if not -n_j + 1 <= z_j <= 2 * n_j - 1:
            raise DomainError(
                f"eigen index entry {j + 1} of {list(raw)} is outside [{-n_j + 1}, {2 * n_j - 1}]"
            )
        if z_j < 0:
            reduced.append(-z_j)
        elif z_j == n_j:
            zero = True
        elif z_j > n_j:
            reduced.append(2 * n_j - z_j)
            sign = -sign
        else:
            reduced.append(z_j)
    if zero:
        return ReducedIndex(None, 1, True)
    return ReducedIndex(tuple(reduced), sign, False)
