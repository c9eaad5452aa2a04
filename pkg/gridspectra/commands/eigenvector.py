"""`eigenvector`: one materialized eigenpair."""
from __future__ import annotations

import argparse

from ..services import closedform, output_service, shiftsolver
from ..services.closedform import EigenPair
from ..services.errors import DomainError, GridSpectraError
from ..services.gridmodel import GridSpec, LaplacianKind, canonicalize_eigen_index, parse_int_list
from . import as_failure


def _closed_form_pair(kind: LaplacianKind, raw_z: list[int], spec: GridSpec, normalize: bool) -> EigenPair:
    # raw indices in [-n_j+1, 2n_j-1] reduce onto a canonical vector
    reduced = canonicalize_eigen_index(raw_z, spec)
    if reduced.is_zero_vector:
        raise DomainError(f"--z {raw_z} gives the zero vector")
    pair = closedform.eigenpair(kind, reduced.z, spec, normalize)
    if reduced.sign < 0:
        pair = EigenPair(pair.kind, pair.z, pair.eigenvalue, -pair.vector)
    return pair


def eigenvector_command(args: argparse.Namespace) -> str:
    try:
        spec = GridSpec.parse(args.dims, args.weights)
        kind = LaplacianKind.parse(args.laplacian)
        z = parse_int_list(args.z, "--z")
        if kind.uses_shifts:
            pair = shiftsolver.eigenpair(kind, z, spec, args.normalize)
        else:
            pair = _closed_form_pair(kind, z, spec, args.normalize)
        return output_service.render_eigenvector(spec, pair, args.format, args.normalize)
    except GridSpectraError as e:
        raise as_failure(e) from e
