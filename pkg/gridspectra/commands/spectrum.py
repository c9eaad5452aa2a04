"""`spectrum`: every eigenvalue of one Laplacian, with indices and shifts."""
from __future__ import annotations

import argparse

from ..services import analysis, output_service
from ..services.errors import GridSpectraError
from ..services.gridmodel import GridSpec, LaplacianKind
from . import as_failure


def spectrum_command(args: argparse.Namespace) -> str:
    try:
        spec = GridSpec.parse(args.dims, args.weights)
        kind = LaplacianKind.parse(args.laplacian)
        rows = analysis.eigen_table(spec, kind, args.threads)
        summary = analysis.SpectrumSummary.from_values(spec, kind, [r.eigenvalue for r in rows])
        return output_service.render_spectrum(summary, rows, args.format)
    except GridSpectraError as e:
        raise as_failure(e) from e
