"""Distribution subcommands: `analyze`, `limit-cdf`, `shift-profile`."""
from __future__ import annotations

import argparse

from ..services import analysis, output_service
from ..services.errors import GridSpectraError
from ..services.gridmodel import GridSpec, LaplacianKind, parse_int_list
from . import as_failure


def analyze_command(args: argparse.Namespace) -> str:
    try:
        spec = GridSpec.parse(args.dims, args.weights)
        kind = LaplacianKind.parse(args.laplacian)
        report = analysis.analyze(spec, kind, args.bins, args.threads, paired=args.paired)
        return output_service.render_analysis(report, args.format)
    except GridSpectraError as e:
        raise as_failure(e) from e


def limit_cdf_command(args: argparse.Namespace) -> str:
    try:
        kind = LaplacianKind.parse(args.laplacian)
        if kind.uses_shifts:
            samples = analysis.limit_cdf_normalized(args.d, args.resolution, args.samples)
        else:
            samples = analysis.limit_cdf_combinatorial(args.d, args.resolution, args.samples)
        return output_service.render_limit_cdf(kind, args.d, args.resolution, samples, args.format)
    except GridSpectraError as e:
        raise as_failure(e) from e


def shift_profile_command(args: argparse.Namespace) -> str:
    try:
        layers = parse_int_list(args.layers, "--layers")
        rows = analysis.shift_profile(args.d, layers, args.pattern)
        return output_service.render_shift_profile(args.d, args.pattern, rows, args.format)
    except GridSpectraError as e:
        raise as_failure(e) from e
