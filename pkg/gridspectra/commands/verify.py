"""`verify`: check analytic results against the dense oracle."""
from __future__ import annotations

import argparse

from ..services import oracle, output_service
from ..services.errors import GridSpectraError, VerificationError
from ..services.gridmodel import GridSpec, LaplacianKind
from . import EXIT_FAILURE, CommandFailure, as_failure


def verify_command(args: argparse.Namespace) -> str:
    text = None
    try:
        spec = GridSpec.parse(args.dims, args.weights)
        kind = LaplacianKind.parse(args.laplacian)
        report = oracle.verify(spec, kind, args.tol, threads=args.threads)
        text = output_service.render_verification(report, args.format)
        if not report.passed:
            raise VerificationError(
                f"verification failed for {kind.value} dims={list(spec.dims)} at tol={args.tol:g}"
            )
    except VerificationError as e:
        # report goes out with the failure
        raise CommandFailure(EXIT_FAILURE, str(e), output=text) from e
    except GridSpectraError as e:
        raise as_failure(e) from e
    return text
