"""CSV/JSON rendering of results and atomic writes to disk."""
from __future__ import annotations

import csv
import io
import json
import os
import sys
import tempfile
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence, Union

from .analysis import CdfSamples, DistributionReport, EigenRow, ShiftProfileRow, SpectrumSummary
from .closedform import EigenPair
from .errors import DomainError
from .gridmodel import GridSpec, LaplacianKind, node_vectors
from .oracle import VerificationReport

FORMATS = ("csv", "json")


def fmt_float(value: Optional[float]) -> str:
    """17 significant digits, enough to re-parse the same double."""
    return "" if value is None else f"{value:.17g}"


def _joined(values: Optional[Iterable[Any]], render=str) -> str:
    return "" if values is None else ";".join(render(v) for v in values)


def _csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _json(payload: dict[str, Any]) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _check_format(fmt: str) -> None:
    if fmt not in FORMATS:
        raise DomainError(f"--format must be one of {', '.join(FORMATS)}, got {fmt!r}")


# ── Spectrum ────────────────────────────────────────────────

def render_spectrum(summary: SpectrumSummary, rows: Sequence[EigenRow], fmt: str) -> str:
    _check_format(fmt)
    if fmt == "csv":
        return _csv(
            ["index", "z", "lambda", "delta"],
            ([r.index, _joined(r.z), fmt_float(r.eigenvalue), _joined(r.shifts, fmt_float)] for r in rows),
        )
    eigenvalues = []
    for r in rows:
        entry: dict[str, Any] = {"z": list(r.z), "lambda": r.eigenvalue}
        if r.shifts is not None:
            entry["delta"] = list(r.shifts)
        eigenvalues.append(entry)
    return _json({
        "spec": summary.spec.to_dict(),
        "kind": summary.kind.value,
        "eigenvalues": eigenvalues,
        "summary": {"fiedler": summary.fiedler, "max": summary.max},
    })


def parse_spectrum_json(text: str) -> SpectrumSummary:
    """Rebuild the summary behind a JSON spectrum document."""
    try:
        raw = json.loads(text)
        spec = GridSpec(tuple(raw["spec"]["dims"]), tuple(raw["spec"]["weights"]))
        kind = LaplacianKind.parse(raw["kind"])
        values = [float(e["lambda"]) for e in raw["eigenvalues"]]
    except (KeyError, TypeError, ValueError) as e:
        raise DomainError(f"not a spectrum document: {e}") from e
    return SpectrumSummary.from_values(spec, kind, values)


# ── Eigenvector ─────────────────────────────────────────────

def render_eigenvector(spec: GridSpec, pair: EigenPair, fmt: str, normalized: bool = False) -> str:
    _check_format(fmt)
    coords = node_vectors(spec)
    if fmt == "csv":
        return _csv(
            ["node", "x", "value"],
            ([i + 1, _joined(coords[i].tolist()), fmt_float(float(v))] for i, v in enumerate(pair.vector)),
        )
    payload: dict[str, Any] = {
        "spec": spec.to_dict(),
        "kind": pair.kind.value,
        "z": list(pair.z),
        "lambda": pair.eigenvalue,
    }
    if pair.shifts is not None:
        payload["delta"] = list(pair.shifts)
    payload["normalized"] = normalized
    payload["vector"] = [float(v) for v in pair.vector]
    return _json(payload)


# ── Verification ────────────────────────────────────────────

def render_verification(report: VerificationReport, fmt: str) -> str:
    _check_format(fmt)
    if fmt == "json":
        return _json(report.to_dict())
    return _csv(
        ["dims", "weights", "kind", "tol", "max_deviation", "max_residual", "gram_max", "gram_tol", "passed"],
        [[
            _joined(report.spec.dims),
            _joined(report.spec.weights, fmt_float),
            report.kind.value,
            fmt_float(report.tol),
            fmt_float(report.max_deviation),
            fmt_float(report.max_residual),
            fmt_float(report.gram_max),
            fmt_float(report.gram_tol),
            "true" if report.passed else "false",
        ]],
    )


# ── Distributions ───────────────────────────────────────────

def render_analysis(report: DistributionReport, fmt: str) -> str:
    _check_format(fmt)
    summary = report.summary
    if fmt == "csv":
        rows: list[list[Any]] = [["ks", fmt_float(report.ks_statistic), "", ""]]
        rows += [["fiedler", fmt_float(summary.fiedler), "", ""], ["max", fmt_float(summary.max), "", ""]]
        for lo, hi, count in zip(report.edges, report.edges[1:], report.counts):
            rows.append(["histogram", fmt_float(lo), fmt_float(hi), count])
        rows += [["cdf", fmt_float(v), fmt_float(f), ""] for v, f in report.cdf]
        rows += [["paired", _joined(p.z), fmt_float(p.combinatorial), fmt_float(p.normalized)]
                 for p in report.paired]
        return _csv(["record", "a", "b", "c"], rows)
    payload: dict[str, Any] = {
        "spec": summary.spec.to_dict(),
        "kind": summary.kind.value,
        "range_max": report.range_max,
        "summary": {"fiedler": summary.fiedler, "max": summary.max},
        "histogram": {"edges": list(report.edges), "counts": list(report.counts)},
        "cdf": [[v, f] for v, f in report.cdf],
        "ks_statistic": report.ks_statistic,
    }
    if report.paired:
        payload["paired"] = [
            {"z": list(p.z), "combinatorial": p.combinatorial, "normalized": p.normalized}
            for p in report.paired
        ]
    return _json(payload)


def render_limit_cdf(kind: LaplacianKind, d: int, resolution: int, samples: CdfSamples, fmt: str) -> str:
    _check_format(fmt)
    if fmt == "csv":
        return _csv(["value", "fraction"], ([fmt_float(v), fmt_float(f)] for v, f in samples))
    return _json({
        "kind": kind.value,
        "d": d,
        "resolution": resolution,
        "samples": [[v, f] for v, f in samples],
    })


def render_shift_profile(d: int, pattern: str, rows: Sequence[ShiftProfileRow], fmt: str) -> str:
    _check_format(fmt)
    if fmt == "csv":
        return _csv(
            ["layers", "z", "lambda", "delta_first", "delta_rest"],
            ([r.layers, _joined(r.z), fmt_float(r.eigenvalue), fmt_float(r.delta_first), fmt_float(r.delta_rest)]
             for r in rows),
        )
    return _json({
        "d": d,
        "pattern": pattern,
        "rows": [
            {"layers": r.layers, "z": list(r.z), "lambda": r.eigenvalue,
             "delta_first": r.delta_first, "delta_rest": r.delta_rest}
            for r in rows
        ],
    })


# ── Writing ─────────────────────────────────────────────────

def _current_umask() -> int:
    umask = os.umask(0)
    os.umask(umask)
    return umask


def write_output(text: str, out: Optional[Union[str, Path]] = None) -> None:
    """Write to ``out`` via a temp file and rename, or to stdout when ``out`` is empty or ``-``."""
    if out is None or str(out) in ("", "-"):
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    path = Path(out)
    directory = path.parent if str(path.parent) else Path(".")
    directory.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        # mkstemp creates 0600; give the file the mode a plain open() would
        os.chmod(tmp_name, 0o666 & ~_current_umask())
        os.replace(tmp_name, path)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise
