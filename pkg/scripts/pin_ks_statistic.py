#!/usr/bin/env python3
"""
One-time generator: pin the KS non-uniformity statistic of the 32x32 normalized spectrum.

The regression test compares fresh runs against tests/data/ks_pin.json, so the
value only needs regenerating when the solver changes on purpose.

Usage:
    python scripts/pin_ks_statistic.py
"""
from __future__ import annotations

import json
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))
from gridspectra.services import analysis
from gridspectra.services.gridmodel import GridSpec, LaplacianKind

DIMS = [32, 32]


def generate() -> None:
    spec = GridSpec.unweighted(DIMS)
    kind = LaplacianKind.NORMALIZED
    print(f"Solving {spec.n} shift systems for dims={DIMS}...")
    summary = analysis.full_spectrum(spec, kind)
    range_max = analysis.default_range(spec, kind)
    statistic = analysis.ks_uniformity(summary.values, range_max)
    print(f"  fiedler={summary.fiedler:.12g}  max={summary.max:.12g}")

    output = {
        "dims": DIMS,
        "kind": kind.value,
        "range_max": range_max,
        "ks_statistic": statistic,
    }
    out_path = Path(__file__).resolve().parent.parent / "tests" / "data" / "ks_pin.json"
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with open(out_path, "w") as f:
        json.dump(output, f, indent=2)
        f.write("\n")

    print(f"\nDone! -> {out_path}")
    print(f"KS statistic: {statistic:.17g}")


if __name__ == "__main__":
    t0 = time.time()
    generate()
    print(f"\nTotal: {time.time() - t0:.1f}s")
