#!/usr/bin/env python3
"""Smoke test for the binpr Python extension module.

Build the module first:

    cargo build -p binpr-python --release

then run this script; it locates the built cdylib, imports it and exercises
the main entry points.
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path


def locate_module() -> Path:
    root = Path(__file__).resolve().parent.parent
    candidates = [
        root / "target" / profile / name
        for profile in ("release", "debug")
        for name in ("libbinpr.so", "libbinpr.dylib", "binpr.dll")
    ]
    for candidate in candidates:
        if candidate.exists():
            return candidate
    sys.exit(
        "built module not found; run `cargo build -p binpr-python --release` first"
    )


def import_binpr():
    built = locate_module()
    staging = Path(tempfile.mkdtemp(prefix="binpr-py-"))
    suffix = ".pyd" if built.suffix == ".dll" else ".so"
    shutil.copy2(built, staging / f"binpr{suffix}")
    sys.path.insert(0, str(staging))
    import binpr

    return binpr


def main() -> None:
    binpr = import_binpr()

    # measurements: a delta has unit magnitudes at every frequency
    b = binpr.dft_magnitude([1.0, 0.0, 0.0, 0.0], m=None)
    assert all(abs(v - 1.0) < 1e-12 for v in b), b
    b12 = binpr.dft_magnitude([1.0, 0.0, 0.0, 0.0], m=12)
    assert len(b12) == 12

    # integer autocorrelation by pair counting
    aut = binpr.periodic_autocorrelation([1, 1, 0, 1, 0, 0, 0, 0])
    assert aut == [3, 1, 1, 1, 0, 1, 1, 1], aut

    # canonicalization: shifts collapse to one representative
    assert binpr.canonical_form([0, 1, 0, 0]) == [0, 0, 0, 1]
    assert binpr.canonical_form([1, 1, 0, 0]) == binpr.canonical_form([0, 0, 1, 1])

    # the known non-trivially-ambiguous pair at length 12
    x = [0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 1, 1]
    y = [0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 1, 1]
    matches = binpr.enumerate_matching(x)
    assert y in matches, "ambiguous partner missing from brute force"
    assert binpr.canonical_form(x) != binpr.canonical_form(y)

    # uniqueness scan: supports <= 3 are fully unique at length 10
    rows = binpr.uniqueness_report(10, mode="classic")
    for support, classes, unique in rows:
        if support <= 3 or support >= 7:
            assert classes == unique, (support, classes, unique)

    # a solve from exact magnitudes lands on the right class
    truth = [0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]
    b = binpr.dft_magnitude([float(v) for v in truth])
    result = binpr.admm_solve(b, len(truth), rho1=1e-2, rho2=1e-2, seed=3)
    assert result.residual < 1e-6, result
    assert binpr.canonical_form(result.recovered_bits) == binpr.canonical_form(truth)

    # denoising pipelines at moderate noise
    for scheme in ("rounding", "naive", "rounding_oversampled", "naive_oversampled"):
        outcome = binpr.denoise_trial(truth, snr_db=24.0, scheme=scheme, seed=5)
        assert outcome.success, (scheme, outcome)

    # SNR handling: the module accepts infinity as "no noise"
    outcome = binpr.denoise_trial(truth, snr_db=math.inf, scheme="rounding", seed=1)
    assert outcome.success and outcome.residual < 1e-9

    print("binpr python smoke test: OK")


if __name__ == "__main__":
    main()
