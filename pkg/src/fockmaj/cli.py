"""Command-line driver for region scans, the coefficient scanner, and
pairwise scheme comparisons.

Exit codes: 0 success, 2 parse/config error, 3 scan completed but some
points carried the truncation sentinel -2.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from ._version import __version__
from .errors import FockmajError, SpecSyntaxError
from .exact_kk import conjecture_scan
from .scans import (
    SENTINEL_TRUNCATION,
    ScanGrid,
    ScanResult,
    run_compare,
    scan_entropy,
    scan_min_k,
    scan_tvd_bound,
    write_csv,
    write_json,
    write_matrix,
)

_WRITERS = {"csv": write_csv, "json": write_json, "matrix": write_matrix}


def _parse_range(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected min:max:steps, got {text!r}")
    try:
        return float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _add_grid_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--eta", type=_parse_range, default=(0.01, 1.0, 100),
                     metavar="a:b:steps", help="transmittance range (default 0.01:1:100)")
    sub.add_argument("--lambda", dest="lam_range", type=_parse_range, default=(0.0, 0.99, 100),
                     metavar="a:b:steps", help="squeezing-parameter range (default 0:0.99:100)")
    sub.add_argument("--kmax", type=int, default=6)
    sub.add_argument("--trunc-tol", type=float, default=1e-12)
    sub.add_argument("--workers", type=int, default=1)
    sub.add_argument("--out", type=str, default=None, help="output path (default stdout)")
    sub.add_argument("--format", choices=sorted(_WRITERS), default="csv")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="fockmaj",
        description="Majorization-based entanglement-enhancement scans for filtered TMSV states",
    )
    p.add_argument("--version", action="version", version=f"fockmaj {__version__}")
    subs = p.add_subparsers(dest="command", required=True)

    for name, doc in (
        ("scan-min-k", "minimum photons to add/subtract for majorization, per (eta, lambda)"),
        ("scan-tvd", "-log10 of the k=1 approximate-majorization bound, per (eta, lambda)"),
        ("scan-entropy", "minimum photons for an entropy increase, per (eta, lambda)"),
    ):
        sub = subs.add_parser(name, help=doc)
        _add_grid_args(sub)

    conj = subs.add_parser("conjecture", help="scan series coefficients for negativity")
    conj.add_argument("--k", type=int, required=True)
    conj.add_argument("--n", type=int, required=True, help="number of coefficients to scan")

    comp = subs.add_parser("compare", help="compare two schemes at one squeezing")
    comp.add_argument("spec_a", help="e.g. dual(8,8), multi(1,-2), general(nla(g=1.2);identity())")
    comp.add_argument("spec_b")
    comp.add_argument("--lambda", dest="lam", type=float, required=True)
    comp.add_argument("--trunc-tol", type=float, default=1e-12)

    selftest = subs.add_parser("selftest", help="run the randomized property suites")
    selftest.add_argument("--seed", type=int, default=0)
    selftest.add_argument("--cases", type=int, default=50)

    return p


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _scan_exit_code(result: ScanResult) -> int:
    for row in result.rows:
        if any(v == SENTINEL_TRUNCATION for v in row[3:]):
            return 3
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0

    try:
        if args.command in ("scan-min-k", "scan-tvd", "scan-entropy"):
            grid = ScanGrid(
                eta_range=args.eta,
                lambda_range=args.lam_range,
                kmax=args.kmax,
                trunc_tol=args.trunc_tol,
            )
            runner = {
                "scan-min-k": scan_min_k,
                "scan-tvd": scan_tvd_bound,
                "scan-entropy": scan_entropy,
            }[args.command]
            result = runner(grid, workers=args.workers)
            _emit(_WRITERS[args.format](result), args.out)
            return _scan_exit_code(result)

        if args.command == "conjecture":
            all_nonneg, first_neg = conjecture_scan(args.k, args.n)
            if all_nonneg:
                print(f"k={args.k}: no negative coefficient among c_0..c_{args.n - 1}")
            else:
                print(f"k={args.k}: first negative coefficient at n={first_neg}")
            return 0

        if args.command == "compare":
            report = run_compare(args.spec_a, args.spec_b, args.lam, args.trunc_tol)
            print(report.format())
            return 0

        if args.command == "selftest":
            return _selftest(args.seed, args.cases)
    except SpecSyntaxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, FockmajError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def _selftest(seed: int, cases: int) -> int:
    """Randomized spot checks of the certificate and concatenation suites."""
    from .filter_ops import concat, is_fock_amplifying, is_fock_orthogonal, is_fock_preserving
    from .filtration import filtered_schmidt
    from .majorization import apply_circulant, build_circulant_d, majorizes
    from .fock_core import thermal_eigenvalues
    from .testing import random_fock_preserving, random_joint_amplifying_pair

    rng = np.random.default_rng(seed)
    failures = 0

    def check(name: str, ok: bool) -> None:
        nonlocal failures
        print(f"[{'PASS' if ok else 'FAIL'}] {name}")
        if not ok:
            failures += 1

    ok = True
    for _ in range(cases):
        f = random_fock_preserving(rng, 64)
        g = random_fock_preserving(rng, 128)
        h = concat(g, f)
        ok &= is_fock_preserving(h)
    check(f"concatenation preserves Fock-preserving ({cases} cases)", ok)

    ok = True
    for _ in range(cases):
        lam = float(rng.uniform(0.05, 0.9))
        f, g = random_joint_amplifying_pair(rng, lam, 1e-12)
        tau = thermal_eigenvalues(lam, 1e-12)
        sigma = filtered_schmidt(lam, f, g, 1e-12)
        ok &= is_fock_orthogonal(f) and is_fock_orthogonal(g)
        ok &= majorizes(tau, sigma, 1e-10)
    check(f"jointly amplifying pairs are majorized by thermal ({cases} cases)", ok)

    ok = True
    for _ in range(cases):
        lam = float(rng.uniform(0.05, 0.9))
        f, _ = random_joint_amplifying_pair(rng, lam, 1e-12)
        amps = f.amplitudes
        D = build_circulant_d(lam, amps)
        tau = thermal_eigenvalues(lam, 1e-12)
        n = min(len(tau), len(amps))
        image = apply_circulant(D, tau.values[:n])
        direct = tau.values[:n] * amps[:n] ** 2
        direct /= direct.sum()
        image = image / image.sum()
        ok &= D.is_stochastic and bool(np.max(np.abs(image - direct)) < 1e-9)
    check(f"circulant certificate reproduces filtered spectra ({cases} cases)", ok)

    print("selftest:", "all suites passed" if failures == 0 else f"{failures} suite(s) failed")
    return 0 if failures == 0 else 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
