"""Deterministic (eta, lambda) region sweeps and pairwise comparisons.

Each grid point is an independent, pure computation, so sweeps parallelize
over a process pool with results assembled in fixed eta-major order; the
output is byte-identical regardless of worker count. Per-point failures
never abort a scan: a point that cannot satisfy its truncation guard is
recorded with the sentinel -2, and a point where no k succeeds with -1.
"""

from __future__ import annotations

import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._version import __version__
from .errors import TruncationTooCoarse, ZeroState
from .fock_core import (
    ProbVector,
    shannon_entropy,
    squeezing_db,
    thermal_eigenvalues,
    total_variation_distance,
)
from .approx_major import RealisticParams, nu_upper_bound, realistic_spectrum
from .filtration import SchemeSpec, parse_scheme, scheme_spectrum, serialize_scheme
from .majorization import MajorOrder, compare, majorizes

__all__ = [
    "ScanGrid",
    "ScanResult",
    "scan_min_k",
    "scan_tvd_bound",
    "scan_entropy",
    "CompareReport",
    "run_compare",
    "write_csv",
    "write_json",
    "write_matrix",
]

SENTINEL_NO_K = -1
SENTINEL_TRUNCATION = -2
_COMPARE_TOL = 1e-10
_MAX_WINDOW = 1 << 20


@dataclass(frozen=True)
class ScanGrid:
    """Sweep configuration over transmittance eta and squeezing lambda."""

    eta_range: tuple[float, float, int] = (0.01, 1.0, 100)
    lambda_range: tuple[float, float, int] = (0.0, 0.99, 100)
    kmax: int = 6
    trunc_tol: float = 1e-12
    mode: str = "min-k"

    def __post_init__(self):
        e0, e1, es = self.eta_range
        l0, l1, ls = self.lambda_range
        if not (0.0 < e0 <= e1 <= 1.0) or es < 1:
            raise ValueError(f"eta range must satisfy 0 < min <= max <= 1, steps >= 1: {self.eta_range}")
        if not (0.0 <= l0 <= l1 < 1.0) or ls < 1:
            raise ValueError(f"lambda range must satisfy 0 <= min <= max < 1, steps >= 1: {self.lambda_range}")
        if not (1 <= self.kmax <= 32):
            raise ValueError(f"kmax must lie in [1, 32], got {self.kmax}")
        if not self.trunc_tol > 0.0:
            raise ValueError("trunc_tol must be positive")

    def etas(self) -> np.ndarray:
        lo, hi, steps = self.eta_range
        return np.linspace(lo, hi, steps)

    def lambdas(self) -> np.ndarray:
        lo, hi, steps = self.lambda_range
        return np.linspace(lo, hi, steps)

    def points(self) -> list[tuple[float, float]]:
        """(eta, lambda) pairs in eta-major order."""
        return [(float(e), float(l)) for e in self.etas() for l in self.lambdas()]


@dataclass(frozen=True)
class ScanResult:
    grid: ScanGrid
    mode: str
    columns: tuple[str, ...]
    rows: list[tuple]
    metadata: dict = field(default_factory=dict)


def _thermal_window(lam: float, trunc_tol: float) -> ProbVector:
    return thermal_eigenvalues(lam, trunc_tol)


def _sub_spectrum(lam: float, eta: float, k: int, trunc_tol: float) -> ProbVector:
    """Spectrum after realistic k-photon subtraction, adaptively windowed."""
    params = RealisticParams.from_transmittance(lam, eta, k)
    window = max(64, int(2 * math.log(trunc_tol) / math.log(params.mu)) if params.mu > 0 else 64)
    while True:
        try:
            return realistic_spectrum(params, window, trunc_tol)
        except TruncationTooCoarse:
            if window >= _MAX_WINDOW:
                raise
            window *= 2


def _point_min_k(args) -> int:
    eta, lam, kmax, trunc_tol = args
    if lam == 0.0:
        return SENTINEL_NO_K  # nothing to subtract from vacuum
    try:
        tau = _thermal_window(lam, trunc_tol)
        for k in range(1, kmax + 1):
            sigma = _sub_spectrum(lam, eta, k, trunc_tol)
            if majorizes(tau, sigma, _COMPARE_TOL):
                return k
        return SENTINEL_NO_K
    except TruncationTooCoarse:
        return SENTINEL_TRUNCATION
    except ZeroState:
        return SENTINEL_NO_K


def _point_tvd(args) -> tuple[float, float]:
    eta, lam = args
    mu = eta * lam
    if mu == lam or lam == 0.0:
        return 7.0, math.inf  # ideal point: nu = 0 exactly
    raw = -math.log10(nu_upper_bound(lam, mu))
    return min(7.0, max(0.0, raw)), raw


def _point_entropy(args) -> int:
    eta, lam, kmax, trunc_tol = args
    if lam == 0.0:
        return SENTINEL_NO_K
    try:
        nbar = lam / (1.0 - lam)
        s_tau = (nbar + 1.0) * math.log(nbar + 1.0) - nbar * math.log(nbar)
        for k in range(1, kmax + 1):
            sigma = _sub_spectrum(lam, eta, k, trunc_tol)
            if shannon_entropy(sigma) >= s_tau - 1e-10:
                return k
        return SENTINEL_NO_K
    except TruncationTooCoarse:
        return SENTINEL_TRUNCATION
    except ZeroState:
        return SENTINEL_NO_K


def _run(func, args_list, workers: int) -> list:
    if workers <= 1:
        return [func(a) for a in args_list]
    chunk = max(1, len(args_list) // (8 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, args_list, chunksize=chunk))


def _assemble(grid: ScanGrid, mode: str, columns, payloads, extra_meta=None, wall=0.0) -> ScanResult:
    rows = []
    for (eta, lam), payload in zip(grid.points(), payloads):
        base = (eta, lam, squeezing_db(lam))
        rows.append(base + (payload if isinstance(payload, tuple) else (payload,)))
    meta = {
        "tool_version": __version__,
        "trunc_tol": grid.trunc_tol,
        "wall_time_s": wall,
    }
    meta.update(extra_meta or {})
    return ScanResult(grid=grid, mode=mode, columns=columns, rows=rows, metadata=meta)


def scan_min_k(grid: ScanGrid, workers: int = 1) -> ScanResult:
    """Smallest k <= kmax with thermal majorizing the k-subtracted spectrum.

    Payload is the minimal k, -1 when no k within kmax succeeds (or the
    point is degenerate, lambda = 0), -2 when the truncation guard refused
    to answer. Realistic addition with g = 1/eta gives identical results.
    """
    t0 = time.perf_counter()
    args = [(e, l, grid.kmax, grid.trunc_tol) for e, l in grid.points()]
    payloads = _run(_point_min_k, args, workers)
    return _assemble(
        grid, "min-k", ("eta", "lambda", "lambda_db", "min_k"), payloads,
        {"kmax": grid.kmax}, time.perf_counter() - t0,
    )


def scan_tvd_bound(grid: ScanGrid, workers: int = 1) -> ScanResult:
    """d = -log10 of the k=1 nu bound at mu = eta*lambda.

    The displayed column is clamped to [0, 7]; the raw value rides along in
    an extra column (infinite at ideal points, where nu = 0).
    """
    t0 = time.perf_counter()
    payloads = _run(_point_tvd, grid.points(), workers)
    return _assemble(
        grid, "tvd-bound", ("eta", "lambda", "lambda_db", "d", "d_raw"), payloads,
        None, time.perf_counter() - t0,
    )


def scan_entropy(grid: ScanGrid, workers: int = 1) -> ScanResult:
    """Smallest k whose subtracted spectrum has entropy >= the thermal one."""
    t0 = time.perf_counter()
    args = [(e, l, grid.kmax, grid.trunc_tol) for e, l in grid.points()]
    payloads = _run(_point_entropy, args, workers)
    return _assemble(
        grid, "entropy", ("eta", "lambda", "lambda_db", "min_k_entropy"), payloads,
        {"kmax": grid.kmax}, time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# pairwise comparison


@dataclass(frozen=True)
class CompareReport:
    spec_a: str
    spec_b: str
    lam: float
    order: MajorOrder
    entropy_a: float
    entropy_b: float
    tvd: float
    tail_a: float
    tail_b: float

    def format(self) -> str:
        lines = [
            f"A = {self.spec_a}",
            f"B = {self.spec_b}",
            f"lambda = {self.lam:.10g} ({squeezing_db(self.lam):.4f} dB)",
            f"relation: A {self.order.value.replace('_', ' ')} B",
            f"entropy A = {self.entropy_a:.10g} nats",
            f"entropy B = {self.entropy_b:.10g} nats",
            f"total variation distance = {self.tvd:.10g}",
            f"truncation tails: A <= {self.tail_a:.3g}, B <= {self.tail_b:.3g}",
        ]
        return "\n".join(lines)


def run_compare(
    spec_a: str | SchemeSpec,
    spec_b: str | SchemeSpec,
    lam: float,
    trunc_tol: float = 1e-12,
) -> CompareReport:
    """Compare the spectra of two schemes at a common squeezing."""
    sa = parse_scheme(spec_a) if isinstance(spec_a, str) else spec_a
    sb = parse_scheme(spec_b) if isinstance(spec_b, str) else spec_b
    pa = scheme_spectrum(lam, sa, trunc_tol)
    pb = scheme_spectrum(lam, sb, trunc_tol)
    return CompareReport(
        spec_a=serialize_scheme(sa),
        spec_b=serialize_scheme(sb),
        lam=lam,
        order=compare(pa, pb, _COMPARE_TOL),
        entropy_a=shannon_entropy(pa),
        entropy_b=shannon_entropy(pb),
        tvd=total_variation_distance(pa, pb),
        tail_a=pa.tail_bound,
        tail_b=pb.tail_bound,
    )


# ---------------------------------------------------------------------------
# serialization


def _fmt(v) -> str:
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.10g}"
    return str(v)


def write_csv(result: ScanResult) -> str:
    """CSV with 10-significant-digit floats, LF line endings."""
    buf = io.StringIO()
    buf.write(",".join(result.columns) + "\n")
    for row in result.rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def write_json(result: ScanResult) -> str:
    payload = {
        "mode": result.mode,
        "grid": {
            "eta_range": list(result.grid.eta_range),
            "lambda_range": list(result.grid.lambda_range),
            "kmax": result.grid.kmax,
            "trunc_tol": result.grid.trunc_tol,
        },
        "metadata": result.metadata,
        "columns": list(result.columns),
        "rows": [
            [None if isinstance(v, float) and math.isinf(v) else v for v in row]
            for row in result.rows
        ],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def write_matrix(result: ScanResult) -> str:
    """gnuplot-style matrix: header row of eta, rows of lambda + payloads.

    Uses the first payload column (index 3 of each row).
    """
    etas = result.grid.etas()
    lambdas = result.grid.lambdas()
    n_l = lambdas.size
    buf = io.StringIO()
    buf.write("# " + result.mode + " payload matrix; rows: lambda, columns: eta\n")
    buf.write("lambda\\eta " + " ".join(_fmt(float(e)) for e in etas) + "\n")
    for j, lam in enumerate(lambdas):
        vals = [result.rows[i * n_l + j][3] for i in range(etas.size)]
        buf.write(_fmt(float(lam)) + " " + " ".join(_fmt(v) for v in vals) + "\n")
    return buf.getvalue()
