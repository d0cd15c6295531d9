"""Exact-arithmetic certificates relating k-photon to single-photon dual
addition.

The spectrum of the TMSV with k photons added on each mode has entries
proportional to lam^n C(n+k, k)^2. A lower-triangular circulant matrix maps
the k=1 spectrum onto the k one; its generating column is built from the
coefficients c_n of the power series

    normalization(k) * (1 - lam)^3 / ((1 + lam) lam) = 1/lam + sum c_n lam^n,

extracted here by exact truncated-series arithmetic (big-integer binomials,
series multiplication and division) rather than symbolic differentiation.
Non-negativity of the c_n renders the matrix column-stochastic, which is a
proof of the majorization relation; the scanner below only ever reports the
absence of negative coefficients up to a cutoff, never the full conjecture.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import gammaln

from .errors import TruncationTooCoarse
from .fock_core import ProbVector

__all__ = [
    "RationalSeries",
    "c_kk_series",
    "q_kk",
    "verify_kk_expansion",
    "conjecture_scan",
    "verify_d_kk",
]


@dataclass(frozen=True)
class RationalSeries:
    """Exact power-series coefficients starting at ``lowest_power``."""

    coeffs: tuple[Fraction, ...]
    lowest_power: int

    def __getitem__(self, power: int) -> Fraction:
        idx = power - self.lowest_power
        if idx < 0 or idx >= len(self.coeffs):
            raise IndexError(f"power {power} outside the computed range")
        return self.coeffs[idx]

    def __len__(self) -> int:
        return len(self.coeffs)


def _c_ints(k: int, N: int) -> list[int]:
    """[c_-1, c_0, ..., c_(N-1)] as exact integers.

    Multiply the binomial-square series by (1-lam)^3, divide by (1+lam);
    both steps preserve integrality.
    """
    length = N + 1
    a = [math.comb(n + k, k) ** 2 for n in range(length)]
    b = []
    for n in range(length):
        s = a[n]
        if n >= 1:
            s -= 3 * a[n - 1]
        if n >= 2:
            s += 3 * a[n - 2]
        if n >= 3:
            s -= a[n - 3]
        b.append(s)
    e = []
    for n in range(length):
        e.append(b[n] - (e[n - 1] if n >= 1 else 0))
    return e


def c_kk_series(k: int, N: int) -> RationalSeries:
    """Series coefficients c_-1 .. c_(N-1) for the k-vs-1 circulant column.

    c_-1 is exactly 1 for every k; the remaining coefficients grow like
    n^(2k-3) and are conjectured non-negative.
    """
    if k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    if N < 1:
        raise ValueError("need at least one coefficient")
    e = _c_ints(k, N)
    return RationalSeries(tuple(Fraction(v) for v in e), lowest_power=-1)


def q_kk(lam: float, k: int, N: int) -> ProbVector:
    """Spectrum lam^n C(n+k, k)^2 / N_kk of dual k-photon addition, Fock order.

    k = 0 reduces to the thermal spectrum.
    """
    if not (0.0 <= lam < 1.0):
        raise ValueError(f"lambda must lie in [0, 1), got {lam}")
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    if lam == 0.0:
        return ProbVector(np.array([1.0]), tail_bound=0.0, label=f"q^({k}{k})(0)")
    if k == 0:
        n = np.arange(N)
        return ProbVector(
            (1.0 - lam) * lam**n, tail_bound=float(lam**N), label=f"q^(00)({lam:g})"
        )
    n = np.arange(N, dtype=float)
    logw = n * math.log(lam) + 2.0 * (
        gammaln(n + k + 1.0) - gammaln(k + 1.0) - gammaln(n + 1.0)
    )
    top = logw.max()
    w = np.exp(logw - top)
    total = math.fsum(w)
    if w[-1] == 0.0:
        tail = 0.0
    else:
        ratio = w[-1] / w[-2] if N >= 2 else lam
        if ratio >= 1.0:
            raise TruncationTooCoarse("window ends before the spectral peak")
        tail = w[-1] * ratio / (1.0 - ratio) / total
    return ProbVector(w / total, tail_bound=tail, label=f"q^({k}{k})({lam:g})")


def verify_kk_expansion(k: int, N: int) -> bool:
    """Exact check of C(n+k+1, k)^2 = sum_(i=0)^(n+1) c_(n-i) (i+1)^2, n < N."""
    e = _c_ints(k, N + 1)

    def c(j: int) -> int:  # c_j with j >= -1
        return e[j + 1]

    squares = [(i + 1) ** 2 for i in range(N + 2)]
    for n in range(N):
        rhs = sum(c(n - i) * squares[i] for i in range(n + 2))
        if math.comb(n + k + 1, k) ** 2 != rhs:
            return False
    return True


def conjecture_scan(k: int, N: int) -> tuple[bool, int | None]:
    """Scan c_0 .. c_(N-1) for a strictly negative coefficient.

    Returns (True, None) when no negative coefficient exists below the
    cutoff; this is evidence for, never a proof of, non-negativity.
    """
    e = _c_ints(k, N)
    for n, v in enumerate(e[1:]):
        if v < 0:
            return False, n
    return True, None


def _n_kk_numeric(lam: float, k: int) -> float:
    """N_kk = sum lam^n C(n+k,k)^2, summed until the term is negligible."""
    total = 0.0
    term_log = 0.0
    n = 0
    while True:
        term = math.exp(
            n * math.log(lam)
            + 2.0 * (gammaln(n + k + 1.0) - gammaln(k + 1.0) - gammaln(n + 1.0))
        )
        total += term
        n += 1
        if n > 16 and term < 1e-18 * total:
            return total


def verify_d_kk(lam: float, k: int, N: int, tol: float = 1e-10) -> bool:
    """Check that the circulant built from the c series maps q^(11) to q^(kk).

    The column entries are (lam N_11 / N_kk) * c_(j-1) lam^(j-1); the check
    passes when the matrix-vector image matches the closed-form spectrum to
    ``tol`` and the column is non-negative with sum 1 up to ``tol``.
    """
    if not (0.0 < lam < 1.0):
        raise ValueError(f"lambda must lie in (0, 1), got {lam}")
    e = _c_ints(k, N)
    n11 = (1.0 + lam) / (1.0 - lam) ** 3
    nkk = _n_kk_numeric(lam, k)
    scale = lam * n11 / nkk
    j = np.arange(N, dtype=float)
    d = scale * np.array(e, dtype=float)[:N] * lam ** (j - 1.0)

    if N >= 8 and d[-1] > 0.0:
        trailing = d[-6:]
        ratios = trailing[1:] / trailing[:-1]
        if (ratios >= 1.0).any():
            raise TruncationTooCoarse("circulant column not yet decaying; enlarge N")
        r = ratios.max()
        if d[-1] * r / (1.0 - r) > tol:
            raise TruncationTooCoarse("circulant column tail exceeds the tolerance")

    q11 = q_kk(lam, 1, N)
    qkk = q_kk(lam, k, N)
    image = np.convolve(d, q11.values)[:N]
    if np.max(np.abs(image - qkk.values)) > tol:
        return False
    if d.min() < -1e-14:
        return False
    return abs(math.fsum(d) - 1.0) <= tol
