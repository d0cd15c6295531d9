"""Majorization comparison and the constructive circulant certificate.

The comparison operation uses the standard partial-sum criterion on
descending-sorted entries; the lower-triangular circulant matrix built from
a generating column is kept as a separate, constructive certificate path
(a column-stochastic D with sigma = D tau proves tau majorizes sigma).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import TruncationTooCoarse, ZeroNormalization
from .fock_core import ProbVector

__all__ = [
    "MajorOrder",
    "CirculantStochastic",
    "majorizes",
    "compare",
    "build_circulant_d",
    "apply_circulant",
]

# Generating-column entries within this of zero are round-off, not genuine
# negativity, and are clamped.
_STOCHASTIC_NEG_TOL = 1e-14
_STOCHASTIC_SUM_TOL = 1e-10


class MajorOrder(enum.Enum):
    MAJORIZES = "majorizes"
    MAJORIZED_BY = "majorized_by"
    EQUIVALENT = "equivalent"
    INCOMPARABLE = "incomparable"

    def mirror(self) -> "MajorOrder":
        if self is MajorOrder.MAJORIZES:
            return MajorOrder.MAJORIZED_BY
        if self is MajorOrder.MAJORIZED_BY:
            return MajorOrder.MAJORIZES
        return self


@dataclass(frozen=True, eq=False)
class CirculantStochastic:
    """Lower-triangular circulant matrix D_ij = d_(i-j), d_n = 0 for n < 0.

    Column sums all equal sum(d) by structure; the matrix is column-
    stochastic exactly when d is a probability vector. Entries in
    (-1e-14, 0) are treated as round-off and clamped to zero; anything more
    negative marks the matrix non-stochastic (used to witness where a
    certificate genuinely fails).
    """

    d: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.d, dtype=float).copy()
        if d.ndim != 1 or d.size == 0:
            raise ValueError("generating column must be a non-empty 1-d sequence")
        tiny = (d < 0.0) & (d > -_STOCHASTIC_NEG_TOL)
        d[tiny] = 0.0
        d.flags.writeable = False
        object.__setattr__(self, "d", d)

    def __len__(self) -> int:
        return self.d.size

    @property
    def column_sum(self) -> float:
        return math.fsum(self.d)

    @property
    def is_stochastic(self) -> bool:
        if (self.d < 0.0).any():
            return False
        return abs(self.column_sum - 1.0) <= _STOCHASTIC_SUM_TOL


def _padded_cumsums(p: ProbVector, q: ProbVector) -> tuple[np.ndarray, np.ndarray]:
    a = np.cumsum(np.sort(p.values)[::-1])
    b = np.cumsum(np.sort(q.values)[::-1])
    n = max(a.size, b.size)
    if a.size < n:
        a = np.pad(a, (0, n - a.size), mode="edge")
    if b.size < n:
        b = np.pad(b, (0, n - b.size), mode="edge")
    return a, b


def _guard(p: ProbVector, q: ProbVector, tol: float) -> None:
    lost = p.tail_bound + q.tail_bound
    if tol < lost:
        raise TruncationTooCoarse(
            f"comparison tolerance {tol:g} is below the combined truncation "
            f"tail bounds {lost:g}; the verdict could be a truncation artifact"
        )


def majorizes(p: ProbVector, q: ProbVector, tol: float = 1e-10) -> bool:
    """True iff every descending partial sum of p dominates q's, within tol.

    Refuses to answer (TruncationTooCoarse) when tol is smaller than the
    combined tail bounds, since omitted mass could flip the verdict.
    """
    _guard(p, q, tol)
    a, b = _padded_cumsums(p, q)
    return bool((a >= b - tol).all())


def compare(p: ProbVector, q: ProbVector, tol: float = 1e-10) -> MajorOrder:
    """Mutual majorization verdict; Equivalent means both directions hold."""
    _guard(p, q, tol)
    a, b = _padded_cumsums(p, q)
    forward = bool((a >= b - tol).all())
    backward = bool((b >= a - tol).all())
    if forward and backward:
        return MajorOrder.EQUIVALENT
    if forward:
        return MajorOrder.MAJORIZES
    if backward:
        return MajorOrder.MAJORIZED_BY
    return MajorOrder.INCOMPARABLE


def build_circulant_d(lam: float, amplitudes: np.ndarray, N: int | None = None) -> CirculantStochastic:
    """Generating column d_n = lam^n (|phi_n|^2 - |phi_(n-1)|^2) / Ncal.

    ``amplitudes`` are the operator's Fock-state norms |phi_n| on the
    window; Ncal = sum tau_n |phi_n|^2 over the same window. The column sums
    to 1 (up to the window's omitted tail), and is non-negative exactly when
    the amplitudes are non-decreasing: that is the constructive certificate
    that the filtered spectrum is majorized by the thermal one.
    """
    if not (0.0 <= lam < 1.0):
        raise ValueError(f"lambda must lie in [0, 1), got {lam}")
    amps = np.asarray(amplitudes, dtype=float)
    if N is not None:
        amps = amps[:N]
    if amps.size == 0:
        raise ValueError("empty amplitude window")
    if not np.isfinite(amps).all():
        raise FloatingPointError(
            "amplitude overflow on the window; rebuild from log amplitudes "
            "or rescale before calling"
        )
    if (amps < 0).any():
        raise ValueError("amplitudes must be non-negative")
    phi2 = amps * amps
    n = np.arange(amps.size)
    lam_pow = lam**n.astype(float)
    ncal = math.fsum((1.0 - lam) * lam_pow * phi2)
    if ncal <= 0.0 or not math.isfinite(ncal):
        raise ZeroNormalization(f"window normalization underflowed (N={ncal!r})")
    diffs = phi2 - np.concatenate(([0.0], phi2[:-1]))
    return CirculantStochastic(lam_pow * diffs / ncal)


def apply_circulant(D: CirculantStochastic, p: ProbVector | np.ndarray) -> np.ndarray:
    """Row i of D p: sum_(j<=i) d_(i-j) p_j, evaluated on p's window."""
    vals = p.values if isinstance(p, ProbVector) else np.asarray(p, dtype=float)
    return np.convolve(D.d, vals)[: vals.size]
