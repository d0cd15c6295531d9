"""Truncated photon-number probability vectors and their basic functionals.

Everything here is diagonal in the Fock basis: a state is represented by
its eigenvalue (Schmidt-coefficient) sequence alone. Vectors are stored in
double precision; entropies and distances accumulate with compensated
summation so that 10^4-point parameter sweeps stay reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ProbVector",
    "TmsvParams",
    "thermal_eigenvalues",
    "thermal_entry_count",
    "squeezing_db",
    "mean_photon_number",
    "shannon_entropy",
    "binary_entropy",
    "total_variation_distance",
]

# Entries slightly negative from floating-point cancellation are clamped;
# anything more negative is a genuine error.
_NEG_CLAMP = 1e-14
_NORM_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class ProbVector:
    """Truncated, non-negative, normalized-up-to-tail probability vector.

    ``values[n]`` is the weight of Fock index ``n`` (or of the n-th spectral
    slot when sorted); ``tail_bound`` upper-bounds the total mass omitted by
    truncation. Invariants: every entry >= 0, sum(values) <= 1 and
    sum(values) + tail_bound >= 1 - 1e-12.
    """

    values: np.ndarray
    tail_bound: float = 0.0
    label: str | None = None

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float).copy()
        if vals.ndim != 1 or vals.size == 0:
            raise ValueError("ProbVector needs a non-empty 1-d sequence")
        lo = vals.min()
        if lo < -_NEG_CLAMP:
            raise ValueError(f"negative probability {lo}")
        np.clip(vals, 0.0, None, out=vals)
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)
        if not (self.tail_bound >= 0.0):
            raise ValueError("tail_bound must be non-negative")
        total = math.fsum(vals)
        if total > 1.0 + _NORM_SLACK:
            raise ValueError(f"probabilities sum to {total} > 1")
        if total + self.tail_bound < 1.0 - _NORM_SLACK:
            raise ValueError(
                f"mass {total} + tail bound {self.tail_bound} falls short of 1"
            )

    def __len__(self) -> int:
        return self.values.size

    @property
    def total(self) -> float:
        return math.fsum(self.values)

    def sorted_desc(self) -> np.ndarray:
        """Entries sorted in non-increasing order (ties keep index order)."""
        return np.sort(self.values)[::-1]


@dataclass(frozen=True)
class TmsvParams:
    """Two-mode squeezed vacuum parameterized by lambda = tanh^2(r)."""

    lam: float

    def __post_init__(self):
        if not (0.0 <= self.lam < 1.0):
            raise ValueError(f"lambda must lie in [0, 1), got {self.lam}")

    @property
    def r(self) -> float:
        return math.atanh(math.sqrt(self.lam))

    @property
    def squeezing_db(self) -> float:
        return squeezing_db(self.lam)

    @property
    def mean_photons(self) -> float:
        return self.lam / (1.0 - self.lam)


def thermal_entry_count(lam: float, trunc_tol: float) -> int:
    """Number of geometric entries needed so the omitted tail is <= trunc_tol."""
    if not (0.0 <= lam < 1.0):
        raise ValueError(f"lambda must lie in [0, 1), got {lam}")
    if not trunc_tol > 0.0:
        raise ValueError("trunc_tol must be positive")
    if lam == 0.0:
        return 1
    count = max(1, math.ceil(math.log(trunc_tol) / math.log(lam)))
    while lam**count > trunc_tol:  # guard the ceil against rounding
        count += 1
    return count


def thermal_eigenvalues(lam: float, trunc_tol: float = 1e-12) -> ProbVector:
    """Eigenvalues (1-lam)*lam^n of the reduced thermal state, truncated.

    The tail mass of a geometric distribution is exactly lam^(count), which
    becomes the vector's ``tail_bound``.
    """
    count = thermal_entry_count(lam, trunc_tol)
    n = np.arange(count)
    vals = (1.0 - lam) * lam**n
    tail = 0.0 if lam == 0.0 else float(lam**count)
    return ProbVector(vals, tail_bound=tail, label=f"thermal(lam={lam:g})")


def squeezing_db(lam: float) -> float:
    """Squeezing in dB: (20/ln10) * atanh(sqrt(lambda))."""
    if not (0.0 <= lam < 1.0):
        raise ValueError(f"lambda must lie in [0, 1), got {lam}")
    return (20.0 / math.log(10.0)) * math.atanh(math.sqrt(lam))


def mean_photon_number(p: ProbVector) -> float:
    """Sum of n * p_n over the stored window.

    This is a lower estimate of the untruncated mean: the omitted tail
    carries weight at higher n that is not accounted for.
    """
    n = np.arange(len(p), dtype=float)
    return math.fsum(n * p.values)


def shannon_entropy(p: ProbVector) -> float:
    """Shannon entropy -sum p_n ln p_n in nats, with 0 ln 0 = 0."""
    vals = p.values[p.values > 0.0]
    return -math.fsum(vals * np.log(vals))


def binary_entropy(x: float) -> float:
    """h2(x) = -x ln x - (1-x) ln(1-x) on [0, 1], in nats."""
    if not (0.0 <= x <= 1.0):
        raise ValueError(f"binary entropy argument must lie in [0, 1], got {x}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log(x) - (1.0 - x) * math.log(1.0 - x)


def total_variation_distance(p: ProbVector, q: ProbVector) -> float:
    """(1/2) sum |p_n - q_n|, the shorter vector zero-padded."""
    a, b = p.values, q.values
    if a.size < b.size:
        a = np.pad(a, (0, b.size - a.size))
    elif b.size < a.size:
        b = np.pad(b, (0, a.size - b.size))
    return 0.5 * math.fsum(np.abs(a - b))
