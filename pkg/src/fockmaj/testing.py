"""Random operator generators for the property suites.

The spectral generators continue their random structure constantly past a
64-entry window: the operators they model must be amplitude-ordered on the
whole ladder, not just on a truncation window, for the majorization
guarantees to apply (an amplitude sequence that drops to zero at the window
edge is a projector, and projectors concentrate rather than spread).
"""

from __future__ import annotations

import numpy as np

from .filter_ops import NO_TARGET, FilterOp
from .fock_core import thermal_entry_count

__all__ = [
    "random_fock_preserving",
    "random_fock_orthogonal_preserving",
    "random_fock_orthogonal",
    "random_amplifying",
    "random_joint_amplifying_pair",
]

STRUCTURE_WINDOW = 64


def _random_log_amplitudes(rng: np.random.Generator, N: int, zeros: bool) -> np.ndarray:
    la = rng.normal(0.0, 1.0, size=N)
    if zeros and N > 2:
        kill = rng.random(N) < 0.08
        kill[rng.integers(0, N)] = False  # keep the support non-empty
        la[kill] = -np.inf
    return la


def random_fock_preserving(rng: np.random.Generator, N: int) -> FilterOp:
    """Random non-decreasing targets, random non-negative amplitudes."""
    steps = rng.integers(0, 3, size=N)
    targets = np.cumsum(steps) + rng.integers(0, 4)
    la = _random_log_amplitudes(rng, N, zeros=True)
    targets = np.where(la > -np.inf, targets, NO_TARGET)
    return FilterOp(la, targets)


def random_fock_orthogonal_preserving(rng: np.random.Generator, N: int) -> FilterOp:
    """Strictly increasing targets on the support (orthogonal + preserving)."""
    steps = rng.integers(1, 3, size=N)
    targets = np.cumsum(steps) + rng.integers(0, 4)
    la = _random_log_amplitudes(rng, N, zeros=True)
    targets = np.where(la > -np.inf, targets, NO_TARGET)
    return FilterOp(la, targets)


def random_fock_orthogonal(rng: np.random.Generator, N: int) -> FilterOp:
    """Random injective (not necessarily monotone) targets."""
    targets = rng.permutation(2 * N)[:N]
    la = _random_log_amplitudes(rng, N, zeros=False)
    return FilterOp(la, targets)


def random_amplifying(rng: np.random.Generator, N: int) -> FilterOp:
    """Non-decreasing amplitudes, constant past the structure window."""
    grow = np.zeros(N)
    w = min(STRUCTURE_WINDOW, N)
    grow[:w] = rng.exponential(0.05, size=w)
    la = np.cumsum(grow)
    return FilterOp(la - la.max(), np.arange(N))


def random_joint_amplifying_pair(
    rng: np.random.Generator, lam: float, trunc_tol: float
) -> tuple[FilterOp, FilterOp]:
    """A Fock-orthogonal pair whose amplitude product is non-decreasing.

    Individually the two operators wiggle (one may even decay), but their
    log-amplitude sum is a non-decreasing walk, frozen beyond the structure
    window; the pair covers the full spectral window for ``lam`` at
    ``trunc_tol`` so downstream tail estimates stay honest.
    """
    N = thermal_entry_count(lam, trunc_tol) + 16
    w = min(STRUCTURE_WINDOW, N)
    product = np.zeros(N)
    product[:w] = rng.exponential(0.08, size=w)
    product = np.cumsum(product)
    split = np.zeros(N)
    split[:w] = rng.normal(0.0, 0.4, size=w)
    split = np.cumsum(split)
    split[w:] = split[w - 1] if w >= 1 else 0.0
    f_log = 0.5 * product + split
    g_log = 0.5 * product - split
    f = FilterOp(f_log - f_log.max(), np.arange(N))
    g = FilterOp(g_log - g_log.max(), np.arange(N))
    return f, g
