"""Schmidt spectra of locally filtered two-mode squeezed vacuum.

The Schmidt coefficients of (F (x) G)|Psi_lam> depend only on the thermal
weights and the two amplitude sequences: entry n is proportional to
tau_n |f_n|^2 |g_n|^2. Spectra are therefore computed directly from
amplitude products; no two-mode state tensor is ever formed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DivergentState, SpecSyntaxError, TruncationTooCoarse, ZeroState
from .fock_core import ProbVector, shannon_entropy, thermal_entry_count
from .filter_ops import (
    FilterOp,
    concat,
    ideal_addsub,
    identity_op,
    is_fock_orthogonal,
    parse_filter_spec,
    serialize_filter_spec,
)

__all__ = [
    "DualSingle",
    "SingleMulti",
    "General",
    "SchemeSpec",
    "parse_scheme",
    "serialize_scheme",
    "filtered_schmidt",
    "filtered_spectrum_fock_order",
    "normalization_constant",
    "scheme_spectrum",
    "reduce_to_single_mode",
    "entropy_of_entanglement",
]

_MAX_WINDOW = 1 << 20


@dataclass(frozen=True)
class DualSingle:
    """Add (positive) or subtract (negative) photons once on each mode."""

    k: int
    l: int


@dataclass(frozen=True)
class SingleMulti:
    """Sequence of additions/subtractions on mode 1; index 0 acts first."""

    kvec: tuple[int, ...]

    def __post_init__(self):
        if len(self.kvec) == 0:
            raise ValueError("kvec must be non-empty")
        object.__setattr__(self, "kvec", tuple(int(k) for k in self.kvec))


@dataclass(frozen=True, eq=False)
class General:
    """Arbitrary filtration pair; f acts on mode 1, g on mode 2."""

    f: FilterOp
    g: FilterOp


SchemeSpec = DualSingle | SingleMulti | General


def parse_scheme(text: str, N: int = 64) -> SchemeSpec:
    """Parse ``dual(k,l)``, ``multi(k1,k2,...)`` or ``general(f;g)``."""
    s = text.strip()
    head, sep, rest = s.partition("(")
    if not sep or not s.endswith(")"):
        raise SpecSyntaxError(f"malformed scheme spec {text!r}", 0)
    body = rest[:-1]
    head = head.strip()
    if head == "dual":
        parts = body.split(",")
        if len(parts) != 2:
            raise SpecSyntaxError("dual(k,l) takes exactly two integers", len(head) + 1)
        try:
            return DualSingle(int(parts[0]), int(parts[1]))
        except ValueError:
            raise SpecSyntaxError(f"bad integer in {body!r}", len(head) + 1) from None
    if head == "multi":
        try:
            kvec = tuple(int(p) for p in body.split(","))
        except ValueError:
            raise SpecSyntaxError(f"bad integer in {body!r}", len(head) + 1) from None
        return SingleMulti(kvec)
    if head == "general":
        if ";" not in body:
            raise SpecSyntaxError("general(f;g) needs two ';'-separated operator specs", len(head) + 1)
        f_text, _, g_text = body.partition(";")
        return General(parse_filter_spec(f_text, N), parse_filter_spec(g_text, N))
    raise SpecSyntaxError(f"unknown scheme {head!r}", 0)


def serialize_scheme(spec: SchemeSpec) -> str:
    if isinstance(spec, DualSingle):
        return f"dual({spec.k},{spec.l})"
    if isinstance(spec, SingleMulti):
        return f"multi({','.join(str(k) for k in spec.kvec)})"
    return f"general({serialize_filter_spec(spec.f)};{serialize_filter_spec(spec.g)})"


# ---------------------------------------------------------------------------
# spectra


def _joint_log_weights(lam: float, f: FilterOp, g: FilterOp) -> np.ndarray:
    window = min(len(f), len(g))
    if lam == 0.0:
        logw = np.full(window, -np.inf)
        logw[0] = 0.0
    else:
        logw = np.arange(window) * math.log(lam)
    return logw + 2.0 * (f.log_amplitudes[:window] + g.log_amplitudes[:window])


def _weights_and_tail(lam: float, f: FilterOp, g: FilterOp, trunc_tol: float):
    """Window weights (max-scaled), their sum, and a relative tail estimate.

    The trailing decay is judged on log weights so that deep-tail underflow
    never corrupts the ratio.
    """
    logw = _joint_log_weights(lam, f, g)
    top = logw.max()
    if top == -np.inf:
        raise ZeroState("filtration annihilates every Fock component on the window")
    w = np.exp(logw - top)
    total = math.fsum(w)
    if lam == 0.0:
        return w, total, 0.0

    sup = np.flatnonzero(logw > -np.inf)
    log_steps = [
        logw[j] - logw[i]
        for i, j in zip(sup[-9:-1], sup[-8:])
        if j == i + 1
    ]
    if not log_steps:
        raise TruncationTooCoarse("window too short to estimate the spectral tail")
    top_step = max(log_steps)
    if top_step >= 0.0:
        raise DivergentState(
            "trailing spectral weights are non-decreasing: either the filtered "
            "state has no finite normalization (e.g. amplifier gain too large "
            "for this squeezing) or the window is far too short"
        )
    ratio = math.exp(top_step)
    tail = math.exp(logw[sup[-1]] - top) * ratio / (1.0 - ratio)
    rel = tail / total
    if rel > trunc_tol:
        raise TruncationTooCoarse(
            f"estimated relative tail {rel:.3g} exceeds trunc_tol {trunc_tol:g}"
        )
    return w, total, rel


def filtered_spectrum_fock_order(
    lam: float, f: FilterOp, g: FilterOp, trunc_tol: float = 1e-12
) -> ProbVector:
    """Filtered Schmidt spectrum in Fock-index order (entry n for source |n>)."""
    if not (0.0 <= lam < 1.0):
        raise ValueError(f"lambda must lie in [0, 1), got {lam}")
    if not (is_fock_orthogonal(f) and is_fock_orthogonal(g)):
        raise ValueError("filtered spectra require Fock-orthogonal operators")
    w, total, rel = _weights_and_tail(lam, f, g, trunc_tol)
    return ProbVector(w / total, tail_bound=rel)


def filtered_schmidt(
    lam: float, f: FilterOp, g: FilterOp, trunc_tol: float = 1e-12
) -> ProbVector:
    """Schmidt spectrum of the filtered TMSV, sorted descending.

    Entry n of the underlying weights is tau_n |f_n|^2 |g_n|^2, renormalized
    over the window; ``tail_bound`` bounds the relative mass the window
    omits (estimated from the trailing geometric decay).
    """
    nat = filtered_spectrum_fock_order(lam, f, g, trunc_tol)
    return ProbVector(np.sort(nat.values)[::-1], tail_bound=nat.tail_bound)


def normalization_constant(lam: float, f: FilterOp, g: FilterOp) -> float:
    """sum_n tau_n |f_n|^2 |g_n|^2 over the operators' window.

    For kraus-kind operators (with their success-probability prefactors)
    this is the heralding probability of the filtration. For ideal,
    unbounded operators (creation/annihilation, photon-number, nla) the
    value is a plain normalization constant, not a probability.
    """
    if not (0.0 <= lam < 1.0):
        raise ValueError(f"lambda must lie in [0, 1), got {lam}")
    logw = _joint_log_weights(lam, f, g)
    top = logw.max()
    if top == -np.inf:
        raise ZeroState("filtration annihilates every Fock component on the window")
    if lam > 0.0:
        sup = np.flatnonzero(logw > -np.inf)
        if sup.size >= 2 and logw[sup[-1]] >= logw[sup[-2]]:
            raise DivergentState("normalization series is not decaying on the window")
    return (1.0 - lam) * math.exp(top) * math.fsum(np.exp(logw - top))


# ---------------------------------------------------------------------------
# schemes


def _multi_op(kvec: tuple[int, ...], window: int) -> FilterOp:
    # build everything with enough headroom that intermediate target shifts
    # never run off the outer operator's window
    headroom = int(max(0, np.cumsum(kvec).max(initial=0)))
    length = window + headroom
    op = ideal_addsub(kvec[0], length)
    for k in kvec[1:]:
        op = concat(ideal_addsub(k, length), op)
    return op


def scheme_spectrum(lam: float, spec: SchemeSpec, trunc_tol: float = 1e-12) -> ProbVector:
    """Schmidt spectrum of a scheme, sorted descending.

    Dual and multi schemes rebuild their ideal operators on successively
    doubled windows until the spectral tail estimate drops below trunc_tol.
    General schemes use the supplied operators as-is (their window is the
    caller's responsibility).
    """
    if isinstance(spec, General):
        return filtered_schmidt(lam, spec.f, spec.g, trunc_tol)

    window = max(thermal_entry_count(lam, trunc_tol), 32)
    while True:
        try:
            if isinstance(spec, DualSingle):
                f = ideal_addsub(spec.k, window)
                g = ideal_addsub(spec.l, window)
            else:
                f = _multi_op(spec.kvec, window)
                g = identity_op(len(f))
            return filtered_schmidt(lam, f, g, trunc_tol)
        except (TruncationTooCoarse, DivergentState):
            if window >= _MAX_WINDOW:
                raise
            window *= 2


def reduce_to_single_mode(
    k_mode1: tuple[int, ...] | list[int], l_mode2: tuple[int, ...] | list[int]
) -> tuple[int, ...]:
    """Map a dual-mode add/sub sequence to an equivalent mode-1 sequence.

    Each mode-2 operation B(l) adjacent to the TMSV converts to A(-l) acting
    first on mode 1; peeling the mode-2 stack innermost-first therefore
    yields the mode-2 list reversed and sign-flipped, followed by the
    untouched mode-1 list.
    """
    return tuple(-int(l) for l in reversed(tuple(l_mode2))) + tuple(
        int(k) for k in k_mode1
    )


def entropy_of_entanglement(lam: float, spec: SchemeSpec, trunc_tol: float = 1e-12) -> float:
    """Shannon entropy (nats) of the scheme's Schmidt spectrum."""
    return shannon_entropy(scheme_spectrum(lam, spec, trunc_tol))
