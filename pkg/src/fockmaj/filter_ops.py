"""Filtration operators on the Fock ladder.

An operator is represented canonically by the norms it gives to Fock
states (its amplitude sequence) plus, when it maps Fock states onto Fock
states, the target-index map. The orthonormal image vectors themselves are
never materialized: every predicate and theorem in scope depends only on
the amplitudes and the orthogonality/ordering structure.

Amplitudes are stored as logarithms (``-inf`` marking a zero amplitude) so
that factorial and exponential growth never overflows internally; they are
exponentiated on access.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .errors import SpecSyntaxError

__all__ = [
    "FilterOp",
    "make_standard",
    "identity_op",
    "ideal_addsub",
    "parse_filter_spec",
    "serialize_filter_spec",
    "is_fock_orthogonal",
    "is_fock_amplifying",
    "fock_amplifying_threshold",
    "is_fock_preserving",
    "jointly_fock_amplifying",
    "concat",
]

# Non-strict amplitude comparisons get this much relative slack so that
# round-off ties still count as "<=".
_REL_TOL = 1e-12

NO_TARGET = -1  # sentinel for an absent target (zero-amplitude column)

STANDARD_KINDS = (
    "creation",
    "annihilation",
    "photon-number",
    "nla",
    "kraus-add",
    "kraus-sub",
    "identity",
    "custom",
)


@dataclass(frozen=True, eq=False)
class FilterOp:
    """Canonical (amplitudes, targets) form of a filtration operator.

    ``log_amplitudes[n]`` is ln||F|n>|| (-inf when F kills |n>).
    ``targets[n]`` is the Fock index F maps |n> onto, or NO_TARGET where the
    amplitude vanishes; ``targets is None`` for operators specified by
    amplitudes alone.
    """

    log_amplitudes: np.ndarray
    targets: np.ndarray | None = None
    kind: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        la = np.asarray(self.log_amplitudes, dtype=float).copy()
        if la.ndim != 1 or la.size == 0:
            raise ValueError("log_amplitudes must be a non-empty 1-d sequence")
        if np.isnan(la).any() or (la == np.inf).any():
            raise ValueError("log_amplitudes must be finite or -inf")
        la.flags.writeable = False
        object.__setattr__(self, "log_amplitudes", la)
        if self.targets is not None:
            tg = np.asarray(self.targets, dtype=np.int64).copy()
            if tg.shape != la.shape:
                raise ValueError("targets must match amplitude length")
            support = la > -np.inf
            if (tg[support] < 0).any():
                raise ValueError("missing target on the support")
            if (tg[~support] != NO_TARGET).any():
                raise ValueError("zero-amplitude columns must carry NO_TARGET")
            tg.flags.writeable = False
            object.__setattr__(self, "targets", tg)

    def __len__(self) -> int:
        return self.log_amplitudes.size

    @property
    def amplitudes(self) -> np.ndarray:
        """||F|n>|| as floats; entries overflow to +inf past ~1e308."""
        with np.errstate(over="ignore"):
            return np.exp(self.log_amplitudes)

    @property
    def amplitude_overflow(self) -> bool:
        """True when some amplitude exceeds double range on access."""
        return bool((self.log_amplitudes > 709.0).any())

    @property
    def support(self) -> np.ndarray:
        return self.log_amplitudes > -np.inf


def _log_ratio_factorials(n: np.ndarray, k: int, rising: bool) -> np.ndarray:
    """log of (n+k)!/n! (rising) or n!/(n-k)! for n>=k (falling)."""
    n = n.astype(float)
    if rising:
        return gammaln(n + k + 1.0) - gammaln(n + 1.0)
    return gammaln(n + 1.0) - gammaln(n - k + 1.0)


def make_standard(kind: str, params: dict | None = None, N: int = 64) -> FilterOp:
    """Build a standard operator on the window [0, N).

    Kinds and parameters:

    * ``creation`` (k>=0): sqrt((n+k)!/n!), targets n+k
    * ``annihilation`` (k>=0): sqrt(n!/(n-k)!) for n>=k, targets n-k
    * ``photon-number``: n, targets n
    * ``nla`` (g>=0): g^n, targets n
    * ``kraus-add`` (g>=1, k>=0): sqrt((g-1)^k/(g k!)) g^(-n/2) sqrt((n+k)!/n!),
      targets n+k; at g=1 the vanishing success-probability prefactor is
      dropped and the heralded limit (ideal creation) is returned
    * ``kraus-sub`` (0<eta<=1, k>=0): sqrt((1-eta)^k/k!) eta^(n/2)
      sqrt(n!/(n-k)!), targets n-k; eta=1 likewise returns the ideal limit
    * ``identity``: alias for nla with g=1
    """
    params = dict(params or {})
    if N < 1:
        raise ValueError("window length must be >= 1")
    n = np.arange(N)

    def _int_param(name, minimum=0):
        v = params.get(name)
        if v is None:
            raise ValueError(f"{kind} requires parameter {name!r}")
        if v != int(v) or int(v) < minimum:
            raise ValueError(f"{kind}: {name} must be an integer >= {minimum}, got {v}")
        return int(v)

    if kind == "identity":
        return FilterOp(np.zeros(N), np.arange(N), kind="nla", params={"g": 1.0})

    if kind == "creation":
        k = _int_param("k")
        la = 0.5 * _log_ratio_factorials(n, k, rising=True)
        return FilterOp(la, n + k, kind=kind, params={"k": k})

    if kind == "annihilation":
        k = _int_param("k")
        la = np.full(N, -np.inf)
        tg = np.full(N, NO_TARGET, dtype=np.int64)
        if k < N:
            la[k:] = 0.5 * _log_ratio_factorials(n[k:], k, rising=False)
            tg[k:] = n[k:] - k
        return FilterOp(la, tg, kind=kind, params={"k": k})

    if kind == "photon-number":
        with np.errstate(divide="ignore"):
            la = np.log(n.astype(float))
        tg = n.copy()
        tg[0] = NO_TARGET
        return FilterOp(la, tg, kind=kind, params={})

    if kind == "nla":
        g = float(params.get("g", math.nan))
        if not g >= 0.0:
            raise ValueError(f"nla gain must be >= 0, got {params.get('g')}")
        with np.errstate(divide="ignore"):
            la = n * (math.log(g) if g > 0.0 else -np.inf)
        if g == 0.0:
            la = np.where(n == 0, 0.0, -np.inf)
            tg = np.where(n == 0, 0, NO_TARGET)
        else:
            tg = n
        return FilterOp(la, tg, kind=kind, params={"g": g})

    if kind == "kraus-add":
        g = float(params.get("g", math.nan))
        k = _int_param("k")
        if not g >= 1.0:
            raise ValueError(f"kraus-add gain must be >= 1, got {params.get('g')}")
        if g == 1.0:
            la = 0.5 * _log_ratio_factorials(n, k, rising=True)
        else:
            pref = 0.5 * (k * math.log(g - 1.0) - math.log(g) - math.lgamma(k + 1))
            la = pref - 0.5 * n * math.log(g) + 0.5 * _log_ratio_factorials(n, k, rising=True)
        return FilterOp(la, n + k, kind=kind, params={"g": g, "k": k})

    if kind == "kraus-sub":
        eta = float(params.get("eta", math.nan))
        k = _int_param("k")
        if not (0.0 < eta <= 1.0):
            raise ValueError(f"kraus-sub transmittance must lie in (0, 1], got {params.get('eta')}")
        la = np.full(N, -np.inf)
        tg = np.full(N, NO_TARGET, dtype=np.int64)
        if k < N:
            body = 0.5 * _log_ratio_factorials(n[k:], k, rising=False)
            if eta == 1.0:
                la[k:] = body
            else:
                pref = 0.5 * (k * math.log(1.0 - eta) - math.lgamma(k + 1))
                la[k:] = pref + 0.5 * n[k:] * math.log(eta) + body
            tg[k:] = n[k:] - k
        return FilterOp(la, tg, kind=kind, params={"eta": eta, "k": k})

    raise ValueError(f"unknown operator kind {kind!r}")


def identity_op(N: int) -> FilterOp:
    return make_standard("identity", {}, N)


def ideal_addsub(k: int, N: int) -> FilterOp:
    """A(k): ideal k-photon addition for k >= 0, |k|-photon subtraction for k < 0."""
    if k >= 0:
        return make_standard("creation", {"k": k}, N)
    return make_standard("annihilation", {"k": -k}, N)


# ---------------------------------------------------------------------------
# text form: kind(param=value,...)

_SPEC_RE = re.compile(r"\s*([a-zA-Z][a-zA-Z0-9_-]*)\s*\(([^()]*)\)\s*$")


def parse_filter_spec(text: str, N: int = 64) -> FilterOp:
    """Parse ``kind(param=value,...)``, e.g. ``kraus-add(g=1.25,k=2)``."""
    m = _SPEC_RE.match(text)
    if not m:
        bad = len(text) - len(text.lstrip())
        raise SpecSyntaxError(f"malformed operator spec {text!r}", bad)
    kind, body = m.group(1), m.group(2)
    if kind not in STANDARD_KINDS or kind == "custom":
        raise SpecSyntaxError(f"unknown operator kind {kind!r}", m.start(1))
    params = {}
    if body.strip():
        offset = text.index("(") + 1
        for piece in body.split(","):
            if "=" not in piece:
                raise SpecSyntaxError(f"expected param=value, got {piece!r}", offset)
            name, _, val = piece.partition("=")
            try:
                params[name.strip()] = float(val)
            except ValueError:
                raise SpecSyntaxError(f"bad numeric value {val!r}", offset + len(name) + 1) from None
            offset += len(piece) + 1
    try:
        return make_standard(kind, params, N)
    except ValueError as exc:
        raise SpecSyntaxError(str(exc), 0) from exc


def serialize_filter_spec(op: FilterOp) -> str:
    if op.kind == "custom":
        raise ValueError("custom operators have no standard text form")
    body = ",".join(f"{k}={v:.10g}" for k, v in sorted(op.params.items()))
    return f"{op.kind}({body})"


# ---------------------------------------------------------------------------
# predicates (Fock-orthogonal / -amplifying / -preserving)


def is_fock_orthogonal(op: FilterOp) -> bool:
    """True iff the target map is injective on the support.

    Operators given by amplitudes alone are declared Fock-orthogonal by
    construction (their image set is implicitly orthonormal).
    """
    if op.targets is None:
        return True
    tg = op.targets[op.support]
    return np.unique(tg).size == tg.size


def _log_nondecreasing(log_seq: np.ndarray) -> bool:
    """Non-decreasing up to relative tolerance, -inf meaning zero."""
    prev = log_seq[:-1]
    nxt = log_seq[1:]
    # a zero entry never violates; a drop to zero from positive does.
    bad = (prev > nxt + _REL_TOL) & (prev > -np.inf)
    return not bool(bad.any())


def is_fock_amplifying(op: FilterOp, N: int | None = None) -> bool:
    """True iff amplitudes are non-decreasing over the first N entries."""
    la = op.log_amplitudes if N is None else op.log_amplitudes[:N]
    return _log_nondecreasing(la)


def fock_amplifying_threshold(op: FilterOp) -> float:
    """Largest n up to which a realistic add/sub stays amplitude-ordered.

    Returns floor(k/(g-1)) for kraus-add, floor(k/(1-eta)) for kraus-sub,
    and +inf at the ideal parameter point.
    """
    if op.kind == "kraus-add":
        g, k = op.params["g"], op.params["k"]
        return math.inf if g == 1.0 else float(math.floor(k / (g - 1.0)))
    if op.kind == "kraus-sub":
        eta, k = op.params["eta"], op.params["k"]
        return math.inf if eta == 1.0 else float(math.floor(k / (1.0 - eta)))
    raise ValueError(f"threshold is defined for kraus kinds only, not {op.kind!r}")


def is_fock_preserving(op: FilterOp) -> bool:
    """True iff targets exist and are non-decreasing on the support."""
    if op.targets is None:
        raise ValueError("operator has no target map")
    tg = op.targets[op.support]
    return bool((np.diff(tg) >= 0).all())


def jointly_fock_amplifying(f: FilterOp, g: FilterOp, N: int | None = None) -> bool:
    """True iff the product amplitude sequence is non-decreasing."""
    n = min(len(f), len(g))
    if N is not None:
        if N > n:
            raise ValueError("window exceeds the operators' amplitude length")
        n = N
    return _log_nondecreasing(f.log_amplitudes[:n] + g.log_amplitudes[:n])


# ---------------------------------------------------------------------------
# concatenation (G after F)


def concat(g: FilterOp, f: FilterOp) -> FilterOp:
    """The composition applying ``f`` first, then ``g``.

    ``f`` must be Fock-preserving (targets present and non-decreasing on the
    support): that is what lets amplitudes compose as
    ||GF|n>|| = ||F|n>|| * ||G|m_n>||. The result window is the prefix on
    which f's targets stay inside g's window.
    """
    if f.targets is None:
        raise ValueError("concat requires the inner operator to carry targets")
    if not is_fock_preserving(f):
        raise ValueError("concat requires the inner operator to be Fock-preserving")
    valid = np.where(f.support, f.targets, 0) < len(g)
    n_out = int(np.count_nonzero(valid.cumprod())) if not valid.all() else len(f)
    if n_out == 0:
        raise ValueError("operator windows do not overlap; enlarge the outer window")

    la_f = f.log_amplitudes[:n_out]
    tg_f = f.targets[:n_out]
    sup = la_f > -np.inf
    idx = np.where(sup, tg_f, 0)

    la = np.where(sup, la_f + g.log_amplitudes[idx], -np.inf)
    tg = None
    if g.targets is not None:
        tg = np.full(n_out, NO_TARGET, dtype=np.int64)
        tg[sup] = g.targets[idx[sup]]
        # a zero amplitude inherited from g clears the target as well
        tg[la == -np.inf] = NO_TARGET
    return FilterOp(la, tg, kind="custom", params={})
