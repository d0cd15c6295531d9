"""Approximate majorization for realistic photon addition and subtraction.

Realistic add/sub operators stop being amplitude-ordered above a photon
threshold, so the would-be stochastic column m acquires negative entries.
Repairing those entries yields a column-stochastic matrix D whose image
s = D tau is provably majorized by tau and sits within total variation
nu = sum |negative entries| of the actual filtered spectrum. Closed forms
for tail sums of m make nu cheap to bound across parameter sweeps.

The single parameter mu unifies both operations: mu = lambda/g for
addition with amplifier gain g, mu = eta*lambda for subtraction with
beam-splitter transmittance eta. The two produce equivalent spectra when
g*eta = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import DegenerateIdeal, TruncationTooCoarse
from .fock_core import ProbVector, binary_entropy, thermal_eigenvalues, total_variation_distance

__all__ = [
    "RealisticParams",
    "EpsDecomposition",
    "m_vector",
    "realistic_spectrum",
    "eps_decompose",
    "sigma_partial_sum_closed",
    "p_star",
    "nu_upper_bound",
    "entropy_continuity_bound",
]

_SUM_TOL = 1e-10


@dataclass(frozen=True)
class RealisticParams:
    """Realistic k-photon add/sub acting on thermal(lambda), via mu."""

    lam: float
    mu: float
    k: int

    def __post_init__(self):
        if not (0.0 < self.lam < 1.0):
            raise ValueError(f"lambda must lie in (0, 1), got {self.lam}")
        if not (0.0 < self.mu <= self.lam):
            raise ValueError(f"mu must lie in (0, lambda], got {self.mu}")
        if self.k != int(self.k) or self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k}")
        object.__setattr__(self, "k", int(self.k))

    @classmethod
    def from_gain(cls, lam: float, g: float, k: int) -> "RealisticParams":
        if not g >= 1.0:
            raise ValueError(f"gain must be >= 1, got {g}")
        return cls(lam, lam / g, k)

    @classmethod
    def from_transmittance(cls, lam: float, eta: float, k: int) -> "RealisticParams":
        if not (0.0 < eta <= 1.0):
            raise ValueError(f"transmittance must lie in (0, 1], got {eta}")
        return cls(lam, eta * lam, k)

    @property
    def is_ideal(self) -> bool:
        return self.mu == self.lam

    @property
    def negativity_threshold(self) -> float:
        """m_n is strictly negative iff n > k*mu/(lambda-mu)."""
        if self.is_ideal:
            return math.inf
        return self.k * self.mu / (self.lam - self.mu)


def _log_binom_knm1(n: np.ndarray, k: int) -> np.ndarray:
    """log of (k+n-1)! / (k! n!)."""
    return gammaln(k + n) - gammaln(k + 1.0) - gammaln(n + 1.0)


def m_vector(p: RealisticParams, N: int) -> np.ndarray:
    """Generating column of M with sigma = M tau for the realistic operator.

    m_n = (1-mu)^(k+1) mu^(n-1) (k+n-1)!/(k! n!) (k mu + n mu - n lam)/(1-lam).
    Entries sum to 1 over an adequate window; they turn negative above the
    photon threshold whenever mu < lambda.
    """
    if N < 1:
        raise ValueError("window length must be >= 1")
    lam, mu, k = p.lam, p.mu, p.k
    n = np.arange(1, N, dtype=float)
    mag = np.exp((k + 1) * math.log1p(-mu) + (n - 1) * math.log(mu) + _log_binom_knm1(n, k))
    body = mag * (k * mu + n * (mu - lam)) / (1.0 - lam)
    m0 = (1.0 - mu) ** (k + 1) / (1.0 - lam)
    return np.concatenate(([m0], body))


def realistic_spectrum(p: RealisticParams, N: int, trunc_tol: float = 1e-12) -> ProbVector:
    """Spectrum of the realistic k-photon added/subtracted thermal state.

    In Fock order, sigma_n = (1-mu)^(k+1) mu^n C(n+k, k): a negative
    binomial in mu, independent of lambda once mu is fixed.
    """
    n = np.arange(N, dtype=float)
    logw = (
        (p.k + 1) * math.log1p(-p.mu)
        + n * math.log(p.mu)
        + gammaln(n + p.k + 1.0)
        - gammaln(p.k + 1.0)
        - gammaln(n + 1.0)
    )
    w = np.exp(logw)
    total = math.fsum(w)
    if w[-1] == 0.0:  # window already past double underflow: nothing left
        tail = 0.0
    else:
        ratio = w[-1] / w[-2] if N >= 2 else p.mu
        if ratio >= 1.0:
            raise TruncationTooCoarse("window too short for the spectral peak")
        tail = w[-1] * ratio / (1.0 - ratio)
    if tail / (total + tail) > trunc_tol:
        raise TruncationTooCoarse(
            f"relative tail {tail / (total + tail):.3g} exceeds {trunc_tol:g}"
        )
    return ProbVector(w, tail_bound=tail / total, label=f"realistic(mu={p.mu:g},k={p.k})")


@dataclass(frozen=True, eq=False)
class EpsDecomposition:
    """The (m, eps, nu, alpha, s) bundle of the repaired-majorant construction.

    eps_n = -min(m_n, 0); nu = sum eps; alpha = 1 + nu; s = D tau for the
    column-stochastic D generated by (m + eps)/alpha. By construction
    tau majorizes s and the actual spectrum sits within TVD nu of s.
    """

    m: np.ndarray
    eps: np.ndarray
    nu: float
    alpha: float
    s: ProbVector

    def __post_init__(self):
        if ((self.eps > 0) != (self.m < 0)).any():
            raise ValueError("eps must be positive exactly where m is negative")
        if abs(self.alpha - (1.0 + self.nu)) > 1e-12:
            raise ValueError("alpha must equal 1 + nu")


def eps_decompose(p: RealisticParams, N: int, trunc_tol: float = 1e-12) -> EpsDecomposition:
    """Build the repaired majorant for the realistic operator on [0, N).

    Requires the omitted tail of m to be below trunc_tol (checked with the
    closed-form tail sum); verifies internally that the filtered spectrum is
    within total variation nu of the repaired majorant s.
    """
    if N < 2:
        raise ValueError("window length must be >= 2")
    tail = 0.0 if p.is_ideal else abs(sigma_partial_sum_closed(p, N))
    if tail >= trunc_tol:
        raise TruncationTooCoarse(
            f"|sum of m beyond the window| = {tail:.3g} >= trunc_tol {trunc_tol:g}"
        )
    m = m_vector(p, N)
    msum = math.fsum(m)
    if abs(msum - 1.0) > max(_SUM_TOL, 2.0 * trunc_tol):
        raise TruncationTooCoarse(f"m sums to {msum}, too far from 1")
    eps = np.where(m < 0.0, -m, 0.0)
    nu = math.fsum(eps)
    alpha = 1.0 + nu

    tau = thermal_eigenvalues(p.lam, trunc_tol)
    tau_w = tau.values[:N] if len(tau) >= N else np.pad(tau.values, (0, N - len(tau)))
    s_vals = np.convolve((m + eps) / alpha, tau_w)[:N]
    s_total = math.fsum(s_vals)
    s = ProbVector(s_vals, tail_bound=max(0.0, 1.0 - s_total) + 1e-15, label="repaired majorant")

    sigma = realistic_spectrum(p, N, trunc_tol)
    dist = total_variation_distance(sigma, s)
    if dist > nu + _SUM_TOL:
        raise AssertionError(
            f"internal check failed: TVD(sigma, s) = {dist} exceeds nu = {nu}"
        )
    return EpsDecomposition(m=m, eps=eps, nu=nu, alpha=alpha, s=s)


def _hyp2f1_1b_series(b: float, c: float, z: float) -> float:
    """2F1(1, b; c; z) by direct term-ratio series; needs |z| < 1."""
    if not abs(z) < 1.0:
        raise ValueError(f"hypergeometric series diverges for |z| >= 1, got {z}")
    term = 1.0
    total = 1.0
    j = 0
    while True:
        term *= (b + j) / (c + j) * z
        total += term
        j += 1
        if abs(term) < 1e-18 * abs(total) or j > 100_000:
            return total


def sigma_partial_sum_closed(p: RealisticParams, pidx: int) -> float:
    """Closed form of Sigma(p) = sum_(n>=p) m_n via the regularized 2F1.

    Sigma(p) = mu^p (1-mu)^k (k+p-1)! [ (lam-mu)/((lam-1) mu k! (p-1)!)
               + F(1, k+p; p+1; mu)/(k-1)! ],  F = 2F1 / Gamma(c).
    """
    if pidx < 1 or pidx != int(pidx):
        raise ValueError(f"p must be a positive integer, got {pidx}")
    pidx = int(pidx)
    lam, mu, k = p.lam, p.mu, p.k
    base = pidx * math.log(mu) + k * math.log1p(-mu)
    # (k+p-1)!/(p-1)! and (k+p-1)!/((k-1)! p!) in logs
    log_a = base + gammaln(k + pidx) - gammaln(pidx) - gammaln(k + 1.0)
    log_b = base + gammaln(k + pidx) - gammaln(k) - gammaln(pidx + 1.0)
    term_a = math.exp(log_a) * (lam - mu) / ((lam - 1.0) * mu)
    term_b = math.exp(log_b) * _hyp2f1_1b_series(k + pidx, pidx + 1.0, mu)
    return term_a + term_b


def _sigma_k1_real(lam: float, mu: float, pr: float) -> float:
    """Sigma(p) for k=1 at real p: mu^p [1 - (lam-mu)(1-mu) p / ((1-lam) mu)]."""
    return mu**pr * (1.0 - (lam - mu) * (1.0 - mu) * pr / ((1.0 - lam) * mu))


def p_star(lam: float, mu: float) -> float:
    """Real argmin of the k=1 tail sum: mu(1-lam)/((1-mu)(lam-mu)) - 1/ln(mu)."""
    if not (0.0 < mu < lam < 1.0):
        if mu == lam:
            raise DegenerateIdeal("p* diverges at the ideal point mu = lambda")
        raise ValueError(f"need 0 < mu < lambda < 1, got mu={mu}, lambda={lam}")
    return mu * (1.0 - lam) / ((1.0 - mu) * (lam - mu)) - 1.0 / math.log(mu)


def nu_upper_bound(lam: float, mu: float) -> float:
    """Upper bound on nu for single-photon (k=1) realistic add/sub.

    Returns |Sigma(p*)|, the magnitude of the k=1 tail sum at its real
    minimizer: nu is the tail sum starting at the first negative index,
    which the unconstrained minimum dominates. When mu/(lambda-mu) is an
    integer the bound is exact and simplifies to
    mu^(mu/(lam-mu)) (lam-mu)/(1-lam).

    At the ideal point mu = lambda there are no negative entries and the
    bound is 0 by convention.
    """
    if not (0.0 < mu <= lam < 1.0) or lam >= 1.0:
        raise ValueError(f"need 0 < mu <= lambda < 1, got mu={mu}, lambda={lam}")
    if mu == lam:
        return 0.0
    t = mu / (lam - mu)
    t_round = round(t)
    if t_round >= 1 and abs(t - t_round) < 1e-9:
        return mu**t_round * (lam - mu) / (1.0 - lam)
    return abs(_sigma_k1_real(lam, mu, p_star(lam, mu)))


def entropy_continuity_bound(delta: float, Ncap: float) -> float:
    """Entropy-difference bound h2(delta) + N h2(delta/N) (nats).

    Valid for delta <= 1/2 (where h2 is non-decreasing) and N at least the
    larger mean photon number of the two distributions being compared.
    """
    if not (0.0 <= delta <= 0.5):
        raise ValueError(f"delta must lie in [0, 1/2], got {delta}")
    if delta == 0.0:
        return 0.0
    if Ncap < delta:
        raise ValueError(f"mean-photon cap {Ncap} must be >= delta {delta}")
    return binary_entropy(delta) + Ncap * binary_entropy(delta / Ncap)
