import math

import numpy as np
import pytest

from fockmaj import (
    CirculantStochastic,
    MajorOrder,
    ProbVector,
    TruncationTooCoarse,
    ZeroNormalization,
    apply_circulant,
    build_circulant_d,
    compare,
    identity_op,
    majorizes,
    make_standard,
    thermal_eigenvalues,
)
from fockmaj.fock_core import thermal_entry_count

SEED = 91101


def pv(*vals, tail=0.0):
    return ProbVector(np.array(vals, dtype=float), tail_bound=tail)


def random_probvector(rng, n):
    raw = rng.exponential(1.0, size=n)
    return ProbVector(raw / raw.sum())


class TestMajorizes:
    def test_point_mass_majorizes_everything(self):
        top = pv(1.0, 0.0, 0.0)
        assert majorizes(top, thermal_eigenvalues(0.6, 1e-12))
        assert majorizes(top, pv(0.5, 0.3, 0.2))

    def test_two_outcome(self):
        assert majorizes(pv(0.7, 0.3), pv(0.5, 0.5))
        assert not majorizes(pv(0.5, 0.5), pv(0.7, 0.3))

    def test_thermal_vs_photon_added(self):
        # partial-sum oracle on the closed forms: tau_n = (1-l)l^n vs
        # sigma_n = (1-l)^2 l^n (n+1); the latter is flatter
        lam = 0.5
        n = np.arange(200)
        tau = ProbVector((1 - lam) * lam**n, tail_bound=lam**200)
        sig_vals = (1 - lam) ** 2 * lam**n * (n + 1)
        sig = ProbVector(sig_vals, tail_bound=1.2e-57)
        cum_t = np.cumsum(np.sort(tau.values)[::-1])
        cum_s = np.cumsum(np.sort(sig.values)[::-1])
        assert (cum_t >= cum_s - 1e-10).all()  # independent partial-sum check
        assert majorizes(tau, sig)

    def test_unsorted_input_is_sorted_internally(self):
        assert majorizes(pv(0.0, 1.0, 0.0), pv(0.2, 0.5, 0.3))

    def test_truncation_guard(self):
        a = pv(0.6, 0.3, tail=0.1)
        b = pv(0.5, 0.5)
        with pytest.raises(TruncationTooCoarse):
            majorizes(a, b, tol=1e-3)
        assert majorizes(a, b, tol=0.2)


class TestCompare:
    def test_shuffle_is_equivalent(self):
        assert compare(pv(0.2, 0.5, 0.3), pv(0.5, 0.3, 0.2)) is MajorOrder.EQUIVALENT

    def test_incomparable_pair(self):
        # 0.5 > 0.4 but 0.75 < 0.8
        assert compare(pv(0.5, 0.25, 0.25), pv(0.4, 0.4, 0.2)) is MajorOrder.INCOMPARABLE

    def test_thermal_order_in_lambda(self):
        a = thermal_eigenvalues(0.3, 1e-12)
        b = thermal_eigenvalues(0.6, 1e-12)
        assert compare(a, b) is MajorOrder.MAJORIZES
        assert compare(b, a) is MajorOrder.MAJORIZED_BY

    def test_mirror_antisymmetry(self):
        rng = np.random.default_rng(SEED)
        for _ in range(100):
            p = random_probvector(rng, int(rng.integers(2, 12)))
            q = random_probvector(rng, int(rng.integers(2, 12)))
            assert compare(p, q) is compare(q, p).mirror()

    def test_transitivity(self):
        rng = np.random.default_rng(SEED + 1)
        checked = 0
        while checked < 60:
            p = random_probvector(rng, 8)
            q = random_probvector(rng, 8)
            r = random_probvector(rng, 8)
            if majorizes(p, q, 1e-12) and majorizes(q, r, 1e-12):
                assert majorizes(p, r, 1e-10)
                checked += 1


class TestCirculant:
    def test_identity_column(self):
        lam = 0.7
        D = build_circulant_d(lam, np.ones(64))
        assert D.d[0] == pytest.approx(1.0, abs=1e-12)
        assert np.allclose(D.d[1:], 0.0, atol=1e-15)
        assert D.is_stochastic

    def test_creation_one_column_closed_form(self):
        # |phi_n|^2 = n+1 telescopes to d_n = (1-lam) lam^n
        lam = 0.5
        W = 120
        amps = make_standard("creation", {"k": 1}, W).amplitudes
        D = build_circulant_d(lam, amps)
        n = np.arange(W)
        assert np.allclose(D.d, (1 - lam) * lam**n, atol=1e-12)
        assert D.is_stochastic

    def test_kraus_add_negative_entry_past_threshold(self):
        # threshold k/(g-1) = 2: first strictly negative entry at n = 3
        lam = 0.5
        amps = make_standard("kraus-add", {"g": 1.5, "k": 1}, 200).amplitudes
        D = build_circulant_d(lam, amps)
        assert D.d[2] == pytest.approx(0.0, abs=1e-15)
        assert D.d[3] < -1e-14
        assert (D.d[:2] > 0).all()
        assert not D.is_stochastic

    def test_column_sum_telescopes_to_one(self):
        lam = 0.6
        W = 4 * thermal_entry_count(lam, 1e-12)
        for kind, params in [
            ("creation", {"k": 2}),
            ("annihilation", {"k": 3}),
            ("photon-number", {}),
        ]:
            D = build_circulant_d(lam, make_standard(kind, params, W).amplitudes)
            assert D.column_sum == pytest.approx(1.0, abs=1e-10)

    def test_zero_normalization(self):
        with pytest.raises(ZeroNormalization):
            build_circulant_d(0.5, np.zeros(8))

    def test_roundoff_clamp_vs_genuine_negative(self):
        assert CirculantStochastic(np.array([1.0, -1e-15])).is_stochastic
        assert not CirculantStochastic(np.array([1.0 + 1e-13, -1e-13])).is_stochastic


class TestApplyCirculant:
    def test_identity(self):
        p = thermal_eigenvalues(0.4, 1e-12)
        D = CirculantStochastic(np.concatenate(([1.0], np.zeros(len(p) - 1))))
        assert np.allclose(apply_circulant(D, p), p.values)

    def test_convolution(self):
        D = CirculantStochastic(np.array([0.5, 0.5]))
        out = apply_circulant(D, pv(1.0, 0.0))
        assert np.allclose(out, [0.5, 0.5])

    def test_creation_certificate_reproduces_spectrum(self):
        lam = 0.5
        W = 150
        amps = make_standard("creation", {"k": 1}, W).amplitudes
        D = build_circulant_d(lam, amps)
        tau = ProbVector((1 - lam) * lam ** np.arange(W), tail_bound=float(lam**W))
        out = apply_circulant(D, tau)
        n = np.arange(W)
        closed = (1 - lam) ** 2 * lam**n * (n + 1)
        assert np.max(np.abs(out - closed)) < 1e-12


def certificate_three_way(lam, op, window):
    """is_stochastic AND D tau == filtered spectrum AND tau majorizes sigma."""
    from fockmaj import filtered_schmidt, filtered_spectrum_fock_order

    tau_w = ProbVector((1 - lam) * lam ** np.arange(window), tail_bound=float(lam**window))
    D = build_circulant_d(lam, op.amplitudes)
    sig_nat = filtered_spectrum_fock_order(lam, op, identity_op(window), 1e-12)
    image = apply_circulant(D, tau_w)
    reproduced = np.max(np.abs(image - sig_nat.values)) < 1e-10
    tau = thermal_eigenvalues(lam, 1e-12)
    sig = filtered_schmidt(lam, op, identity_op(window), 1e-12)
    return D.is_stochastic and reproduced and majorizes(tau, sig, 1e-10)


def test_certificate_soundness_randomized():
    """Random Table-I operators with valid parameters: stochastic column,
    exact spectrum reproduction, and majorization, all three at once."""
    rng = np.random.default_rng(SEED + 2)
    lams = [0.1, 0.3, 0.5, 0.7, 0.9]
    for lam in lams:
        base = thermal_entry_count(lam, 1e-12)
        for _ in range(6):
            kind = rng.choice(["creation", "annihilation", "photon-number", "nla"])
            if kind in ("creation", "annihilation"):
                op = make_standard(kind, {"k": int(rng.integers(1, 4))}, 4 * base + 64)
                window = 4 * base + 64
            elif kind == "photon-number":
                op = make_standard(kind, {}, 4 * base + 64)
                window = 4 * base + 64
            else:
                # keep the amplified geometric ratio under 1 so the filtered
                # state stays normalizable
                g = float(rng.uniform(1.0, 0.98 / math.sqrt(lam)))
                window = max(thermal_entry_count(min(0.999, lam * g * g), 1e-12), base) + 32
                op = make_standard("nla", {"g": g}, window)
            assert certificate_three_way(lam, op, window)
