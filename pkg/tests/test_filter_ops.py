import math

import numpy as np
import pytest

from fockmaj import (
    FilterOp,
    SpecSyntaxError,
    concat,
    fock_amplifying_threshold,
    identity_op,
    is_fock_amplifying,
    is_fock_orthogonal,
    is_fock_preserving,
    jointly_fock_amplifying,
    make_standard,
    parse_filter_spec,
    serialize_filter_spec,
)
from fockmaj.filter_ops import NO_TARGET
from fockmaj.testing import (
    random_amplifying,
    random_fock_orthogonal,
    random_fock_orthogonal_preserving,
    random_fock_preserving,
)

SEED = 20240815


def dense_matrix(op: FilterOp, dim: int) -> np.ndarray:
    """Brute-force matrix of the operator on a dim-dimensional truncation."""
    m = np.zeros((dim, dim))
    amps = op.amplitudes
    for n in range(min(len(op), dim)):
        t = op.targets[n]
        if t != NO_TARGET and t < dim:
            m[t, n] = amps[n]
    return m


def op_from_dense(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(amplitudes, targets) recovered from a one-nonzero-per-column matrix."""
    dim = m.shape[1]
    amps = np.zeros(dim)
    targets = np.full(dim, NO_TARGET, dtype=np.int64)
    for n in range(dim):
        nz = np.flatnonzero(np.abs(m[:, n]) > 1e-300)
        assert nz.size <= 1
        if nz.size == 1:
            amps[n] = m[nz[0], n]
            targets[n] = nz[0]
    return amps, targets


class TestStandardZoo:
    def test_creation_one(self):
        op = make_standard("creation", {"k": 1}, 6)
        assert np.allclose(op.amplitudes, np.sqrt(np.arange(1, 7)))
        assert op.targets.tolist() == [1, 2, 3, 4, 5, 6]

    def test_annihilation_one(self):
        op = make_standard("annihilation", {"k": 1}, 5)
        assert op.amplitudes[0] == 0.0
        assert np.allclose(op.amplitudes[1:], np.sqrt(np.arange(1, 5)))
        assert op.targets.tolist() == [NO_TARGET, 0, 1, 2, 3]

    def test_photon_number(self):
        op = make_standard("photon-number", {}, 5)
        assert np.allclose(op.amplitudes, [0, 1, 2, 3, 4])
        assert op.targets.tolist() == [NO_TARGET, 1, 2, 3, 4]

    def test_nla(self):
        op = make_standard("nla", {"g": 1.5}, 5)
        assert np.allclose(op.amplitudes, 1.5 ** np.arange(5))

    def test_kraus_add_values(self):
        g, k = 1.5, 1
        op = make_standard("kraus-add", {"g": g, "k": k}, 6)
        n = np.arange(6)
        expect = math.sqrt((g - 1) ** k / (g * 1)) * g ** (-n / 2) * np.sqrt(n + 1)
        assert np.allclose(op.amplitudes, expect)
        assert op.targets.tolist() == [1, 2, 3, 4, 5, 6]

    def test_kraus_sub_values(self):
        eta, k = 0.5, 2
        op = make_standard("kraus-sub", {"eta": eta, "k": k}, 6)
        n = np.arange(2, 6)
        expect = math.sqrt((1 - eta) ** k / 2) * eta ** (n / 2) * np.sqrt(n * (n - 1))
        assert np.allclose(op.amplitudes[2:], expect)
        assert op.amplitudes[:2].tolist() == [0.0, 0.0]

    def test_kraus_add_ideal_limit_is_creation(self):
        ka = make_standard("kraus-add", {"g": 1.0, "k": 2}, 12)
        cr = make_standard("creation", {"k": 2}, 12)
        assert np.allclose(ka.amplitudes, cr.amplitudes)

    def test_kraus_sub_ideal_limit_is_annihilation(self):
        ks = make_standard("kraus-sub", {"eta": 1.0, "k": 2}, 12)
        an = make_standard("annihilation", {"k": 2}, 12)
        assert np.allclose(ks.amplitudes, an.amplitudes)

    def test_param_validation(self):
        with pytest.raises(ValueError):
            make_standard("kraus-add", {"g": 0.5, "k": 1}, 8)
        with pytest.raises(ValueError):
            make_standard("kraus-sub", {"eta": 0.0, "k": 1}, 8)
        with pytest.raises(ValueError):
            make_standard("creation", {"k": -1}, 8)
        with pytest.raises(ValueError):
            make_standard("nla", {"g": -0.5}, 8)
        with pytest.raises(ValueError):
            make_standard("warp", {}, 8)

    def test_overflow_flag(self):
        op = make_standard("nla", {"g": 3.0}, 2000)
        assert op.amplitude_overflow
        assert np.isinf(op.amplitudes).any()
        assert np.isfinite(op.log_amplitudes).all()


class TestFockOrthogonal:
    def test_creation_two(self):
        assert is_fock_orthogonal(make_standard("creation", {"k": 2}, 16))

    def test_target_collision(self):
        op = FilterOp(np.zeros(2), np.array([0, 0]))
        assert not is_fock_orthogonal(op)

    def test_kraus_sub(self):
        assert is_fock_orthogonal(make_standard("kraus-sub", {"eta": 0.5, "k": 1}, 16))

    def test_amplitude_only_declared_orthogonal(self):
        assert is_fock_orthogonal(FilterOp(np.zeros(4)))


class TestFockAmplifying:
    def test_nla(self):
        assert is_fock_amplifying(make_standard("nla", {"g": 1.5}, 32))

    def test_identity_constant(self):
        assert is_fock_amplifying(identity_op(32))

    def test_kraus_add_past_threshold(self):
        op = make_standard("kraus-add", {"g": 1.5, "k": 1}, 16)
        assert is_fock_amplifying(op, 3)
        assert not is_fock_amplifying(op, 16)

    @pytest.mark.parametrize("g", [1.25, 1.5, 2.0, 3.0])
    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_fails_iff_window_reaches_threshold(self, g, k):
        thr = int(k // (g - 1))
        op = make_standard("kraus-add", {"g": g, "k": k}, thr + 8)
        for N in range(2, thr + 8):
            assert is_fock_amplifying(op, N) == (N - 2 < thr)

    def test_equal_amplitudes_satisfy(self):
        op = FilterOp(np.zeros(8), np.arange(8))
        assert is_fock_amplifying(op)


class TestThreshold:
    def test_add(self):
        op = make_standard("kraus-add", {"g": 1.5, "k": 1}, 8)
        assert fock_amplifying_threshold(op) == 2

    def test_sub_ideal(self):
        op = make_standard("kraus-sub", {"eta": 1.0, "k": 3}, 8)
        assert fock_amplifying_threshold(op) == math.inf

    def test_sub(self):
        op = make_standard("kraus-sub", {"eta": 0.8, "k": 2}, 8)
        assert fock_amplifying_threshold(op) == 10

    def test_wrong_kind(self):
        with pytest.raises(ValueError):
            fock_amplifying_threshold(make_standard("creation", {"k": 1}, 8))


class TestFockPreserving:
    def test_annihilation_three(self):
        assert is_fock_preserving(make_standard("annihilation", {"k": 3}, 16))

    def test_photon_number(self):
        assert is_fock_preserving(make_standard("photon-number", {}, 16))

    def test_decreasing_targets(self):
        op = FilterOp(np.zeros(2), np.array([2, 1]))
        assert not is_fock_preserving(op)

    def test_requires_targets(self):
        with pytest.raises(ValueError):
            is_fock_preserving(FilterOp(np.zeros(4)))


class TestJointlyAmplifying:
    def test_nla_with_attenuator(self):
        # noiseless attenuator sqrt(eta)^n is never amplifying on its own,
        # but pairs with a gain-g amplifier as soon as g * eta >= 1
        n = np.arange(48)
        for g, eta in [(2.0, 0.5), (4.0, 0.25), (1.5, 0.7)]:
            nla = make_standard("nla", {"g": g}, 48)
            att = FilterOp(0.5 * n * math.log(eta))
            assert not is_fock_amplifying(att)
            assert jointly_fock_amplifying(nla, att) == (g * math.sqrt(eta) >= 1.0)
            assert jointly_fock_amplifying(nla, att)  # g*eta >= 1 is sufficient

    def test_identity_pair_reduces_to_single(self):
        f = make_standard("creation", {"k": 1}, 32)
        assert jointly_fock_amplifying(f, identity_op(32))

    def test_product_decreasing(self):
        n = np.arange(32)
        nla = make_standard("nla", {"g": 1.2}, 32)
        att = FilterOp(n * math.log(0.5))  # eta^n with eta = 0.5
        assert not jointly_fock_amplifying(nla, att)  # product 0.6^n decreases


class TestConcat:
    def test_annihilation_after_creation_is_nhat_plus_one(self):
        c1 = make_standard("creation", {"k": 1}, 10)
        a1 = make_standard("annihilation", {"k": 1}, 12)
        h = concat(a1, c1)
        assert np.allclose(h.amplitudes, np.arange(1, len(h) + 1))
        assert h.targets.tolist() == list(range(len(h)))

    def test_creation_after_annihilation_is_nhat(self):
        c1 = make_standard("creation", {"k": 1}, 12)
        a1 = make_standard("annihilation", {"k": 1}, 10)
        h = concat(c1, a1)
        assert h.amplitudes[0] == 0.0
        assert np.allclose(h.amplitudes[1:], np.arange(1, len(h)))

    def test_identity_neutral(self):
        f = make_standard("kraus-sub", {"eta": 0.7, "k": 1}, 10)
        h = concat(identity_op(10), f)
        assert np.allclose(h.amplitudes, f.amplitudes)
        assert h.targets.tolist() == f.targets.tolist()

    def test_requires_targets(self):
        with pytest.raises(ValueError):
            concat(identity_op(4), FilterOp(np.zeros(4)))

    def test_requires_preserving_inner(self):
        scrambled = FilterOp(np.zeros(3), np.array([2, 0, 1]))
        with pytest.raises(ValueError):
            concat(identity_op(4), scrambled)

    @pytest.mark.parametrize("pair", [
        ("creation", {"k": 2}, "annihilation", {"k": 1}),
        ("annihilation", {"k": 2}, "creation", {"k": 1}),
        ("photon-number", {}, "creation", {"k": 1}),
        ("kraus-sub", {"eta": 0.6, "k": 1}, "kraus-add", {"g": 1.3, "k": 2}),
    ])
    def test_against_dense_matrix_product(self, pair):
        gk, gp, fk, fp = pair
        dim = 10
        f = make_standard(fk, fp, dim)
        g = make_standard(gk, gp, dim + 4)
        h = concat(g, f)
        dense = dense_matrix(g, dim + 8) @ dense_matrix(f, dim + 8)
        amps, targets = op_from_dense(dense[:, :dim])
        n = min(len(h), dim)
        assert np.allclose(h.amplitudes[:n], amps[:n], atol=1e-12)
        assert h.targets[:n].tolist() == targets[:n].tolist()


class TestConcatTheoremSuites:
    """Concatenation preservation properties on random operators."""

    def test_preserving_closed_under_concat(self):
        rng = np.random.default_rng(SEED)
        for _ in range(200):
            f = random_fock_preserving(rng, 64)
            g = random_fock_preserving(rng, 256)
            assert is_fock_preserving(concat(g, f))

    def test_orthogonal_propagates_over_preserving(self):
        rng = np.random.default_rng(SEED + 1)
        for _ in range(200):
            f = random_fock_orthogonal_preserving(rng, 64)
            g = random_fock_orthogonal(rng, 256)
            assert is_fock_orthogonal(concat(g, f))

    def test_amplifying_propagates_over_preserving(self):
        rng = np.random.default_rng(SEED + 2)
        for _ in range(200):
            f = random_amplifying(rng, 64)
            g = random_amplifying(rng, 256)
            assert is_fock_amplifying(concat(g, f))


@pytest.mark.parametrize("kind,params,N", [
    ("creation", {"k": 1}, 256),
    ("creation", {"k": 3}, 256),
    ("annihilation", {"k": 1}, 256),
    ("annihilation", {"k": 3}, 256),
    ("photon-number", {}, 256),
    ("nla", {"g": 1.0}, 256),
    ("nla", {"g": 2.5}, 256),
])
def test_table_ops_pass_all_three_predicates(kind, params, N):
    op = make_standard(kind, params, N)
    assert is_fock_orthogonal(op)
    assert is_fock_amplifying(op, N)
    assert is_fock_preserving(op)


class TestSpecFormat:
    @pytest.mark.parametrize("text", [
        "creation(k=2)",
        "annihilation(k=1)",
        "photon-number()",
        "nla(g=1.5)",
        "kraus-add(g=1.25,k=2)",
        "kraus-sub(eta=0.5,k=1)",
        "identity()",
    ])
    def test_roundtrip(self, text):
        op = parse_filter_spec(text, 16)
        again = parse_filter_spec(serialize_filter_spec(op), 16)
        assert np.allclose(op.amplitudes, again.amplitudes)

    def test_parse_error_carries_position(self):
        with pytest.raises(SpecSyntaxError) as err:
            parse_filter_spec("kraus-add(g=abc,k=2)")
        assert err.value.pos > 0

    def test_unknown_kind(self):
        with pytest.raises(SpecSyntaxError):
            parse_filter_spec("teleport(k=2)")

    def test_malformed(self):
        with pytest.raises(SpecSyntaxError):
            parse_filter_spec("creation k=2")
