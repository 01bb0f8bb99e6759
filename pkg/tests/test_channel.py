"""Pauli channel tests: validation, application, transforms, distances."""

import numpy as np
import pytest

from pauli_tomo import (
    ChannelSequence,
    EigenvalueVector,
    UnitaryIntertwiner,
    apply_channel,
    apply_sequence,
    basis_state,
    diamond_distance,
    eigenvalues,
    identity_channel,
    inverse_transform,
    make_channel,
    make_generator,
    maximally_mixed,
    random_channel,
    random_density_matrix,
    symplectic_transform,
    tv_distance,
    uniform_channel,
)
from pauli_tomo.verify import naive_symplectic_transform


class TestMakeChannel:
    def test_identity(self):
        ch = identity_channel(2)
        assert ch.probs[0] == 1.0 and ch.probs[1:].sum() == 0.0

    def test_uniform(self):
        ch = uniform_channel(1)
        assert np.allclose(ch.probs, 0.25)

    def test_wrong_mass_rejected(self):
        with pytest.raises(ValueError):
            make_channel(1, np.full(4, 0.9 / 4))

    def test_wrong_length_rejected(self):
        with pytest.raises(ValueError):
            make_channel(1, np.full(5, 0.2))

    def test_negative_mass_rejected(self):
        probs = np.full(4, 0.25)
        probs[0] += 1e-4
        probs[1] -= 1e-4
        probs[1] -= 0.25 + 1e-4  # push well below zero
        with pytest.raises(ValueError):
            make_channel(1, probs)

    def test_tiny_negative_clamped(self):
        probs = np.array([0.5, 0.5 + 5e-9, -5e-9, 0.0])
        ch = make_channel(1, probs)
        assert ch.probs.min() == 0.0
        assert abs(ch.probs.sum() - 1.0) < 1e-15


class TestApplyChannel:
    def test_identity_channel_fixes_state(self):
        rng = make_generator(0)
        rho = random_density_matrix(2, rng)
        out = apply_channel(identity_channel(2), rho)
        assert np.abs(out.mat - rho.mat).max() < 1e-15

    def test_uniform_channel_depolarizes(self):
        out = apply_channel(uniform_channel(2), basis_state(2, 0))
        assert np.abs(out.mat - np.eye(4) / 4).max() < 1e-15

    def test_delta_x_flips(self):
        probs = np.zeros(4)
        probs[1] = 1.0  # X
        out = apply_channel(make_channel(1, probs), basis_state(1, 0))
        assert np.allclose(out.mat, basis_state(1, 1).mat)

    def test_unitality(self):
        rng = make_generator(1)
        for n in (1, 2, 3):
            ch = random_channel(n, rng)
            out = apply_channel(ch, maximally_mixed(n))
            assert np.abs(out.mat - maximally_mixed(n).mat).max() <= 1e-12

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            apply_channel(identity_channel(1), maximally_mixed(2))


class TestTransforms:
    def test_uniform_channel_eigenvalues(self):
        eig = eigenvalues(uniform_channel(2))
        expected = np.zeros(16)
        expected[0] = 1.0
        assert np.abs(eig.values - expected).max() < 1e-15

    def test_identity_channel_eigenvalues(self):
        eig = eigenvalues(identity_channel(3))
        assert np.array_equal(eig.values, np.ones(64))

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_round_trip(self, n):
        rng = make_generator(2, n)
        for _ in range(5):
            ch = random_channel(n, rng)
            back = inverse_transform(eigenvalues(ch))
            assert np.abs(back - ch.probs).max() <= 1e-12

    @pytest.mark.parametrize("n", [1, 2])
    def test_butterfly_equals_naive_exactly(self, n):
        rng = make_generator(3, n)
        for _ in range(5):
            vec = rng.integers(-50, 50, size=4 ** n).astype(float)
            assert np.array_equal(symplectic_transform(vec, n), naive_symplectic_transform(vec, n))

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_parseval(self, n):
        d = 1 << n
        rng = make_generator(4, n)
        for _ in range(20):
            p = rng.dirichlet(np.ones(4 ** n))
            q = rng.dirichlet(np.ones(4 ** n))
            lhs = d * np.linalg.norm(p - q)
            rhs = np.linalg.norm(symplectic_transform(p, n) - symplectic_transform(q, n))
            assert abs(lhs - rhs) <= 1e-9 * rhs

    def test_eigenvalue_vector_validation(self):
        with pytest.raises(ValueError):
            EigenvalueVector(1, np.array([0.9, 0, 0, 0]))  # identity entry must be 1
        with pytest.raises(ValueError):
            EigenvalueVector(1, np.array([1.0, 2.0, 0, 0]))  # out of [-1, 1]


class TestDistances:
    def test_zero_distance(self):
        rng = make_generator(5)
        ch = random_channel(2, rng)
        assert tv_distance(ch, ch) == 0.0

    def test_identity_vs_uniform_n1(self):
        # (1/2)(|1 - 1/4| + 3/4) = 3/4
        assert tv_distance(identity_channel(1), uniform_channel(1)) == pytest.approx(0.75)

    def test_diamond_is_twice_tv(self):
        rng = make_generator(6)
        a, b = random_channel(2, rng), random_channel(2, rng)
        assert diamond_distance(a, b) == 2 * tv_distance(a, b)

    def test_rademacher_pair_hamming_form(self):
        # TV between two family members equals (2 eps / d^2) * sum |alpha - alpha'|
        from pauli_tomo import sample_hard_channel

        eps = 0.01
        (s1, c1), (s2, c2) = (sample_hard_channel("rademacher", 2, eps, k) for k in (1, 2))
        direct = tv_distance(c1, c2)
        hamming_form = (2 * eps / 16) * np.abs(s1.alpha - s2.alpha).sum()
        assert direct == pytest.approx(hamming_form, abs=1e-15)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            tv_distance(identity_channel(1), identity_channel(2))


class TestSequences:
    def test_m1_equals_apply_channel(self):
        rng = make_generator(7)
        ch = random_channel(2, rng)
        rho = random_density_matrix(2, rng)
        seq = ChannelSequence(channel=ch, m=1)
        assert np.abs(apply_sequence(seq, rho).mat - apply_channel(ch, rho).mat).max() == 0.0

    def test_identity_fixed_point(self):
        rng = make_generator(8)
        from pauli_tomo import random_unital_intertwiner

        tw = tuple(random_unital_intertwiner(2, rng) for _ in range(2))
        seq = ChannelSequence(channel=identity_channel(2), m=3, intertwiners=tw)
        out = apply_sequence(seq, maximally_mixed(2))
        assert np.abs(out.mat - maximally_mixed(2).mat).max() <= 1e-12

    def test_partial_depolarizing_closed_form(self):
        # p = (1-eps) delta_I + eps * uniform; m uses on |0><0| gives
        # (1-eps)^m |0><0| + (1 - (1-eps)^m) I/d
        eps, m, n = 0.1, 5, 2
        d = 1 << n
        probs = eps * np.full(4 ** n, 1.0 / 4 ** n)
        probs[0] += 1.0 - eps
        ch = make_channel(n, probs)
        seq = ChannelSequence(channel=ch, m=m, intertwiners=tuple(identity_channel(n) for _ in range(m - 1)))
        out = apply_sequence(seq, basis_state(n, 0))
        decay = (1.0 - eps) ** m
        expected = decay * basis_state(n, 0).mat + (1.0 - decay) * np.eye(d) / d
        assert np.abs(out.mat - expected).max() <= 1e-10

    def test_wrong_intertwiner_count(self):
        with pytest.raises(ValueError):
            ChannelSequence(channel=identity_channel(1), m=3, intertwiners=())

    def test_non_unital_intertwiner_rejected(self):
        # amplitude-damping-like non-unitary operators are not expressible here,
        # but a non-unitary matrix must be caught by UnitaryIntertwiner itself
        with pytest.raises(ValueError):
            UnitaryIntertwiner(1, np.array([[1.0, 0.0], [0.0, 0.5]]))

    def test_unitary_intertwiner_applied(self):
        h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
        seq = ChannelSequence(
            channel=identity_channel(1), m=2, intertwiners=(UnitaryIntertwiner(1, h),)
        )
        out = apply_sequence(seq, basis_state(1, 0))
        assert np.abs(out.mat - np.full((2, 2), 0.5)).max() < 1e-12
