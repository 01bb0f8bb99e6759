"""Learner tests: shot rules, estimators, reconstruction, projection."""

import numpy as np
import pytest

from pauli_tomo import (
    PauliOperator,
    TomographyConfig,
    build_cover,
    derive_stream,
    estimate_group_eigenvalues,
    eigenvalues,
    identity_channel,
    induced_group_distribution,
    learn_pauli_channel,
    make_generator,
    project_to_simplex,
    random_channel,
    reconstruct_distribution,
    required_samples,
    sample_outcomes,
    symplectic_product,
    tv_distance,
    uniform_channel,
)
from pauli_tomo.measurement import SampleBatch
from pauli_tomo.tomography import assemble_eigenvalues, raw_samples
from pauli_tomo.verify import brute_force_simplex_projection


class TestRequiredSamples:
    def test_box_rule_n1(self):
        # ceil(4 log(12) / 0.04) = ceil(248.49) = 249
        assert required_samples(1, 0.1, "paper_box") == 249

    def test_proof_rule_n2(self):
        # ceil(16 log(40) / 0.02) = ceil(2951.06) = 2952
        assert required_samples(2, 0.1, "paper_proof") == 2952

    def test_proof_is_twice_box_raw(self):
        for n in (1, 2, 3, 4):
            for eps in (0.02, 0.1, 0.3, 1.0):
                assert raw_samples(n, eps, "paper_proof") == pytest.approx(
                    2.0 * raw_samples(n, eps, "paper_box"), rel=1e-14
                )

    def test_custom_rule(self):
        assert required_samples(3, 0.5, 1234) == 1234

    def test_epsilon_out_of_range(self):
        with pytest.raises(ValueError):
            required_samples(1, 0.0, "paper_box")
        with pytest.raises(ValueError):
            required_samples(1, 1.5, "paper_proof")
        with pytest.raises(ValueError):
            TomographyConfig(n=1, epsilon=0.0)


class TestGroupEstimates:
    def test_all_x_coset_outcomes(self):
        # G = {I, Z}, every outcome in the X coset: qhat(Z) = (-1)^(X.Z) = -1
        g = build_cover(1)[0]
        batch = SampleBatch(outcomes=np.ones(100, dtype=np.int64), seed=0, count=100)
        est = estimate_group_eigenvalues(batch, g)
        assert est[0] == 1.0
        assert est[2] == -1.0  # index 2 is Z

    def test_identity_channel_saturates(self):
        g = build_cover(2)[1]
        dist = induced_group_distribution(identity_channel(2), g)
        batch = sample_outcomes(dist, 500, seed=4)
        est = estimate_group_eigenvalues(batch, g)
        assert all(v == 1.0 for v in est.values())

    def test_uniform_channel_subgaussian_tail(self):
        # E qhat(P) = 0 for P != I; |qhat| <= 4/sqrt(N) at a fixed seed
        g = build_cover(2)[2]
        dist = induced_group_distribution(uniform_channel(2), g)
        n_shots = 4096
        batch = sample_outcomes(dist, n_shots, seed=99)
        est = estimate_group_eigenvalues(batch, g)
        for idx, value in est.items():
            if idx != 0:
                assert abs(value) <= 4.0 / np.sqrt(n_shots)

    def test_unbiased_against_exact_distribution(self):
        # exact expectation of (-1)^(Q.P) under p_G equals phat(P) for P in G
        rng = make_generator(55)
        for n in (1, 2, 3):
            ch = random_channel(n, rng)
            p_hat = eigenvalues(ch).values
            for g in build_cover(n):
                dist = induced_group_distribution(ch, g)
                for p in g.elements:
                    exact = sum(
                        prob * (-1.0) ** symplectic_product(PauliOperator.from_index(n, int(q)), p)
                        for q, prob in zip(dist.labels, dist.probs)
                    )
                    assert exact == pytest.approx(p_hat[p.index], abs=1e-12)

    def test_label_out_of_range_rejected(self):
        g = build_cover(1)[0]
        batch = SampleBatch(outcomes=np.array([0, 5]), seed=0, count=2)
        with pytest.raises(ValueError):
            estimate_group_eigenvalues(batch, g)


class TestReconstruction:
    def test_exact_eigenvalues_invert(self):
        rng = make_generator(66)
        ch = random_channel(2, rng)
        q_raw = reconstruct_distribution(eigenvalues(ch).values)
        assert np.abs(q_raw - ch.probs).max() <= 1e-12

    def test_all_ones_gives_identity(self):
        q_raw = reconstruct_distribution(np.ones(16))
        expected = np.zeros(16)
        expected[0] = 1.0
        assert np.abs(q_raw - expected).max() <= 1e-15

    def test_missing_estimates_rejected(self):
        with pytest.raises(ValueError):
            assemble_eigenvalues(1, [{0: 1.0, 1: 0.5}])  # indices 2, 3 missing

    def test_parseval_on_perturbed_estimates(self):
        rng = make_generator(67)
        ch = random_channel(2, rng)
        p_hat = eigenvalues(ch).values
        q_hat = p_hat + 0.01 * rng.standard_normal(16)
        q_hat[0] = 1.0
        q_raw = reconstruct_distribution(q_hat)
        lhs = 4 * np.linalg.norm(q_raw - ch.probs)
        rhs = np.linalg.norm(q_hat - p_hat)
        assert lhs == pytest.approx(rhs, rel=1e-10)


class TestSimplexProjection:
    def test_worked_example(self):
        # oracle-verified: (0.6, 0.6, -0.2) projects to (0.5, 0.5, 0)
        v = np.array([0.6, 0.6, -0.2])
        assert np.allclose(brute_force_simplex_projection(v), [0.5, 0.5, 0.0])
        assert np.allclose(project_to_simplex(v), [0.5, 0.5, 0.0], atol=1e-15)

    def test_large_spike(self):
        # oracle-verified: (2, 0, 0, 0) projects to (1, 0, 0, 0)
        v = np.array([2.0, 0.0, 0.0, 0.0])
        assert np.allclose(brute_force_simplex_projection(v), [1.0, 0.0, 0.0, 0.0])
        assert np.allclose(project_to_simplex(v), [1.0, 0.0, 0.0, 0.0], atol=1e-15)

    def test_member_unchanged(self):
        rng = make_generator(68)
        for _ in range(20):
            p = rng.dirichlet(np.ones(8))
            assert np.abs(project_to_simplex(p) - p).max() <= 1e-12

    def test_matches_brute_force_qp(self):
        rng = make_generator(69)
        for _ in range(200):
            length = int(rng.integers(1, 13))
            v = rng.normal(0.0, 1.5, size=length)
            fast = project_to_simplex(v)
            brute = brute_force_simplex_projection(v)
            assert np.abs(fast - brute).max() <= 1e-9
            assert fast.min() >= 0.0
            assert fast.sum() == pytest.approx(1.0, abs=1e-12)

    def test_projection_is_contraction_toward_members(self):
        rng = make_generator(70)
        for _ in range(50):
            v = rng.normal(0.0, 1.0, size=6)
            r = project_to_simplex(v)
            s = rng.dirichlet(np.ones(6))
            assert np.linalg.norm(r - v) <= np.linalg.norm(s - v) + 1e-12

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            project_to_simplex(np.array([1.0, np.nan]))


class TestLearner:
    def test_identity_truth(self):
        cfg = TomographyConfig(n=2, epsilon=0.1, seed=1)
        rec, diag = learn_pauli_channel(identity_channel(2), cfg)
        assert diag["tv_error"] <= 1e-12

    def test_total_count_arithmetic(self):
        cfg = TomographyConfig(n=2, epsilon=0.1, sample_rule="paper_proof", seed=1)
        _, diag = learn_pauli_channel(identity_channel(2), cfg)
        assert diag["n_per_group"] == 2952
        assert diag["n_total"] == 5 * 2952 == 14760

    def test_contraction_and_chain(self):
        truth = random_channel(2, make_generator(71))
        cfg = TomographyConfig(n=2, epsilon=0.1, seed=9)
        rec, diag = learn_pauli_channel(truth, cfg)
        assert diag["l2_error_projected"] <= diag["l2_error_raw"] + 1e-15
        l1 = np.abs(rec.probs - truth.probs).sum()
        assert l1 <= 4 * diag["l2_error_projected"] + 1e-12

    def test_callable_oracle(self):
        truth = random_channel(2, make_generator(72))
        cfg = TomographyConfig(n=2, epsilon=0.1, seed=10)
        rec_direct, _ = learn_pauli_channel(truth, cfg)
        rec_via_callable, diag = learn_pauli_channel(
            lambda g: induced_group_distribution(truth, g), cfg
        )
        assert np.array_equal(rec_direct.probs, rec_via_callable.probs)
        assert "tv_error" not in diag  # truth unknown through a callable

    def test_deterministic_given_seed(self):
        truth = random_channel(2, make_generator(73))
        cfg = TomographyConfig(n=2, epsilon=0.1, seed=11)
        a, _ = learn_pauli_channel(truth, cfg)
        b, _ = learn_pauli_channel(truth, cfg)
        assert np.array_equal(a.probs, b.probs)

    def test_seeded_success_rate(self):
        # 20 quick trials at n = 2, eps = 0.1: every one should succeed
        for trial in range(20):
            truth = random_channel(2, make_generator(74, trial))
            cfg = TomographyConfig(n=2, epsilon=0.1, seed=derive_stream(74, trial))
            _, diag = learn_pauli_channel(truth, cfg)
            assert diag["tv_error"] <= 0.1
            assert tv_distance(truth, _learned(truth, cfg)) == diag["tv_error"]


def _learned(truth, cfg):
    rec, _ = learn_pauli_channel(truth, cfg)
    return rec
