"""Stabilizer cover tests: group structure, cosets, states and POVMs."""

import numpy as np
import pytest

from pauli_tomo import (
    PauliOperator,
    build_cover,
    build_measurement,
    coset_representatives,
    group_elements,
    group_from_generators,
    symplectic_product,
)


def group_index_sets(cover):
    return [set(int(i) for i in g.element_indices) for g in cover]


class TestGroupElements:
    def test_n1_z_group(self):
        elems = group_elements([0b10], n=1)  # generator (x=0 | z=1)
        assert {p.index for p in elems} == {0, 2}  # {I, Z}

    def test_n2_x_only_group(self):
        # rows of (I2 | 0): {II, XI, IX, XX} in index terms {0, 1, 2, 3}
        elems = group_elements([0b0001, 0b0010], n=2)
        assert {p.index for p in elems} == {0, 1, 2, 3}
        assert elems[0].index == 0

    def test_rank_deficient_rejected(self):
        with pytest.raises(ValueError):
            group_elements([0b01, 0b01], n=1)


class TestCoverStructure:
    def test_n1_groups_are_z_x_y(self):
        cover = build_cover(1)
        assert group_index_sets(cover) == [{0, 2}, {0, 1}, {0, 3}]

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_counts_and_partition(self, n):
        d = 1 << n
        cover = build_cover(n)
        assert len(cover) == d + 1
        sets = group_index_sets(cover)
        assert all(len(s) == d for s in sets)
        # counting identity forced by the partition
        assert sum(len(s) - 1 for s in sets) == d * d - 1
        union = set().union(*sets)
        assert len(union) == d * d
        for i in range(len(sets)):
            for j in range(i + 1, len(sets)):
                assert sets[i] & sets[j] == {0}

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_commutant_equals_group(self, n):
        d = 1 << n
        for g in build_cover(n):
            members = {int(i) for i in g.element_indices}
            for idx in range(d * d):
                q = PauliOperator.from_index(n, idx)
                commutes_with_all = all(symplectic_product(q, p) == 0 for p in g.elements)
                assert commutes_with_all == (idx in members)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_elements_pairwise_commute(self, n):
        for g in build_cover(n):
            for i, p in enumerate(g.elements):
                for q in g.elements[i + 1:]:
                    assert symplectic_product(p, q) == 0

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            build_cover(0)
        with pytest.raises(ValueError):
            build_cover(7)


class TestCosets:
    def test_n1_z_group_reps(self):
        g = build_cover(1)[0]  # {I, Z}
        assert [p.index for p in coset_representatives(g)] == [0, 1]  # {I, X}

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_unique_factorization(self, n):
        d = 1 << n
        for g in build_cover(n):
            seen = {}
            for rep in g.rep_indices:
                for elem in g.element_indices:
                    idx = int(rep) ^ int(elem)
                    assert idx not in seen
                    seen[idx] = (rep, elem)
            assert len(seen) == d * d

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_reps_commute_and_form_group(self, n):
        for g in build_cover(n):
            reps = list(g.coset_reps)
            assert reps[0].index == 0
            rep_set = {p.index for p in reps}
            for i, p in enumerate(reps):
                for q in reps[i + 1:]:
                    assert symplectic_product(p, q) == 0
                    assert (p.index ^ q.index) in rep_set  # closed under XOR

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_reps_sorted_canonically(self, n):
        for g in build_cover(n):
            idx = [p.index for p in g.coset_reps]
            assert idx == sorted(idx)

    def test_label_positions_consistent(self):
        for g in build_cover(2):
            for label in range(4):
                rep = int(g.rep_index_by_label[label])
                pos = int(g.position_by_label[label])
                assert int(g.rep_indices[pos]) == rep


class TestMeasurements:
    def test_n1_z_group_is_ket0(self):
        meas = build_measurement(build_cover(1)[0])
        assert np.allclose(meas.state_dense.mat, np.diag([1.0, 0.0]))
        assert np.allclose(meas.povm_dense[0], np.diag([1.0, 0.0]))
        assert np.allclose(meas.povm_dense[1], np.diag([0.0, 1.0]))

    def test_n1_x_group_is_plus(self):
        meas = build_measurement(build_cover(1)[1])
        plus = np.full((2, 2), 0.5)
        minus = np.array([[0.5, -0.5], [-0.5, 0.5]])
        assert np.allclose(meas.state_dense.mat, plus)
        assert np.allclose(meas.povm_dense[0], plus)
        assert np.allclose(meas.povm_dense[1], minus)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_povm_identities(self, n):
        d = 1 << n
        for g in build_cover(n):
            meas = build_measurement(g)
            state = meas.state_dense.mat
            assert np.abs(state @ state - state).max() <= 1e-12
            assert abs(np.trace(state).real - 1.0) <= 1e-12
            total = np.zeros((d, d), dtype=complex)
            for element in meas.povm_dense:
                assert np.abs(element @ element - element).max() <= 1e-12
                assert abs(np.trace(element).real - 1.0) <= 1e-12
                total += element
            assert np.abs(total - np.eye(d)).max() <= 1e-12
            # the identity-coset element is the state itself
            assert np.abs(meas.povm_dense[0] - state).max() <= 1e-12

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_group_character_identity(self, n):
        d = 1 << n
        for g in build_cover(n):
            members = {int(i) for i in g.element_indices}
            for idx in range(d * d):
                q = PauliOperator.from_index(n, idx)
                avg = sum(1 if symplectic_product(p, q) == 0 else -1 for p in g.elements) / d
                assert avg == (1 if idx in members else 0)

    @pytest.mark.parametrize("n", [1, 2])
    def test_mutual_unbiasedness(self, n):
        d = 1 << n
        states = [build_measurement(g).state_dense.mat for g in build_cover(n)]
        for i in range(len(states)):
            for j in range(i + 1, len(states)):
                overlap = np.trace(states[i] @ states[j]).real
                assert abs(overlap - 1.0 / d) <= 1e-10


class TestCustomGroups:
    def test_non_commuting_generators_rejected(self):
        # X and Z on the same qubit anticommute
        with pytest.raises(ValueError):
            group_from_generators(2, [0b0001, 0b0100])

    def test_wrong_row_count_rejected(self):
        with pytest.raises(ValueError):
            group_from_generators(2, [0b0001])

    def test_symbolic_group_beyond_dense_range(self):
        # pure-Z group at n = 8: symbolic construction only
        n = 8
        g = group_from_generators(n, [(1 << r) << n for r in range(n)])
        assert len(g.elements) == 1 << n
        assert len(g.coset_reps) == 1 << n
