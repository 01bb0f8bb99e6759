"""GF(2)/GF(2^n) arithmetic and structure-matrix tests."""

import pytest

from pauli_tomo import field_spec, gf2_det, gf2_matrix, gf2_rank, gf2n_mul, structure_matrices
from pauli_tomo.gf2 import FieldSpec, IRREDUCIBLE_POLYS, _clmod, _clmul, is_irreducible


def poly_mul_mod_oracle(a: int, b: int, mod: int) -> int:
    """Independent long-division oracle: schoolbook product, then repeated
    subtraction of shifted copies of the modulus."""
    prod = 0
    for i in range(a.bit_length()):
        if (a >> i) & 1:
            prod ^= b << i
    deg_mod = mod.bit_length() - 1
    while prod.bit_length() - 1 >= deg_mod and prod:
        prod ^= mod << (prod.bit_length() - 1 - deg_mod)
    return prod


class TestFieldArithmetic:
    def test_gf2_identity(self):
        spec = field_spec(1)
        assert gf2n_mul(1, 1, spec) == 1

    def test_t_squared_in_gf4(self):
        # t * t = t^2 = t + 1 mod (t^2 + t + 1): bitmask 2*2 -> 3
        spec = field_spec(2)
        assert gf2n_mul(2, 2, spec) == 3
        assert poly_mul_mod_oracle(2, 2, spec.poly) == 3

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_multiplicative_identity_exhaustive(self, n):
        spec = field_spec(n)
        for a in range(1 << n):
            assert gf2n_mul(a, 1, spec) == a

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_against_long_division_oracle(self, n):
        spec = field_spec(n)
        for a in range(1 << n):
            for b in range(1 << n):
                assert gf2n_mul(a, b, spec) == poly_mul_mod_oracle(a, b, spec.poly)

    def test_field_has_no_zero_divisors(self):
        spec = field_spec(3)
        for a in range(1, 8):
            products = {gf2n_mul(a, b, spec) for b in range(1, 8)}
            assert products == set(range(1, 8))

    def test_built_in_polys_are_irreducible(self):
        for n, poly in IRREDUCIBLE_POLYS.items():
            assert poly.bit_length() - 1 == n
            assert is_irreducible(poly)

    def test_reducible_poly_rejected(self):
        with pytest.raises(ValueError):
            FieldSpec(2, 0b110)  # t^2 + t = t(t+1)
        with pytest.raises(ValueError):
            FieldSpec(4, 0b10001)  # t^4 + 1 = (t+1)^4

    def test_clmul_and_clmod(self):
        assert _clmul(0b11, 0b11) == 0b101  # (t+1)^2 = t^2 + 1
        assert _clmod(0b101, 0b111) == 0b010  # t^2+1 mod t^2+t+1 = t


class TestStructureMatrices:
    def test_n1(self):
        mats = structure_matrices(field_spec(1))
        assert len(mats) == 1 and mats[0].to_lists() == [[1]]

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_symmetric(self, n):
        for b in structure_matrices(field_spec(n)):
            assert b.is_symmetric()

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_all_nonzero_combinations_invertible(self, n):
        mats = structure_matrices(field_spec(n))
        for alpha in range(1, 1 << n):
            combined = gf2_matrix([0] * n, n)
            for k in range(n):
                if (alpha >> k) & 1:
                    combined = combined ^ mats[k]
            assert gf2_det(combined) == 1

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_a_matrices_pairwise_distinct_and_separated(self, n):
        mats = structure_matrices(field_spec(n))

        def a_mat(i):
            acc = gf2_matrix([0] * n, n)
            for k in range(n):
                if (i >> k) & 1:
                    acc = acc ^ mats[k]
            return acc

        mats_a = [a_mat(i) for i in range(1 << n)]
        for i in range(1 << n):
            for j in range(i + 1, 1 << n):
                diff = mats_a[i] ^ mats_a[j]
                assert any(diff.bits), "A matrices must be pairwise distinct"
                assert gf2_det(diff) == 1


class TestLinearAlgebra:
    def test_identity_det(self):
        for n in (1, 2, 3, 5):
            eye = gf2_matrix([1 << i for i in range(n)], n)
            assert gf2_det(eye) == 1 and gf2_rank(eye) == n

    def test_zero_matrix(self):
        zero = gf2_matrix([0, 0], 2)
        assert gf2_det(zero) == 0 and gf2_rank(zero) == 0

    def test_two_by_two_cofactor_oracle(self):
        # det [[1,1],[1,0]] = 1*0 - 1*1 = 1 over GF(2)
        m = gf2_matrix([[1, 1], [1, 0]])
        assert gf2_det(m) == 1

    def test_det_requires_square(self):
        with pytest.raises(ValueError):
            gf2_det(gf2_matrix([[1, 0, 1]]))

    def test_rank_of_dependent_rows(self):
        m = gf2_matrix([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
        assert gf2_rank(m) == 2

    def test_det_matches_exhaustive_permanent_mod2(self):
        # Over GF(2) the determinant equals the permanent; brute force n=3.
        import itertools

        for bits in itertools.product([0, 1], repeat=9):
            rows = [list(bits[0:3]), list(bits[3:6]), list(bits[6:9])]
            m = gf2_matrix(rows)
            perm = 0
            for p in itertools.permutations(range(3)):
                term = rows[0][p[0]] & rows[1][p[1]] & rows[2][p[2]]
                perm ^= term
            assert gf2_det(m) == perm
