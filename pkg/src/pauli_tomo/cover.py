"""The d+1 mutually unbiased stabilizer groups covering the Pauli group.

Groups are given by n x 2n generator matrices over GF(2) in (x | z) layout:
the pure-Z group (0 | I) plus the d groups (I | A_i), where A_i is the GF(2)
combination of the field structure matrices selected by the bits of i.  Every
nonzero combination is invertible, which makes the d+1 groups intersect only
in the identity and cover all d^2 Paulis.

Coset representatives of a group G are not arbitrary picks: they are the
elements of a complementary stabilizer group, built by completing G's
generators to a symplectic basis (solve <g_r, t_s> = delta_rs, then correct
the t's against each other so they commute).  Representative r_c of coset
label c = (<g_1,Q>, ..., <g_n,Q>) is the matching combination of the t's;
the public ordering sorts representatives by canonical Pauli index.

Dense realizations carry one sign per element, fixed by the ordered product
of generators, so that the represented set is an honest stabilizer group and
rho_G = (1/d) sum_c s_c W(v_c) is a rank-one projector.  Outcome statistics
(coset distributions, eigenvalue estimators) never see these signs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf2 import GF2Matrix, field_spec, gf2_solve, structure_matrices, row_reduce
from .pauli import (
    DensityMatrix,
    MAX_DENSE_QUBITS,
    PauliOperator,
    pauli_matrix_from_bits,
    pauli_multiply,
    symplectic_product_packed,
)

COVER_MAX_QUBITS = 6


@dataclass(frozen=True, eq=False)
class StabilizerGroup:
    """One maximal Abelian block of the cover, with canonical coset labels."""

    n: int
    generators: GF2Matrix
    elements: tuple[PauliOperator, ...]
    coset_reps: tuple[PauliOperator, ...]
    element_indices: np.ndarray
    rep_indices: np.ndarray
    rep_index_by_label: np.ndarray
    position_by_label: np.ndarray

    @property
    def generator_rows(self) -> tuple[int, ...]:
        """Generator rows as packed (x | z << n) integers."""
        return self.generators.bits


@dataclass(frozen=True, eq=False)
class StabilizerMeasurement:
    """Dense input state rho_G and the d-outcome POVM of a group."""

    group: StabilizerGroup
    state_dense: DensityMatrix
    povm_dense: tuple[np.ndarray, ...]
    element_signs: np.ndarray


def _swap_halves(v: int, n: int) -> int:
    mask = (1 << n) - 1
    return (v >> n) | ((v & mask) << n)


def _combinations(rows: list[int]) -> np.ndarray:
    """All 2^k XOR combinations in combination order (index bit k = row k)."""
    out = np.zeros(1 << len(rows), dtype=np.int64)
    for k, row in enumerate(rows):
        size = 1 << k
        out[size : 2 * size] = out[:size] ^ row
    return out


def group_elements(generators: GF2Matrix | list[int], n: int | None = None) -> list[PauliOperator]:
    """Expand generator rows into all 2^n group elements.

    Accepts an n x 2n GF2Matrix or packed rows plus n.  Raises if the rows
    are dependent over GF(2).
    """
    if isinstance(generators, GF2Matrix):
        rows = list(generators.bits)
        n = generators.cols // 2
    else:
        if n is None:
            raise ValueError("n is required when passing packed rows")
        rows = list(generators)
    _, pivots = row_reduce(rows, 2 * n)
    if len(pivots) < len(rows):
        raise ValueError("generator rows are dependent over GF(2)")
    packed = _combinations(rows)
    return [PauliOperator.from_index(n, int(v)) for v in packed]


def _complementary_rows(n: int, gen_rows: list[int]) -> list[int]:
    """Complete isotropic generators to a symplectic basis; return the duals.

    Returns rows t_1..t_n with <g_r, t_s> = delta_rs and <t_r, t_s> = 0.
    """
    # <g_r, w> = parity(swap(g_r) & w): one linear equation per generator.
    eq_rows = [_swap_halves(g, n) for g in gen_rows]
    targets = [1 << r for r in range(n)]
    duals = gf2_solve(eq_rows, 2 * n, targets)
    # Make the duals pairwise commute; adding generator rows keeps the
    # pairing with the g's intact because the group is isotropic.
    for s in range(n):
        fixed = duals[s]
        for r in range(s):
            if symplectic_product_packed(duals[r], fixed, n):
                fixed ^= gen_rows[r]
        duals[s] = fixed
    return duals


def group_from_generators(n: int, gen_rows: list[int]) -> StabilizerGroup:
    """Build a group (elements, canonical cosets) from packed generator rows."""
    if len(gen_rows) != n:
        raise ValueError(f"expected {n} generator rows, got {len(gen_rows)}")
    for r in range(n):
        for s in range(r + 1, n):
            if symplectic_product_packed(gen_rows[r], gen_rows[s], n):
                raise ValueError("generators do not commute")
    elements = group_elements(gen_rows, n)
    element_indices = np.array([p.index for p in elements], dtype=np.int64)

    dual_rows = _complementary_rows(n, gen_rows)
    rep_by_label = _combinations(dual_rows)
    order = np.argsort(rep_by_label)
    position_by_label = np.empty_like(order)
    position_by_label[order] = np.arange(len(order))
    rep_indices = rep_by_label[order]
    coset_reps = tuple(PauliOperator.from_index(n, int(v)) for v in rep_indices)

    generators = GF2Matrix(n, 2 * n, tuple(gen_rows))
    return StabilizerGroup(
        n=n,
        generators=generators,
        elements=tuple(elements),
        coset_reps=coset_reps,
        element_indices=element_indices,
        rep_indices=rep_indices,
        rep_index_by_label=rep_by_label,
        position_by_label=position_by_label,
    )


def coset_representatives(group: StabilizerGroup) -> list[PauliOperator]:
    """The canonical (sorted, mutually commuting) coset representatives."""
    return list(group.coset_reps)


def coset_labels(group: StabilizerGroup, packed: np.ndarray) -> np.ndarray:
    """Coset label bits (<g_r, Q>)_r for an array of packed Pauli indices."""
    labels = np.zeros(packed.shape, dtype=np.int64)
    for r, row in enumerate(group.generator_rows):
        bits = np.bitwise_count(np.bitwise_and(packed, _swap_halves(row, group.n))) & 1
        labels |= bits.astype(np.int64) << r
    return labels


def build_cover(n: int) -> list[StabilizerGroup]:
    """The d+1 groups: (0 | I) plus (I | A_i) for i = 0 .. d-1."""
    if not 1 <= n <= COVER_MAX_QUBITS:
        raise ValueError(f"cover construction supports 1 <= n <= {COVER_MAX_QUBITS}")
    d = 1 << n
    spec = field_spec(n)
    b_mats = structure_matrices(spec)

    groups = [group_from_generators(n, [(1 << r) << n for r in range(n)])]
    for i in range(d):
        a_rows = [0] * n
        for k in range(n):
            if (i >> k) & 1:
                a_rows = [row ^ b for row, b in zip(a_rows, b_mats[k].bits)]
        gen_rows = [(1 << r) | (a_rows[r] << n) for r in range(n)]
        groups.append(group_from_generators(n, gen_rows))
    return groups


def _signed_elements(group: StabilizerGroup) -> np.ndarray:
    """Sign of each element under the ordered-generator-product convention.

    Element c is the operator product g_1^{c_1} ... g_n^{c_n}; tracking the
    i^k phases of pauli_multiply yields +-1 because the generators commute.
    """
    n = group.n
    gens = [PauliOperator.from_index(n, row) for row in group.generator_rows]
    size = 1 << n
    phases = np.zeros(size, dtype=np.int64)
    current: list[PauliOperator | None] = [None] * size
    current[0] = PauliOperator(n, 0, 0)
    for k, g in enumerate(gens):
        block = 1 << k
        for c in range(block):
            ph, r = pauli_multiply(current[c], g)
            phases[c + block] = (phases[c] + ph) % 4
            current[c + block] = r
    if np.any(phases % 2):
        raise AssertionError("commuting generators produced an odd phase")
    return np.where(phases % 4 == 0, 1, -1)


def build_measurement(group: StabilizerGroup) -> StabilizerMeasurement:
    """Dense rho_G and POVM {M_G^Q}, validated as rank-one projectors."""
    n = group.n
    if n > MAX_DENSE_QUBITS:
        raise ValueError(f"dense realization capped at n <= {MAX_DENSE_QUBITS}")
    d = 1 << n
    signs = _signed_elements(group)
    dense = [
        pauli_matrix_from_bits(n, int(v) & (d - 1), int(v) >> n)
        for v in group.element_indices
    ]

    state = sum(s * m for s, m in zip(signs, dense)) / d
    _check_projector(state, "stabilizer state")

    povm = []
    for rep in group.rep_indices:
        chars = np.array(
            [1 - 2 * symplectic_product_packed(int(v), int(rep), n) for v in group.element_indices]
        )
        element = sum(s * c * m for s, c, m in zip(signs, chars, dense)) / d
        _check_projector(element, "POVM element")
        povm.append(element)
    completeness = np.abs(sum(povm) - np.eye(d)).max()
    if completeness > 1e-12:
        raise AssertionError(f"POVM completeness violated: {completeness}")

    return StabilizerMeasurement(
        group=group,
        state_dense=DensityMatrix(n, state),
        povm_dense=tuple(povm),
        element_signs=signs,
    )


def _check_projector(mat: np.ndarray, what: str) -> None:
    if np.abs(mat @ mat - mat).max() > 1e-12:
        raise AssertionError(f"{what} is not idempotent within 1e-12")
    if abs(np.trace(mat).real - 1.0) > 1e-12:
        raise AssertionError(f"{what} does not have unit trace")
