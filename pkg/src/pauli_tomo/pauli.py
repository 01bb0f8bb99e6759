"""Binary-symplectic n-qubit Pauli algebra.

Every Pauli operator is a pair of n-bit masks (x, z), read with bit j as the
weight-2^j contribution of qubit j.  The canonical index

    idx(P) = int(x) + d * int(z),   d = 2^n

is a bijection onto [0, d^2 - 1] with idx(I) = 0; all vectors, file formats
and outcome labels in this package use it.  Packed as a single integer the
index doubles as the symplectic vector (x | z << n).

Dense realizations use the Hermitian convention

    W(x, z) = i^(x . z) X^x Z^z

so every represented operator is a Hermitian unitary (W(1,1) = Y).  Qubit 0
is the innermost tensor factor, i.e. it acts on the least significant bit of
the computational-basis index.  Phases only appear in ``pauli_multiply``;
conjugation P rho P is phase-free and is computed entrywise as

    (P rho P)[i, j] = (-1)^(z.i + z.j) rho[i^x, j^x]

without materializing the operator.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

MAX_SYMBOLIC_QUBITS = 12
MAX_DENSE_QUBITS = 6

_PAULI_1Q = {
    (0, 0): np.eye(2, dtype=complex),
    (1, 0): np.array([[0, 1], [1, 0]], dtype=complex),
    (0, 1): np.array([[1, 0], [0, -1]], dtype=complex),
    (1, 1): np.array([[0, -1j], [1j, 0]], dtype=complex),
}
_LABEL_1Q = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}


@dataclass(frozen=True)
class PauliOperator:
    """An n-qubit Pauli point of Z_2^{2n} in (x | z) form."""

    n: int
    x: int
    z: int

    def __post_init__(self) -> None:
        if not 1 <= self.n <= MAX_SYMBOLIC_QUBITS:
            raise ValueError(f"qubit count must be in [1, {MAX_SYMBOLIC_QUBITS}], got {self.n}")
        d = 1 << self.n
        if not (0 <= self.x < d and 0 <= self.z < d):
            raise ValueError("x/z masks out of range for n qubits")

    @property
    def index(self) -> int:
        """Canonical index x + d*z (also the packed symplectic vector)."""
        return self.x | (self.z << self.n)

    @classmethod
    def from_index(cls, n: int, index: int) -> "PauliOperator":
        d = 1 << n
        if not 0 <= index < d * d:
            raise ValueError(f"index {index} out of range for n={n}")
        return cls(n, index & (d - 1), index >> n)

    @property
    def weight(self) -> int:
        """Number of qubits on which the operator is not identity."""
        return (self.x | self.z).bit_count()

    @property
    def label(self) -> str:
        """IXZY string, qubit 0 first."""
        return "".join(
            _LABEL_1Q[(self.x >> j) & 1, (self.z >> j) & 1] for j in range(self.n)
        )

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.label


@dataclass(frozen=True)
class DensityMatrix:
    """A validated n-qubit quantum state (Hermitian, PSD, trace one)."""

    n: int
    mat: np.ndarray

    def __post_init__(self) -> None:
        mat = np.array(self.mat, dtype=complex)
        d = 1 << self.n
        if mat.shape != (d, d):
            raise ValueError(f"expected {d}x{d} matrix for n={self.n}, got {mat.shape}")
        if np.abs(mat - mat.conj().T).max() > 1e-12:
            raise ValueError("density matrix is not Hermitian within 1e-12")
        tr = np.trace(mat).real
        if abs(tr - 1.0) > 1e-12:
            raise ValueError(f"trace {tr} deviates from 1 beyond 1e-12")
        if np.linalg.eigvalsh(mat)[0] < -1e-10:
            raise ValueError("density matrix has an eigenvalue below -1e-10")
        mat.flags.writeable = False
        object.__setattr__(self, "mat", mat)


def density_matrix(mat: np.ndarray) -> DensityMatrix:
    """Wrap a raw square matrix as a validated DensityMatrix."""
    d = np.asarray(mat).shape[0]
    n = d.bit_length() - 1
    return DensityMatrix(n, mat)


def maximally_mixed(n: int) -> DensityMatrix:
    d = 1 << n
    return DensityMatrix(n, np.eye(d, dtype=complex) / d)


def basis_state(n: int, k: int = 0) -> DensityMatrix:
    """|k><k| in the computational basis."""
    d = 1 << n
    mat = np.zeros((d, d), dtype=complex)
    mat[k, k] = 1.0
    return DensityMatrix(n, mat)


def random_density_matrix(n: int, rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    """Draw a random state as GG^dag / tr(GG^dag) with complex Gaussian G."""
    d = 1 << n
    r = d if rank is None else rank
    g = rng.standard_normal((d, r)) + 1j * rng.standard_normal((d, r))
    mat = g @ g.conj().T
    mat = (mat + mat.conj().T) / 2
    return DensityMatrix(n, mat / np.trace(mat).real)


def random_unit_vector(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def _check_same_n(p: PauliOperator, q: PauliOperator) -> None:
    if p.n != q.n:
        raise ValueError(f"qubit counts differ: {p.n} vs {q.n}")


def symplectic_product(p: PauliOperator, q: PauliOperator) -> int:
    """x_P.z_Q + z_P.x_Q mod 2; zero iff the dense operators commute."""
    _check_same_n(p, q)
    return ((p.x & q.z).bit_count() + (p.z & q.x).bit_count()) & 1


def symplectic_product_packed(a: int, b: int, n: int) -> int:
    """Symplectic product of two packed (x | z << n) vectors."""
    mask = (1 << n) - 1
    return (((a & mask) & (b >> n)).bit_count() + ((a >> n) & (b & mask)).bit_count()) & 1


def pauli_multiply(p: PauliOperator, q: PauliOperator) -> tuple[int, PauliOperator]:
    """Product W(P)W(Q) = i^k W(R); returns (k mod 4, R).

    Under the Hermitian convention the exponent is
    k = x_P.z_P + x_Q.z_Q + 2 z_P.x_Q - x_R.z_R  (integer dot products).
    """
    _check_same_n(p, q)
    x = p.x ^ q.x
    z = p.z ^ q.z
    k = (
        (p.x & p.z).bit_count()
        + (q.x & q.z).bit_count()
        + 2 * (p.z & q.x).bit_count()
        - (x & z).bit_count()
    ) % 4
    return k, PauliOperator(p.n, x, z)


def pauli_matrix_from_bits(n: int, x: int, z: int) -> np.ndarray:
    """Dense W(x, z), built qubit by qubit (qubit 0 innermost)."""
    if n > MAX_DENSE_QUBITS:
        raise ValueError(f"dense realization capped at n <= {MAX_DENSE_QUBITS}")
    mat = np.ones((1, 1), dtype=complex)
    for j in range(n):
        mat = np.kron(_PAULI_1Q[(x >> j) & 1, (z >> j) & 1], mat)
    return mat


def pauli_to_matrix(p: PauliOperator) -> np.ndarray:
    """Dense W(x, z) = i^(x.z) X^x Z^z as a Hermitian unitary (n <= 6)."""
    return pauli_matrix_from_bits(p.n, p.x, p.z)


@lru_cache(maxsize=8)
def dense_pauli_basis(n: int) -> tuple[np.ndarray, ...]:
    """All d^2 dense Paulis in canonical index order (cached; n <= 4).

    Hot loops at small n index into this; above n = 4 the cache would cost
    tens of megabytes, so build single operators with pauli_to_matrix instead.
    """
    if n > 4:
        raise ValueError("dense_pauli_basis is capped at n <= 4; use pauli_to_matrix")
    d = 1 << n
    mats = tuple(
        pauli_matrix_from_bits(n, idx & (d - 1), idx >> n) for idx in range(d * d)
    )
    for m in mats:
        m.flags.writeable = False
    return mats


def conjugate_matrix(n: int, x: int, z: int, mat: np.ndarray) -> np.ndarray:
    """W(x,z) mat W(x,z) via index arithmetic; O(d^2), no operator built."""
    d = 1 << n
    idx = np.arange(d)
    signs = 1.0 - 2.0 * (np.bitwise_count(idx & z) & 1)
    perm = idx ^ x
    out = mat[np.ix_(perm, perm)] * np.outer(signs, signs)
    return out


def conjugate_density(p: PauliOperator, rho: DensityMatrix) -> DensityMatrix:
    """P rho P; phase-free and trace preserving."""
    if p.n != rho.n:
        raise ValueError(f"qubit counts differ: {p.n} vs {rho.n}")
    return DensityMatrix(rho.n, conjugate_matrix(rho.n, p.x, p.z, rho.mat))
