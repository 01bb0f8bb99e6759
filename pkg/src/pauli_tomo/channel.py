"""Pauli channels: probability vectors over the Pauli group.

A channel is a length-d^2 probability vector p indexed canonically (see
pauli.py); it acts as rho -> sum_P p(P) P rho P.  Its eigenvalue vector is
the +-1 character transform with the symplectic pairing,

    phat(P) = sum_Q p(Q) (-1)^(Q.P),

computed in O(d^2 log d^2) by swapping the x/z halves of the index (which
turns the symplectic pairing into a plain dot product) and running a standard
Walsh-Hadamard butterfly.  The diamond distance between two Pauli channels is
exactly twice the total-variation distance of their probability vectors.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .pauli import DensityMatrix, conjugate_matrix, maximally_mixed

UNITALITY_CHECK_MAX_QUBITS = 3
SEQUENCE_MAX_QUBITS = 3


@dataclass(frozen=True)
class PauliChannel:
    """Probability vector over P_n in canonical index order."""

    n: int
    probs: np.ndarray

    def __post_init__(self) -> None:
        probs = np.asarray(self.probs, dtype=float)
        if probs.shape != (4 ** self.n,):
            raise ValueError(f"expected {4 ** self.n} probabilities, got {probs.shape}")
        if probs.min() < -1e-12:
            raise ValueError("negative probability beyond 1e-12")
        probs = np.clip(probs, 0.0, None)
        if abs(probs.sum() - 1.0) > 1e-10:
            raise ValueError("probabilities do not sum to 1 within 1e-10")
        probs.flags.writeable = False
        object.__setattr__(self, "probs", probs)


@dataclass(frozen=True)
class EigenvalueVector:
    """Character-transform values phat(P); phat(I) = 1 exactly."""

    n: int
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if values.shape != (4 ** self.n,):
            raise ValueError(f"expected {4 ** self.n} values, got {values.shape}")
        if values[0] != 1.0:
            raise ValueError("eigenvalue of the identity must be exactly 1")
        if np.abs(values).max() > 1.0 + 1e-9:
            raise ValueError("eigenvalues must lie in [-1, 1]")
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class UnitaryIntertwiner:
    """Dense unitary conjugation used as a free unital operation."""

    n: int
    u: np.ndarray

    def __post_init__(self) -> None:
        u = np.asarray(self.u, dtype=complex)
        d = 1 << self.n
        if u.shape != (d, d):
            raise ValueError(f"expected {d}x{d} unitary, got {u.shape}")
        if np.abs(u @ u.conj().T - np.eye(d)).max() > 1e-10:
            raise ValueError("matrix is not unitary within 1e-10")
        u = u.copy()
        u.flags.writeable = False
        object.__setattr__(self, "u", u)


Intertwiner = PauliChannel | UnitaryIntertwiner


@dataclass(frozen=True)
class ChannelSequence:
    """m uses of one channel with m-1 unital intertwiners in between."""

    channel: PauliChannel
    m: int
    intertwiners: tuple[Intertwiner, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError("use count m must be >= 1")
        if len(self.intertwiners) != self.m - 1:
            raise ValueError(
                f"need exactly m-1 = {self.m - 1} intertwiners, got {len(self.intertwiners)}"
            )
        n = self.channel.n
        for nj in self.intertwiners:
            if nj.n != n:
                raise ValueError("intertwiner qubit count mismatch")
            if n <= UNITALITY_CHECK_MAX_QUBITS and not _is_unital(nj):
                raise ValueError("intertwiner is not unital within 1e-10")


def _is_unital(op: Intertwiner) -> bool:
    n = op.n
    mixed = maximally_mixed(n).mat
    if isinstance(op, UnitaryIntertwiner):
        out = op.u @ mixed @ op.u.conj().T
    else:
        out = _apply_channel_matrix(op, mixed)
    return bool(np.abs(out - mixed).max() <= 1e-10)


def make_channel(n: int, probs: np.ndarray) -> PauliChannel:
    """Validate, clamp tiny negatives, renormalize, and wrap."""
    probs = np.asarray(probs, dtype=float)
    if probs.shape != (4 ** n,):
        raise ValueError(f"expected {4 ** n} probabilities, got {probs.shape}")
    if not np.all(np.isfinite(probs)):
        raise ValueError("probabilities must be finite")
    if probs.min() < -1e-8:
        raise ValueError(f"negative mass {probs.min()} beyond tolerance 1e-8")
    total = probs.sum()
    if abs(total - 1.0) > 1e-8:
        raise ValueError(f"probabilities sum to {total}, expected 1 within 1e-8")
    clamped = np.clip(probs, 0.0, None)
    return PauliChannel(n, clamped / clamped.sum())


def uniform_channel(n: int) -> PauliChannel:
    """The completely depolarizing channel."""
    return PauliChannel(n, np.full(4 ** n, 1.0 / 4 ** n))


def identity_channel(n: int) -> PauliChannel:
    probs = np.zeros(4 ** n)
    probs[0] = 1.0
    return PauliChannel(n, probs)


def random_channel(n: int, rng: np.random.Generator, alpha: float = 1.0) -> PauliChannel:
    """Symmetric-Dirichlet random channel (alpha = 1 gives the flat prior)."""
    return PauliChannel(n, rng.dirichlet(np.full(4 ** n, alpha)))


def _apply_channel_matrix(ch: PauliChannel, mat: np.ndarray) -> np.ndarray:
    d = 1 << ch.n
    out = np.zeros_like(mat, dtype=complex)
    for idx in np.flatnonzero(ch.probs > 0.0):
        out += ch.probs[idx] * conjugate_matrix(ch.n, int(idx) & (d - 1), int(idx) >> ch.n, mat)
    return out


def apply_channel(ch: PauliChannel, rho: DensityMatrix) -> DensityMatrix:
    """sum_P p(P) P rho P, validated as a state on output."""
    if ch.n != rho.n:
        raise ValueError(f"qubit counts differ: {ch.n} vs {rho.n}")
    return DensityMatrix(rho.n, _apply_channel_matrix(ch, rho.mat))


def apply_sequence(seq: ChannelSequence, rho: DensityMatrix) -> DensityMatrix:
    """Alternate channel and intertwiners: P . N_{m-1} . ... . N_1 . P."""
    if seq.channel.n != rho.n:
        raise ValueError("qubit count mismatch")
    if rho.n > SEQUENCE_MAX_QUBITS:
        raise ValueError(f"dense sequence path capped at n <= {SEQUENCE_MAX_QUBITS}")
    mat = _apply_channel_matrix(seq.channel, rho.mat)
    for nj in seq.intertwiners:
        if isinstance(nj, UnitaryIntertwiner):
            mat = nj.u @ mat @ nj.u.conj().T
        else:
            mat = _apply_channel_matrix(nj, mat)
        mat = _apply_channel_matrix(seq.channel, mat)
    return DensityMatrix(rho.n, mat)


def _half_swap_permutation(n: int) -> np.ndarray:
    """Index permutation sigma(x + d z) = z + d x."""
    idx = np.arange(4 ** n)
    d = 1 << n
    return (idx >> n) | ((idx & (d - 1)) << n)


def _fwht(values: np.ndarray) -> np.ndarray:
    """In-place-style Walsh-Hadamard butterfly; returns a new array."""
    a = np.array(values, dtype=float)
    size = a.shape[0]
    h = 1
    while h < size:
        view = a.reshape(-1, 2, h)
        top = view[:, 0, :] + view[:, 1, :]
        bottom = view[:, 0, :] - view[:, 1, :]
        view[:, 0, :] = top
        view[:, 1, :] = bottom
        h *= 2
    return a


def symplectic_transform(values: np.ndarray, n: int) -> np.ndarray:
    """out[P] = sum_Q values[Q] (-1)^(P.Q); self-inverse up to a d^2 factor."""
    values = np.asarray(values, dtype=float)
    if values.shape != (4 ** n,):
        raise ValueError(f"expected length {4 ** n}, got {values.shape}")
    return _fwht(values[_half_swap_permutation(n)])


def eigenvalues(ch: PauliChannel) -> EigenvalueVector:
    """Character transform of the channel; values[I] pinned to exactly 1."""
    vals = symplectic_transform(ch.probs, ch.n)
    vals[0] = 1.0
    vals = np.clip(vals, -1.0, 1.0)
    return EigenvalueVector(ch.n, vals)


def inverse_transform(eig: EigenvalueVector | np.ndarray, n: int | None = None) -> np.ndarray:
    """Inverse character transform; returns a (possibly signed) raw vector."""
    if isinstance(eig, EigenvalueVector):
        values, n = eig.values, eig.n
    else:
        if n is None:
            raise ValueError("n is required when passing a bare array")
        values = np.asarray(eig, dtype=float)
    return symplectic_transform(values, n) / 4 ** n


def channel_to_dict(ch: PauliChannel) -> dict:
    """JSON-ready form: {"n": int, "probs": [4^n floats in index order]}."""
    return {"n": ch.n, "probs": [float(p) for p in ch.probs]}


def channel_from_dict(data: dict) -> PauliChannel:
    if set(data) - {"n", "probs"}:
        raise ValueError(f"unexpected channel fields: {sorted(set(data) - {'n', 'probs'})}")
    return make_channel(int(data["n"]), np.asarray(data["probs"], dtype=float))


def save_channel(ch: PauliChannel, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(channel_to_dict(ch), fh)
        fh.write("\n")


def load_channel(path: str) -> PauliChannel:
    with open(path) as fh:
        return channel_from_dict(json.load(fh))


def tv_distance(p: PauliChannel, q: PauliChannel) -> float:
    """Half the l1 distance between the probability vectors."""
    if p.n != q.n:
        raise ValueError(f"qubit counts differ: {p.n} vs {q.n}")
    return 0.5 * float(np.abs(p.probs - q.probs).sum())


def diamond_distance(p: PauliChannel, q: PauliChannel) -> float:
    """For Pauli channels the diamond distance is exactly twice the TV."""
    return 2.0 * tv_distance(p, q)
