"""Born-rule measurement: exact outcome distributions and seeded sampling.

Two routes to the same distribution exist for stabilizer measurements: the
dense pipeline tr(M_i . P(rho_G)) and the analytic coset form

    p_G(Q) = sum_{P in G} p(Q + P),

which needs no matrices and is the default for the learner.  Sampling uses a
Vose alias table driven by a derived Philox stream, so batches are
reproducible from (distribution, N, seed) alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import PauliChannel
from .cover import StabilizerGroup, coset_labels
from .pauli import DensityMatrix
from .rng import make_generator


@dataclass(frozen=True, eq=False)
class OutcomeDistribution:
    """Outcome labels with their exact probabilities."""

    labels: np.ndarray
    probs: np.ndarray

    def __post_init__(self) -> None:
        labels = np.asarray(self.labels, dtype=np.int64)
        probs = np.asarray(self.probs, dtype=float)
        if labels.shape != probs.shape or labels.ndim != 1:
            raise ValueError("labels and probs must be 1-d arrays of equal length")
        if probs.min() < 0.0:
            raise ValueError("negative outcome probability")
        if abs(probs.sum() - 1.0) > 1e-10:
            raise ValueError("outcome probabilities do not sum to 1 within 1e-10")
        labels.flags.writeable = False
        probs.flags.writeable = False
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "probs", probs)


@dataclass(frozen=True, eq=False)
class SampleBatch:
    """N outcome positions (indices into the distribution) plus provenance."""

    outcomes: np.ndarray
    seed: int
    count: int

    def __post_init__(self) -> None:
        outcomes = np.asarray(self.outcomes, dtype=np.int64)
        if outcomes.shape != (self.count,):
            raise ValueError("outcome array length does not match count")
        outcomes.flags.writeable = False
        object.__setattr__(self, "outcomes", outcomes)


def born_distribution(
    rho: DensityMatrix,
    povm: list[np.ndarray] | tuple[np.ndarray, ...],
    labels: np.ndarray | None = None,
) -> OutcomeDistribution:
    """probs[i] = tr(rho M_i); validates completeness and positivity."""
    d = rho.mat.shape[0]
    total = np.zeros((d, d), dtype=complex)
    probs = np.empty(len(povm))
    for i, element in enumerate(povm):
        element = np.asarray(element, dtype=complex)
        if element.shape != (d, d):
            raise ValueError(f"POVM element {i} has shape {element.shape}, expected {d}x{d}")
        if np.linalg.eigvalsh(element)[0] < -1e-8:
            raise ValueError(f"POVM element {i} is not positive semidefinite")
        total += element
        probs[i] = np.trace(rho.mat @ element).real
    if np.abs(total - np.eye(d)).max() > 1e-8:
        raise ValueError("POVM does not sum to the identity within 1e-8")
    probs = np.clip(probs, 0.0, None)
    drift = abs(probs.sum() - 1.0)
    if drift > 1e-8:
        raise ValueError(f"outcome probabilities drifted by {drift}")
    probs = probs / probs.sum()
    if labels is None:
        labels = np.arange(len(povm), dtype=np.int64)
    return OutcomeDistribution(labels=np.asarray(labels, dtype=np.int64), probs=probs)


def induced_group_distribution(ch: PauliChannel, group: StabilizerGroup) -> OutcomeDistribution:
    """Coset-sum distribution p_G(Q) = sum_{P in G} p(Q + P).

    Purely symbolic (one coset label per Pauli index, then a bincount), so it
    works far beyond the dense range.  Labels are the canonical sorted
    coset-representative Pauli indices.
    """
    if ch.n != group.n:
        raise ValueError(f"qubit counts differ: {ch.n} vs {group.n}")
    dsq = 4 ** ch.n
    packed = np.arange(dsq, dtype=np.int64)
    positions = group.position_by_label[coset_labels(group, packed)]
    probs = np.bincount(positions, weights=ch.probs, minlength=1 << ch.n)
    probs = np.clip(probs, 0.0, None)
    return OutcomeDistribution(labels=group.rep_indices.copy(), probs=probs / probs.sum())


def _alias_table(probs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vose alias setup: returns (acceptance thresholds, alias targets)."""
    k = len(probs)
    accept = probs * k
    alias = np.arange(k, dtype=np.int64)
    small = [i for i in range(k) if accept[i] < 1.0]
    large = [i for i in range(k) if accept[i] >= 1.0]
    while small and large:
        s = small.pop()
        l = large.pop()
        alias[s] = l
        accept[l] -= 1.0 - accept[s]
        (small if accept[l] < 1.0 else large).append(l)
    for i in small + large:
        accept[i] = 1.0
    return accept, alias


def sample_outcomes(dist: OutcomeDistribution, count: int, seed: int) -> SampleBatch:
    """Draw count i.i.d. outcome positions; deterministic in (dist, count, seed)."""
    if count < 1:
        raise ValueError("sample count must be >= 1")
    accept, alias = _alias_table(dist.probs)
    rng = make_generator(seed)
    k = len(dist.probs)
    cells = rng.integers(0, k, size=count)
    keep = rng.random(count) < accept[cells]
    outcomes = np.where(keep, cells, alias[cells])
    return SampleBatch(outcomes=outcomes, seed=seed, count=count)
