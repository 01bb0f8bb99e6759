"""Lower-bound channel families and numerical verifiers for their lemmas.

Two families of perturbations of the completely depolarizing channel:

  rademacher:  p(P) = (1 + 4 alpha(P) eps) / d^2 with alpha = +-1 and
               alpha(sigma(P)) = -alpha(P) under the fixed matching
               sigma(idx) = idx XOR 1; valid for eps <= 1/4.
  gaussian:    p(P) = (1 + 2 alphat(P) eps d / ||alpha||_2) / d^2 with
               i.i.d. standard normal alpha and alphat = alpha - mean(alpha);
               valid for eps <= 1/(4d).

The verifiers check the finite-n statements the lower-bound proofs rest on:
the multi-use bias decay |u| <= (4 eps)^m, the closed-form single-use second
moment <= 32 eps^2 / d, the Monte-Carlo multi-use second moments, the
weighted-POVM second moment <= 16 eps^2 for the gaussian family, pairwise
TV separation statistics, and the Fano information floor (2/3) log M - log 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import (
    ChannelSequence,
    PauliChannel,
    UnitaryIntertwiner,
    apply_channel,
    apply_sequence,
    make_channel,
    random_channel,
)
from .pauli import DensityMatrix, dense_pauli_basis, random_density_matrix, random_unit_vector
from .rng import derive_stream, make_generator

FAMILIES = ("rademacher", "gaussian")


class LemmaViolationError(RuntimeError):
    """A verified inequality from the underlying analysis failed numerically."""


@dataclass(frozen=True, eq=False)
class HardInstanceSpec:
    """Parameters plus sampled randomness defining one lower-bound channel."""

    family: str
    n: int
    epsilon: float
    seed: int
    alpha: np.ndarray

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        alpha = np.asarray(self.alpha, dtype=float)
        dsq = 4 ** self.n
        if alpha.shape != (dsq,):
            raise ValueError(f"alpha must have length {dsq}")
        _check_epsilon(self.family, self.n, self.epsilon)
        if self.family == "rademacher":
            if not np.all(np.abs(alpha) == 1.0):
                raise ValueError("rademacher alpha entries must be +-1")
            sigma = make_matching(self.n)
            if not np.all(alpha[sigma] == -alpha):
                raise ValueError("rademacher alpha must be antisymmetric under the matching")
        alpha.flags.writeable = False
        object.__setattr__(self, "alpha", alpha)


def _check_epsilon(family: str, n: int, epsilon: float) -> None:
    if epsilon < 0.0:
        raise ValueError("epsilon must be nonnegative")
    d = 1 << n
    if family == "rademacher" and epsilon > 0.25:
        raise ValueError("rademacher family requires eps <= 1/4")
    if family == "gaussian" and epsilon > 1.0 / (4 * d):
        raise ValueError("gaussian family requires eps <= 1/(4d)")


def make_matching(n: int) -> np.ndarray:
    """The fixed-point-free involution sigma(idx) = idx XOR 1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return np.arange(4 ** n, dtype=np.int64) ^ 1


def channel_from_spec(spec: HardInstanceSpec) -> PauliChannel:
    """Deterministically rebuild the channel of an instance."""
    dsq = 4 ** spec.n
    d = 1 << spec.n
    if spec.family == "rademacher":
        probs = (1.0 + 4.0 * spec.alpha * spec.epsilon) / dsq
    else:
        centered = spec.alpha - spec.alpha.mean()
        norm = np.linalg.norm(spec.alpha)
        probs = (1.0 + 2.0 * centered * spec.epsilon * d / norm) / dsq
    return make_channel(spec.n, probs)


def sample_hard_channel(
    family: str, n: int, epsilon: float, seed: int
) -> tuple[HardInstanceSpec, PauliChannel]:
    """Draw one instance of a family from a derived stream."""
    _check_epsilon(family, n, epsilon)
    rng = make_generator(seed)
    dsq = 4 ** n
    if family == "rademacher":
        signs = rng.integers(0, 2, size=dsq // 2) * 2 - 1
        alpha = np.empty(dsq)
        alpha[0::2] = signs
        alpha[1::2] = -signs
    elif family == "gaussian":
        alpha = rng.standard_normal(dsq)
    else:
        raise ValueError(f"unknown family {family!r}")
    spec = HardInstanceSpec(family=family, n=n, epsilon=epsilon, seed=seed, alpha=alpha)
    return spec, channel_from_spec(spec)


@dataclass(frozen=True, eq=False)
class SeparationReport:
    """Pairwise TV statistics over sampled instances of one family."""

    family: str
    n: int
    epsilon: float
    instance_count: int
    pair_count: int
    tv_values: np.ndarray
    min_tv: float
    mean_tv: float
    degenerate_pairs: int

    def fraction_below(self, threshold: float) -> float:
        return float(np.mean(self.tv_values < threshold))


def separation_statistics(
    family: str,
    n: int,
    epsilon: float,
    instances: int,
    seed: int,
    pair_cap: int = 50_000,
) -> SeparationReport:
    """Sample instances, compute pairwise TVs (subsampled above pair_cap)."""
    if instances < 2:
        raise ValueError("need at least two instances")
    probs = np.empty((instances, 4 ** n))
    for i in range(instances):
        _, ch = sample_hard_channel(family, n, epsilon, derive_stream(seed, i))
        probs[i] = ch.probs

    pairs = [(i, j) for i in range(instances) for j in range(i + 1, instances)]
    if len(pairs) > pair_cap:
        keep = make_generator(seed, instances).choice(len(pairs), size=pair_cap, replace=False)
        pairs = [pairs[k] for k in sorted(keep)]
    tv = np.array([0.5 * np.abs(probs[i] - probs[j]).sum() for i, j in pairs])
    return SeparationReport(
        family=family,
        n=n,
        epsilon=epsilon,
        instance_count=instances,
        pair_count=len(pairs),
        tv_values=tv,
        min_tv=float(tv.min()),
        mean_tv=float(tv.mean()),
        degenerate_pairs=int(np.sum(tv == 0.0)),
    )


def random_unital_intertwiner(n: int, rng: np.random.Generator):
    """A random unital channel: Pauli mixing or Haar unitary, 50/50."""
    if rng.random() < 0.5:
        return random_channel(n, rng)
    d = 1 << n
    g = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / math.sqrt(2)
    q, r = np.linalg.qr(g)
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    return UnitaryIntertwiner(n, q)


def bias_value(
    seq: ChannelSequence,
    rho: DensityMatrix,
    phi: np.ndarray,
    instance: HardInstanceSpec | None = None,
) -> float:
    """u = <phi| d P N_{m-1} ... N_1 P (rho) |phi> - 1.

    When the sequence channel is a rademacher instance, the multi-use decay
    bound |u| <= (4 eps)^m is enforced (LemmaViolationError on failure).
    """
    phi = np.asarray(phi, dtype=complex)
    if abs(np.linalg.norm(phi) - 1.0) > 1e-10:
        raise ValueError("phi must be a unit vector")
    d = 1 << rho.n
    out = apply_sequence(seq, rho)
    u = float((phi.conj() @ (d * out.mat) @ phi).real) - 1.0
    if instance is not None and instance.family == "rademacher":
        bound = (4.0 * instance.epsilon) ** seq.m + 1e-9
        if abs(u) > bound:
            raise LemmaViolationError(f"|u| = {abs(u)} exceeds (4 eps)^m = {bound}")
    return u


def exact_second_moment(
    n: int, epsilon: float, rho: DensityMatrix, phi: np.ndarray
) -> float:
    """Closed-form E_alpha u^2 for the rademacher family at m = 1.

    With c_P = <phi| P rho P |phi> the expectation collapses to
    (16 eps^2 / d^2) sum_P (c_P^2 - c_P c_sigma(P)), bounded by 32 eps^2 / d.
    """
    phi = np.asarray(phi, dtype=complex)
    if abs(np.linalg.norm(phi) - 1.0) > 1e-10:
        raise ValueError("phi must be a unit vector")
    d = 1 << n
    basis = dense_pauli_basis(n)
    c = np.array([(phi.conj() @ (w @ rho.mat @ w) @ phi).real for w in basis])
    sigma = make_matching(n)
    value = (16.0 * epsilon**2 / d**2) * float(np.sum(c * c - c * c[sigma]))
    bound = 32.0 * epsilon**2 / d
    if value > bound + 1e-12:
        raise LemmaViolationError(f"second moment {value} exceeds 32 eps^2/d = {bound}")
    return value


@dataclass(frozen=True)
class SecondMomentEstimate:
    estimate: float
    stderr: float
    bound: float
    violated: bool


def multiuse_second_moment_mc(
    n: int, epsilon: float, m: int, trials: int, seed: int
) -> SecondMomentEstimate:
    """Monte-Carlo E_alpha u^2 at m uses against the multi-use lemma bound.

    The tuple (rho, phi, intertwiners) is drawn once from the seed and held
    fixed; only alpha varies across trials.  Violation is declared when the
    estimate exceeds the bound by more than three standard errors.
    """
    if m not in (2, 3):
        raise ValueError("supported use counts are m in {2, 3}")
    if trials < 1000:
        raise ValueError("need at least 10^3 trials for a meaningful estimate")
    d = 1 << n
    rng = make_generator(seed)
    rho = random_density_matrix(n, rng)
    phi = random_unit_vector(d, rng)
    intertwiners = tuple(random_unital_intertwiner(n, rng) for _ in range(m - 1))

    values = np.empty(trials)
    for t in range(trials):
        spec, ch = sample_hard_channel("rademacher", n, epsilon, derive_stream(seed, t + 1))
        seq = ChannelSequence(channel=ch, m=m, intertwiners=intertwiners)
        values[t] = bias_value(seq, rho, phi, instance=spec) ** 2

    estimate = float(values.mean())
    stderr = float(values.std(ddof=1) / math.sqrt(trials))
    bound = 6.0 * (4 * epsilon) ** 4 / d if m == 2 else 12.0 * (4 * epsilon) ** 6 / d**2
    return SecondMomentEstimate(
        estimate=estimate,
        stderr=stderr,
        bound=bound,
        violated=estimate - 3.0 * stderr > bound,
    )


def povm_second_moment_check(
    spec: HardInstanceSpec,
    rho: DensityMatrix,
    povm: list[np.ndarray] | tuple[np.ndarray, ...],
) -> float:
    """(1/d) sum_i lambda_i u_i^2 for a gaussian instance; <= 16 eps^2.

    POVM elements are eigendecomposed into weighted rank-one pieces
    lambda |phi><phi| first, matching the reduction used in the analysis.
    """
    if spec.family != "gaussian":
        raise ValueError("the weighted second-moment bound applies to the gaussian family")
    d = 1 << spec.n
    total = np.zeros((d, d), dtype=complex)
    pieces: list[tuple[float, np.ndarray]] = []
    for element in povm:
        element = np.asarray(element, dtype=complex)
        vals, vecs = np.linalg.eigh(element)
        if vals[0] < -1e-8:
            raise ValueError("POVM element is not positive semidefinite")
        total += element
        for lam, vec in zip(vals, vecs.T):
            if lam > 1e-12:
                pieces.append((float(lam), vec))
    if np.abs(total - np.eye(d)).max() > 1e-8:
        raise ValueError("POVM does not sum to the identity within 1e-8")

    out = apply_channel(channel_from_spec(spec), rho)
    value = 0.0
    for lam, vec in pieces:
        u = float((vec.conj() @ (d * out.mat) @ vec).real) - 1.0
        value += lam * u * u
    value /= d
    bound = 16.0 * spec.epsilon**2
    if value > bound + 1e-9:
        raise LemmaViolationError(f"weighted second moment {value} exceeds 16 eps^2 = {bound}")
    return value


def fano_bound(m: float) -> float:
    """Information floor (2/3) log M - log 2 in nats; may be negative."""
    if m < 2:
        raise ValueError("Fano bound requires M >= 2")
    return (2.0 / 3.0) * math.log(m) - math.log(2.0)
