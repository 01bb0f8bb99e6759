"""Named invariant suites and the independent oracles they check against.

Each suite function returns a list of CheckResult records; the CLI ``verify``
subcommand runs them at a configurable scale and the acceptance tests run
the heavyweight variants.  Oracles here are deliberately naive (brute-force
QP enumeration, O(d^4) double-sum transform, dense Born pipeline) so they
stay independent of the fast paths they validate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .channel import (
    ChannelSequence,
    apply_channel,
    eigenvalues,
    inverse_transform,
    random_channel,
    symplectic_transform,
)
from .cover import build_cover, build_measurement
from .hard_instances import (
    LemmaViolationError,
    bias_value,
    exact_second_moment,
    fano_bound,
    make_matching,
    random_unital_intertwiner,
    sample_hard_channel,
)
from .measurement import born_distribution, induced_group_distribution, sample_outcomes
from .pauli import (
    PauliOperator,
    conjugate_matrix,
    dense_pauli_basis,
    pauli_multiply,
    random_density_matrix,
    random_unit_vector,
    symplectic_product,
)
from .rng import derive_stream, make_generator
from .tomography import TomographyConfig, learn_pauli_channel, project_to_simplex, raw_samples, required_samples

SUITES = ("algebra", "cover", "measurement", "tomography", "hard")


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    detail: str = ""


def _result(suite: str, name: str, passed, detail: str = "") -> CheckResult:
    return CheckResult(suite=suite, name=name, passed=bool(passed), detail=detail)


# ---------------------------------------------------------------------------
# independent oracles


def naive_symplectic_transform(values: np.ndarray, n: int) -> np.ndarray:
    """O(d^4) double-sum character transform (test oracle for the butterfly)."""
    dsq = 4 ** n
    out = np.zeros(dsq)
    paulis = [PauliOperator.from_index(n, i) for i in range(dsq)]
    for j, p in enumerate(paulis):
        acc = 0.0
        for k, q in enumerate(paulis):
            sign = -1.0 if symplectic_product(p, q) else 1.0
            acc += sign * values[k]
        out[j] = acc
    return out


def brute_force_simplex_projection(v: np.ndarray) -> np.ndarray:
    """Projection onto the simplex by enumerating every support set.

    For each nonempty support S the affine projection onto
    {r : r_i = 0 off S, sum r = 1} is v_S - theta with
    theta = (sum_S v - 1)/|S|; among the feasible candidates (all entries
    nonnegative) the one closest to v is the true projection.  Vectorized
    over all 2^k - 1 supports; independent of the sort-threshold path.
    """
    v = np.asarray(v, dtype=float)
    k = len(v)
    if k > 20:
        raise ValueError("oracle enumeration is capped at 20 dimensions")
    masks = np.arange(1, 1 << k, dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(k)[None, :]) & 1).astype(bool)
    sizes = bits.sum(axis=1)
    theta = (bits @ v - 1.0) / sizes
    support_min = np.where(bits, v[None, :], np.inf).min(axis=1)
    feasible = support_min - theta >= -1e-12
    # squared distance: theta^2 |S| plus the mass dropped off the support
    off_mass = np.sum(v**2) - bits @ (v**2)
    dist = np.where(feasible, theta**2 * sizes + off_mass, np.inf)
    best = int(np.argmin(dist))
    candidate = np.where(bits[best], v - theta[best], 0.0)
    return np.clip(candidate, 0.0, None)


def _sandwich_values(n: int, rho, phi) -> np.ndarray:
    """c_P = <phi| P rho P |phi> for every Pauli, in canonical order."""
    basis = dense_pauli_basis(n)
    phi = np.asarray(phi, dtype=complex)
    return np.array([(phi.conj() @ (w @ rho.mat @ w) @ phi).real for w in basis])


def enumerate_rademacher_second_moment(n: int, epsilon: float, rho, phi) -> float:
    """E_alpha u^2 by exhausting all sign patterns of the matched pairs."""
    dsq = 4 ** n
    d = 1 << n
    c = _sandwich_values(n, rho, phi)
    reps = dsq // 2
    total = 0.0
    for pattern in range(1 << reps):
        alpha = np.empty(dsq)
        for r in range(reps):
            s = 1.0 if (pattern >> r) & 1 else -1.0
            alpha[2 * r] = s
            alpha[2 * r + 1] = -s
        u = (4.0 * epsilon / d) * float(alpha @ c)
        total += u * u
    return total / (1 << reps)


def rational_second_moment_pair(n: int, epsilon: float, rho, phi) -> tuple[Fraction, Fraction]:
    """(closed form, enumeration) of E_alpha u^2 in exact rational arithmetic.

    Both start from the same float c_P values (floats convert to Fractions
    exactly), so agreement is an exact identity check, free of rounding.
    """
    dsq = 4 ** n
    d = 1 << n
    c = [Fraction(v) for v in _sandwich_values(n, rho, phi)]
    eps = Fraction(epsilon)

    sigma = make_matching(n)
    closed = (16 * eps * eps) / (d * d) * sum(
        c[p] * c[p] - c[p] * c[int(sigma[p])] for p in range(dsq)
    )

    reps = dsq // 2
    total = Fraction(0)
    for pattern in range(1 << reps):
        acc = Fraction(0)
        for r in range(reps):
            s = 1 if (pattern >> r) & 1 else -1
            acc += s * (c[2 * r] - c[2 * r + 1])
        u = 4 * eps * acc / d
        total += u * u
    return closed, total / (1 << reps)


# ---------------------------------------------------------------------------
# suites


def check_algebra(n_max: int = 3, states: int = 10, seed: int = 2024) -> list[CheckResult]:
    results = []

    ok = True
    for n in range(1, n_max + 1):
        dsq = 4 ** n
        paulis = [PauliOperator.from_index(n, i) for i in range(dsq)]
        for q in paulis:
            total = sum(1 if symplectic_product(p, q) == 0 else -1 for p in paulis)
            expect = dsq if q.index == 0 else 0
            ok &= total == expect
    results.append(_result("algebra", "sum_pauli_exact", ok, f"n <= {n_max}, integer"))

    worst = 0.0
    for n in range(1, n_max + 1):
        d = 1 << n
        rng = make_generator(seed, n)
        for _ in range(states):
            rho = random_density_matrix(n, rng)
            acc = np.zeros((d, d), dtype=complex)
            for idx in range(4 ** n):
                p = PauliOperator.from_index(n, idx)
                acc += conjugate_matrix(n, p.x, p.z, rho.mat)
            worst = max(worst, float(np.abs(acc - d * np.trace(rho.mat) * np.eye(d)).max()))
    results.append(
        _result("algebra", "int_pauli_identity", worst <= 1e-10, f"max dev {worst:.2e}")
    )

    ok = True
    for n in range(1, min(3, n_max) + 1):
        basis = dense_pauli_basis(n)
        for a, wa in enumerate(basis):
            pa = PauliOperator.from_index(n, a)
            for b, wb in enumerate(basis):
                pb = PauliOperator.from_index(n, b)
                sign = -1.0 if symplectic_product(pa, pb) else 1.0
                if np.abs(wa @ wb - sign * (wb @ wa)).max() != 0.0:
                    ok = False
    results.append(_result("algebra", "commutation_vs_dense_exact", ok, "n <= 3 exhaustive"))

    ok = True
    basis2 = dense_pauli_basis(2)
    for a in range(16):
        pa = PauliOperator.from_index(2, a)
        for b in range(16):
            pb = PauliOperator.from_index(2, b)
            k, r = pauli_multiply(pa, pb)
            if np.abs(basis2[a] @ basis2[b] - (1j**k) * basis2[r.index]).max() > 0.0:
                ok = False
            for c in range(16):
                pc = PauliOperator.from_index(2, c)
                k1, r1 = pauli_multiply(pa, pb)
                k2, s12 = pauli_multiply(r1, pc)
                k3, r3 = pauli_multiply(pb, pc)
                k4, s34 = pauli_multiply(pa, r3)
                if s12 != s34 or (k1 + k2) % 4 != (k3 + k4) % 4:
                    ok = False
    results.append(_result("algebra", "multiply_phase_and_associativity", ok, "n = 2 exhaustive"))
    return results


def check_cover(n_max: int = 3) -> list[CheckResult]:
    results = []
    for n in range(1, n_max + 1):
        d = 1 << n
        cover = build_cover(n)
        sizes_ok = len(cover) == d + 1 and all(len(g.elements) == d for g in cover)

        sets = [set(int(i) for i in g.element_indices) for g in cover]
        inter_ok = all(
            sets[i] & sets[j] == {0} for i in range(len(sets)) for j in range(i + 1, len(sets))
        )
        union_ok = len(set().union(*sets)) == d * d

        commutant_ok = True
        for g, members in zip(cover, sets):
            for idx in range(d * d):
                q = PauliOperator.from_index(n, idx)
                commutes = all(
                    symplectic_product(q, p) == 0 for p in g.elements
                )
                if commutes != (idx in members):
                    commutant_ok = False

        partition_ok = True
        reps_commute_ok = True
        for g in cover:
            seen = set()
            for rep in g.rep_indices:
                for elem in g.element_indices:
                    seen.add(int(rep) ^ int(elem))
            partition_ok &= seen == set(range(d * d))
            reps = list(g.coset_reps)
            reps_commute_ok &= all(
                symplectic_product(reps[i], reps[j]) == 0
                for i in range(d)
                for j in range(i + 1, d)
            )

        povm_ok = True
        character_ok = True
        for g in cover:
            meas = build_measurement(g)  # raises on projector/completeness failure
            state = meas.state_dense.mat
            povm_ok &= np.abs(state @ state - state).max() <= 1e-12
            povm_ok &= np.abs(sum(meas.povm_dense) - np.eye(d)).max() <= 1e-12
            povm_ok &= np.abs(meas.povm_dense[0] - state).max() <= 1e-12
            if n <= 3:
                members = {int(i) for i in g.element_indices}
                for idx in range(d * d):
                    q = PauliOperator.from_index(n, idx)
                    avg = sum(
                        1 if symplectic_product(p, q) == 0 else -1 for p in g.elements
                    ) / d
                    character_ok &= avg == (1 if idx in members else 0)

        mub_ok = True
        if n <= 2:
            states = [build_measurement(g).state_dense.mat for g in cover]
            for i in range(len(states)):
                for j in range(i + 1, len(states)):
                    overlap = np.trace(states[i] @ states[j]).real
                    mub_ok &= abs(overlap - 1.0 / d) <= 1e-10

        all_ok = (
            sizes_ok and inter_ok and union_ok and commutant_ok and partition_ok
            and reps_commute_ok and povm_ok and character_ok and mub_ok
        )
        results.append(
            _result(
                "cover",
                f"cover_n{n}",
                all_ok,
                f"sizes={sizes_ok} inter={inter_ok} union={union_ok} commutant={commutant_ok} "
                f"partition={partition_ok} reps_commute={reps_commute_ok} povm={povm_ok} "
                f"characters={character_ok} mub={mub_ok}",
            )
        )
    return results


def check_measurement(n_max: int = 3, channels: int = 50, seed: int = 99) -> list[CheckResult]:
    results = []
    worst = 0.0
    for n in range(1, min(3, n_max) + 1):
        cover = build_cover(n)
        measurements = [build_measurement(g) for g in cover]
        rng = make_generator(seed, n)
        for _ in range(channels):
            ch = random_channel(n, rng)
            for g, meas in zip(cover, measurements):
                analytic = induced_group_distribution(ch, g)
                dense = born_distribution(
                    apply_channel(ch, meas.state_dense), meas.povm_dense, labels=g.rep_indices
                )
                worst = max(worst, float(np.abs(analytic.probs - dense.probs).max()))
    results.append(
        _result(
            "measurement",
            "coset_oracle_equivalence",
            worst <= 1e-10,
            f"max abs diff {worst:.2e} over {channels} channels, n <= {min(3, n_max)}",
        )
    )

    rng = make_generator(seed, 1234)
    dist = induced_group_distribution(random_channel(2, rng), build_cover(2)[3])
    batch = sample_outcomes(dist, 100_000, derive_stream(seed, 77))
    freq = np.bincount(batch.outcomes, minlength=len(dist.probs)) / batch.count
    margin = 4.0 * np.sqrt(dist.probs * (1 - dist.probs) / batch.count) + 1e-9
    dev_ok = np.all(np.abs(freq - dist.probs) <= margin)
    results.append(
        _result(
            "measurement",
            "sampling_frequency_consistency",
            dev_ok,
            "empirical freq within 4 sigma of exact, N = 1e5, fixed seed",
        )
    )

    batch2 = sample_outcomes(dist, 100_000, derive_stream(seed, 77))
    results.append(
        _result(
            "measurement",
            "sampling_determinism",
            np.array_equal(batch.outcomes, batch2.outcomes),
            "same (dist, N, seed) twice gives identical batches",
        )
    )
    return results


def check_tomography(n_max: int = 3, vectors: int = 100, seed: int = 31) -> list[CheckResult]:
    results = []

    worst = 0.0
    for n in range(1, n_max + 1):
        rng = make_generator(seed, n)
        for _ in range(10):
            ch = random_channel(n, rng)
            back = inverse_transform(eigenvalues(ch))
            worst = max(worst, float(np.abs(back - ch.probs).max()))
    results.append(_result("tomography", "transform_round_trip", worst <= 1e-12, f"max dev {worst:.2e}"))

    worst_rel = 0.0
    for n in range(1, n_max + 1):
        d = 1 << n
        rng = make_generator(seed, 100 + n)
        for _ in range(vectors):
            p = rng.dirichlet(np.ones(4 ** n))
            q = rng.dirichlet(np.ones(4 ** n))
            lhs = d * np.linalg.norm(q - p)
            rhs = np.linalg.norm(symplectic_transform(q, n) - symplectic_transform(p, n))
            worst_rel = max(worst_rel, abs(lhs - rhs) / max(rhs, 1e-300))
    results.append(
        _result("tomography", "parseval_identity", worst_rel <= 1e-9, f"max rel dev {worst_rel:.2e}")
    )

    ok = True
    rng = make_generator(seed, 5)
    for n in (1, 2):
        for _ in range(5):
            vec = rng.integers(-9, 10, size=4 ** n).astype(float)
            fast = symplectic_transform(vec, n)
            slow = naive_symplectic_transform(vec, n)
            ok &= np.array_equal(fast, slow)
    results.append(_result("tomography", "butterfly_vs_naive_exact", ok, "integer vectors, n <= 2"))

    ok = True
    for n in range(1, min(3, n_max) + 1):
        rng = make_generator(seed, 200 + n)
        ch = random_channel(n, rng)
        p_hat = eigenvalues(ch).values
        for g in build_cover(n):
            dist = induced_group_distribution(ch, g)
            for p in g.elements:
                exact = sum(
                    prob * (1 if symplectic_product(PauliOperator.from_index(n, int(lbl)), p) == 0 else -1)
                    for lbl, prob in zip(dist.labels, dist.probs)
                )
                ok &= abs(exact - p_hat[p.index]) <= 1e-12
    results.append(
        _result("tomography", "estimator_unbiasedness_exact", ok, "E[(-1)^(Q.P)] = phat(P), n <= 3")
    )

    rng = make_generator(seed, 7)
    worst = 0.0
    for _ in range(vectors):
        length = int(rng.integers(1, 13))
        v = rng.normal(0.0, 1.0, size=length)
        worst = max(
            worst,
            float(np.abs(project_to_simplex(v) - brute_force_simplex_projection(v)).max()),
        )
    results.append(
        _result("tomography", "simplex_projection_vs_qp", worst <= 1e-9, f"max dev {worst:.2e}")
    )

    contraction_ok = True
    chain_ok = True
    for trial in range(5):
        truth = random_channel(2, make_generator(seed, 300 + trial))
        cfg = TomographyConfig(n=2, epsilon=0.1, seed=derive_stream(seed, trial))
        rec, diag = learn_pauli_channel(truth, cfg)
        contraction_ok &= diag["l2_error_projected"] <= diag["l2_error_raw"] + 1e-15
        l1 = float(np.abs(rec.probs - truth.probs).sum())
        chain_ok &= l1 <= 4 * diag["l2_error_projected"] + 1e-12
    results.append(
        _result("tomography", "projection_contraction", contraction_ok, "||r-p||_2 <= ||q-p||_2")
    )
    results.append(_result("tomography", "l1_l2_bound_chain", chain_ok, "||r-p||_1 <= d ||r-p||_2"))

    box = required_samples(1, 0.1, "paper_box")
    proof = required_samples(2, 0.1, "paper_proof")
    ratio_ok = all(
        abs(raw_samples(n, eps, "paper_proof") / raw_samples(n, eps, "paper_box") - 2.0) < 1e-12
        for n in (1, 2, 3)
        for eps in (0.05, 0.1, 0.5)
    )
    results.append(
        _result(
            "tomography",
            "sample_rule_arithmetic",
            box == 249 and proof == 2952 and ratio_ok,
            f"box(1,0.1)={box} proof(2,0.1)={proof} raw ratio 2",
        )
    )
    return results


def check_hard(seed: int = 404, tuples: int = 60) -> list[CheckResult]:
    results = []

    ok = True
    for n in (1, 2):
        spec, _ = sample_hard_channel("rademacher", n, 0.05, derive_stream(seed, n))
        eps = Fraction(1, 20)
        probs = [(1 + 4 * eps * int(a)) / Fraction(4 ** n) for a in spec.alpha]
        ok &= all(p >= 0 for p in probs) and sum(probs) == 1
    results.append(_result("hard", "rademacher_validity_exact_rational", ok, "n <= 2, eps = 1/20"))

    ok = True
    for n in (2, 3, 4):
        spec, _ = sample_hard_channel("gaussian", n, 1.0 / (8 << n), derive_stream(seed, 10 + n))
        centered = spec.alpha - spec.alpha.mean()
        ok &= abs(centered.sum()) <= 1e-12
    results.append(_result("hard", "gaussian_centering", ok, "sum of centered alpha <= 1e-12"))

    ok = True
    for n in (1, 2, 3, 4):
        sigma = make_matching(n)
        ok &= np.array_equal(sigma[sigma], np.arange(4 ** n))
        ok &= not np.any(sigma == np.arange(4 ** n))
    results.append(_result("hard", "matching_involution", ok, "sigma^2 = id, no fixed points"))

    violations = 0
    for t in range(tuples):
        n = 1 + t % 3
        m = 1 + (t // 3) % 3
        rng = make_generator(seed, 1000 + t)
        spec, ch = sample_hard_channel("rademacher", n, 0.05, derive_stream(seed, 2000 + t))
        rho = random_density_matrix(n, rng)
        phi = random_unit_vector(1 << n, rng)
        intertwiners = tuple(random_unital_intertwiner(n, rng) for _ in range(m - 1))
        try:
            bias_value(ChannelSequence(ch, m, intertwiners), rho, phi, instance=spec)
        except LemmaViolationError:
            violations += 1
    results.append(
        _result("hard", "multiuse_bias_decay", violations == 0, f"{violations} violations / {tuples} tuples")
    )

    ok = True
    rng = make_generator(seed, 3000)
    for t in range(tuples):
        n = 1 + t % 3
        rho = random_density_matrix(n, rng)
        phi = random_unit_vector(1 << n, rng)
        try:
            value = exact_second_moment(n, 0.05, rho, phi)
        except LemmaViolationError:
            ok = False
            continue
        if n == 1:
            brute = enumerate_rademacher_second_moment(1, 0.05, rho, phi)
            ok &= abs(value - brute) <= 1e-15
    results.append(
        _result("hard", "exact_second_moment_bound_and_enum", ok, "closed form <= 32eps^2/d, = enumeration at n=1")
    )

    ok = abs(fano_bound(2) - ((2.0 / 3.0) * math.log(2) - math.log(2))) < 1e-15
    ok &= abs(fano_bound(math.exp(3)) - (2.0 - math.log(2))) < 1e-12
    results.append(_result("hard", "fano_arithmetic", ok, "spot values"))
    return results


def run_suites(
    suites: list[str],
    n_max: int = 3,
    seed: int = 2024,
) -> list[CheckResult]:
    """Run the selected suites at CLI scale; unknown names raise ValueError."""
    results: list[CheckResult] = []
    for suite in suites:
        if suite == "algebra":
            results.extend(check_algebra(n_max=min(n_max, 4), seed=seed))
        elif suite == "cover":
            results.extend(check_cover(n_max=min(n_max, 4)))
        elif suite == "measurement":
            results.extend(check_measurement(n_max=n_max, channels=10, seed=seed))
        elif suite == "tomography":
            results.extend(check_tomography(n_max=min(n_max, 4), vectors=50, seed=seed))
        elif suite == "hard":
            results.extend(check_hard(seed=seed))
        else:
            raise ValueError(f"unknown suite {suite!r}")
    return results
