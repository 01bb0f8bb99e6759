"""Seeded experiment execution, persistence, and scaling-curve fitting.

Every trial gets its own derived RNG stream, so a report is reproducible from
the config seed alone and trial order (or pool parallelism, capped by the
PAULI_TOMO_THREADS environment variable) cannot change the results.  Files
are written atomically (temp file + rename); CSV outputs carry a schema
version in a leading comment row so sweeps stay diffable across releases.
"""

from __future__ import annotations

import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__
from .channel import PauliChannel, load_channel, random_channel, save_channel
from .cover import build_cover
from .hard_instances import sample_hard_channel, separation_statistics
from .rng import derive_stream, make_generator
from .tomography import TomographyConfig, learn_pauli_channel

LEARN_CSV_SCHEMA = "pauli-tomo/learn-v1"
SWEEP_CSV_SCHEMA = "pauli-tomo/sweep-v1"
HARD_CSV_SCHEMA = "pauli-tomo/hard-v1"


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    n: int = 2
    epsilon: float = 0.1
    trials: int = 10
    seed: int = 0
    sample_rule: str | int = "paper_proof"
    sample_grid: tuple[int, ...] = ()
    family: str | None = None
    truth_path: str | None = None
    out_dir: str | None = None
    threads: int = 1

    def __post_init__(self) -> None:
        if self.kind not in ("learn", "sweep", "hard", "cover", "verify"):
            raise ValueError(f"unknown experiment kind {self.kind!r}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.kind in ("learn", "sweep") and not 0.0 < self.epsilon <= 1.0:
            raise ValueError("epsilon must lie in (0, 1]")
        if self.kind == "sweep":
            if len(self.sample_grid) < 3:
                raise ValueError("sweep needs a sample grid with >= 3 points")
            if len(set(self.sample_grid)) < 2:
                raise ValueError("sweep grid is degenerate (constant N)")
        if self.out_dir is not None:
            _check_writable(self.out_dir)


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    seed: int
    n_total: int
    tv: float
    success: bool


@dataclass(frozen=True)
class ExperimentReport:
    config: dict
    records: list[TrialRecord]
    aggregates: dict
    wall_clock_s: float
    version: str = __version__


def _check_writable(path: str) -> None:
    os.makedirs(path, exist_ok=True)
    probe = os.path.join(path, ".write-probe")
    try:
        with open(probe, "w") as fh:
            fh.write("")
        os.remove(probe)
    except OSError as exc:
        raise ValueError(f"output path {path!r} is not writable: {exc}") from exc


def atomic_write_text(path: str, text: str) -> None:
    tmp = f"{path}.tmp-{os.getpid()}"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def wilson_interval(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson 95% score interval for a binomial proportion."""
    if trials == 0:
        return 0.0, 1.0
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def _pool_map(fn, items, threads: int):
    if threads <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _sample_truth(
    config: ExperimentConfig, trial_seed: int, fixed: PauliChannel | None = None
) -> PauliChannel:
    if fixed is not None:
        return fixed
    if config.family is None:
        return random_channel(config.n, make_generator(trial_seed))
    _, ch = sample_hard_channel(config.family, config.n, config.epsilon, trial_seed)
    return ch


def run_learn(config: ExperimentConfig) -> ExperimentReport:
    """Learner trials against sampled (or file-loaded) truths.

    With a truth_path, every trial learns the same channel under fresh
    measurement randomness.  When out_dir is set, the trial-0 reconstruction
    is persisted as reconstruction.json in the channel file format.
    """
    start = time.monotonic()
    cover = build_cover(config.n)
    fixed_truth = None
    if config.truth_path is not None:
        fixed_truth = load_channel(config.truth_path)
        if fixed_truth.n != config.n:
            raise ValueError(
                f"truth channel has n={fixed_truth.n} but the run is configured for n={config.n}"
            )
    reconstructions: dict[int, PauliChannel] = {}

    def one_trial(trial: int) -> TrialRecord:
        trial_seed = derive_stream(config.seed, trial)
        truth = _sample_truth(config, derive_stream(trial_seed, 1), fixed_truth)
        cfg = TomographyConfig(
            n=config.n, epsilon=config.epsilon, sample_rule=config.sample_rule, seed=trial_seed
        )
        learned, diag = learn_pauli_channel(truth, cfg, cover=cover)
        if trial == 0:
            reconstructions[0] = learned
        tv = diag["tv_error"]
        return TrialRecord(
            trial=trial,
            seed=trial_seed,
            n_total=diag["n_total"],
            tv=tv,
            success=tv <= config.epsilon,
        )

    records = _pool_map(one_trial, range(config.trials), config.threads)
    successes = sum(r.success for r in records)
    tvs = np.array([r.tv for r in records])
    low, high = wilson_interval(successes, config.trials)
    aggregates = {
        "successes": successes,
        "success_rate": successes / config.trials,
        "median_tv": float(np.median(tvs)),
        "wilson_low": low,
        "wilson_high": high,
    }
    report = ExperimentReport(
        config=_config_dict(config),
        records=records,
        aggregates=aggregates,
        wall_clock_s=time.monotonic() - start,
    )
    if config.out_dir:
        _write_learn_outputs(config, report)
        save_channel(reconstructions[0], os.path.join(config.out_dir, "reconstruction.json"))
    return report


def _write_learn_outputs(config: ExperimentConfig, report: ExperimentReport) -> None:
    rows = [f"# schema: {LEARN_CSV_SCHEMA}", "trial,seed,n_total,tv,success"]
    rows += [
        f"{r.trial},{r.seed},{r.n_total},{r.tv!r},{int(r.success)}" for r in report.records
    ]
    atomic_write_text(os.path.join(config.out_dir, "learn_trials.csv"), "\n".join(rows) + "\n")
    atomic_write_text(
        os.path.join(config.out_dir, "learn_report.json"), _report_json(report)
    )


@dataclass(frozen=True)
class SweepPoint:
    n_samples: int
    n_per_group: int
    median_tv: float
    q25: float
    q75: float


@dataclass(frozen=True)
class SweepReport:
    config: dict
    points: list[SweepPoint]
    slope: float
    intercept: float
    wall_clock_s: float
    version: str = __version__


def run_sweep(config: ExperimentConfig) -> SweepReport:
    """Median TV error per total sample budget, plus a log-log slope fit.

    Grid values are total budgets; each group receives ceil(N / (d+1)) shots.
    """
    start = time.monotonic()
    cover = build_cover(config.n)
    groups = len(cover)
    points = []
    for gi, n_samples in enumerate(config.sample_grid):
        n_per_group = max(1, math.ceil(n_samples / groups))

        def one_trial(trial: int, gi=gi, n_per_group=n_per_group) -> float:
            trial_seed = derive_stream(config.seed, gi, trial)
            truth = _sample_truth(config, derive_stream(trial_seed, 1))
            cfg = TomographyConfig(
                n=config.n, epsilon=config.epsilon, sample_rule=n_per_group, seed=trial_seed
            )
            _, diag = learn_pauli_channel(truth, cfg, cover=cover)
            return diag["tv_error"]

        tvs = np.array(_pool_map(one_trial, range(config.trials), config.threads))
        points.append(
            SweepPoint(
                n_samples=int(n_samples),
                n_per_group=n_per_group,
                median_tv=float(np.median(tvs)),
                q25=float(np.quantile(tvs, 0.25)),
                q75=float(np.quantile(tvs, 0.75)),
            )
        )

    log_n = np.log(np.array([p.n_samples for p in points], dtype=float))
    log_tv = np.log(np.array([p.median_tv for p in points]))
    slope, intercept = np.polyfit(log_n, log_tv, 1)
    report = SweepReport(
        config=_config_dict(config),
        points=points,
        slope=float(slope),
        intercept=float(intercept),
        wall_clock_s=time.monotonic() - start,
    )
    if config.out_dir:
        rows = [f"# schema: {SWEEP_CSV_SCHEMA}", "n_samples,n_per_group,median_tv,q25,q75"]
        rows += [
            f"{p.n_samples},{p.n_per_group},{p.median_tv!r},{p.q25!r},{p.q75!r}"
            for p in report.points
        ]
        atomic_write_text(os.path.join(config.out_dir, "sweep_curve.csv"), "\n".join(rows) + "\n")
        atomic_write_text(os.path.join(config.out_dir, "sweep_report.json"), _report_json(report))
    return report


def run_hard(config: ExperimentConfig, bins: int = 40):
    """Separation statistics for a hard-instance family, persisted as
    a JSON report plus a TV histogram CSV."""
    if config.family is None:
        raise ValueError("hard experiments need --family")
    start = time.monotonic()
    report = separation_statistics(
        config.family, config.n, config.epsilon, config.trials, config.seed
    )
    payload = {
        "config": _config_dict(config),
        "family": report.family,
        "n": report.n,
        "epsilon": report.epsilon,
        "instance_count": report.instance_count,
        "pair_count": report.pair_count,
        "min_tv": report.min_tv,
        "mean_tv": report.mean_tv,
        "degenerate_pairs": report.degenerate_pairs,
        "separation_threshold": config.epsilon if config.family == "rademacher" else config.epsilon / 5,
        "fraction_below_threshold": report.fraction_below(
            config.epsilon if config.family == "rademacher" else config.epsilon / 5
        ),
        "wall_clock_s": time.monotonic() - start,
        "version": __version__,
    }
    if config.out_dir:
        counts, edges = np.histogram(report.tv_values, bins=bins)
        rows = [f"# schema: {HARD_CSV_SCHEMA}", "bin_left,bin_right,count"]
        rows += [
            f"{edges[i]!r},{edges[i + 1]!r},{int(counts[i])}" for i in range(len(counts))
        ]
        atomic_write_text(os.path.join(config.out_dir, "hard_tv_hist.csv"), "\n".join(rows) + "\n")
        atomic_write_text(
            os.path.join(config.out_dir, "hard_report.json"),
            json.dumps(payload, indent=2, sort_keys=True) + "\n",
        )
    return report, payload


def cover_payload(n: int) -> dict:
    """JSON-ready description of the cover: generators, elements, cosets."""
    cover = build_cover(n)
    d = 1 << n
    groups = []
    for g in cover:
        groups.append(
            {
                "generators": [{"x": row & (d - 1), "z": row >> n} for row in g.generator_rows],
                "elements": [int(i) for i in g.element_indices],
                "coset_reps": [int(i) for i in g.rep_indices],
            }
        )
    return {
        "n": n,
        "d": d,
        "index_convention": "idx = x + d*z, bit j of x/z is qubit j (weight 2^j)",
        "groups": groups,
        "version": __version__,
    }


def _config_dict(config: ExperimentConfig) -> dict:
    out = asdict(config)
    out["sample_grid"] = list(config.sample_grid)
    return out


def _report_json(report) -> str:
    def default(obj):
        if isinstance(obj, (TrialRecord, SweepPoint)):
            return asdict(obj)
        raise TypeError(f"cannot serialize {type(obj)}")

    return json.dumps(asdict(report) if hasattr(report, "__dataclass_fields__") else report,
                      indent=2, sort_keys=True, default=default) + "\n"
