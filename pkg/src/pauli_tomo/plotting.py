"""Static plots from experiment CSVs (optional; needs matplotlib).

The core package never imports matplotlib; this module is a small bundled
script so sweeps and histograms can be rendered after the fact:

    python -m pauli_tomo.plotting sweep sweep_curve.csv sweep.png
    python -m pauli_tomo.plotting hard hard_tv_hist.csv hist.png
"""

from __future__ import annotations

import csv
import sys


def _load_csv(path: str) -> list[dict]:
    with open(path) as fh:
        lines = [line for line in fh if not line.startswith("#")]
    return list(csv.DictReader(lines))


def plot_sweep(csv_path: str, out_path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rows = _load_csv(csv_path)
    n = [int(r["n_samples"]) for r in rows]
    med = [float(r["median_tv"]) for r in rows]
    q25 = [float(r["q25"]) for r in rows]
    q75 = [float(r["q75"]) for r in rows]

    fig, ax = plt.subplots(figsize=(5, 4))
    ax.fill_between(n, q25, q75, alpha=0.25, label="IQR")
    ax.loglog(n, med, "o-", label="median TV")
    ref = [med[0] * (n[0] / x) ** 0.5 for x in n]
    ax.loglog(n, ref, "--", color="gray", label=r"$N^{-1/2}$ reference")
    ax.set_xlabel("total samples N")
    ax.set_ylabel("TV error")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)


def plot_hard_histogram(csv_path: str, out_path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rows = _load_csv(csv_path)
    lefts = [float(r["bin_left"]) for r in rows]
    rights = [float(r["bin_right"]) for r in rows]
    counts = [int(r["count"]) for r in rows]

    fig, ax = plt.subplots(figsize=(5, 4))
    widths = [r - l for l, r in zip(lefts, rights)]
    ax.bar(lefts, counts, width=widths, align="edge")
    ax.set_xlabel("pairwise TV distance")
    ax.set_ylabel("pair count")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)


def main(argv: list[str]) -> int:
    if len(argv) != 3 or argv[0] not in ("sweep", "hard"):
        print("usage: python -m pauli_tomo.plotting {sweep|hard} <in.csv> <out.png>", file=sys.stderr)
        return 2
    if argv[0] == "sweep":
        plot_sweep(argv[1], argv[2])
    else:
        plot_hard_histogram(argv[1], argv[2])
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
