"""Learning curves and summary tables from episode CSV files."""

from __future__ import annotations

import csv
from collections import defaultdict
from pathlib import Path

from .experiment import read_csv

SUMMARY_HEADER = ("run", "seeds", "episodes", "first100_reward", "last100_reward", "first100_failures", "last100_failures")


def mean_curve(rows: list, column: str) -> tuple[list, list]:
    """Per-episode mean of ``column`` across seeds."""
    acc = defaultdict(list)
    for row in rows:
        acc[row["episode"]].append(row[column])
    episodes = sorted(acc)
    return episodes, [sum(acc[e]) / len(acc[e]) for e in episodes]


def smooth(values: list, window: int) -> list:
    if window <= 1:
        return list(values)
    out, total = [], 0.0
    for i, v in enumerate(values):
        total += v
        if i >= window:
            total -= values[i - window]
        out.append(total / min(i + 1, window))
    return out


def summarize(name: str, rows: list, window: int = 100) -> tuple:
    episodes, reward = mean_curve(rows, "cum_reward")
    _, failures = mean_curve(rows, "failures")
    k = min(window, len(episodes))

    def avg(xs):
        return sum(xs) / len(xs)

    seeds = len({r["seed"] for r in rows})
    return (name, seeds, len(episodes), avg(reward[:k]), avg(reward[-k:]), avg(failures[:k]), avg(failures[-k:]))


def render_report(csv_paths: list, out_dir: str | Path, window: int = 50, prefix: str = "") -> list[Path]:
    """Write ``summary.csv``, ``reward.png`` and ``failures.png`` (each name prefixed) into ``out_dir``."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    runs = [(Path(p).stem, read_csv(p)) for p in csv_paths]

    summary = out / f"{prefix}summary.csv"
    with summary.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SUMMARY_HEADER)
        for name, rows in runs:
            writer.writerow([v if isinstance(v, (str, int)) else f"{v:.4f}" for v in summarize(name, rows)])

    written = [summary]
    for column, label, fname in (
        ("cum_reward", "cumulative reward", "reward.png"),
        ("failures", "execution failures", "failures.png"),
    ):
        fig, ax = plt.subplots(figsize=(7, 4))
        for name, rows in runs:
            episodes, values = mean_curve(rows, column)
            ax.plot(episodes, smooth(values, window), label=name, linewidth=1.2)
        ax.set_xlabel("episode")
        ax.set_ylabel(f"{label} (mean over seeds, window {window})")
        ax.grid(alpha=0.3)
        ax.legend(fontsize="small")
        fig.tight_layout()
        path = out / f"{prefix}{fname}"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)
    return written
