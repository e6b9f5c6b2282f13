"""PNG rendering of margin sweeps."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .pipeline import SweepRow  # noqa: E402


def plot_sweep(rows: Sequence[SweepRow], path: str | Path, title: str | None = None) -> None:
    """Precision, recall and F1 against margin, one panel each.

    The unfiltered row, when present, is drawn as a dashed horizontal line.
    """
    swept = [r for r in rows if r.margin is not None]
    base = next((r for r in rows if r.margin is None), None)
    margins = [r.margin for r in swept]
    fig, axes = plt.subplots(1, 3, figsize=(12, 3.6), sharex=True)
    for ax, metric in zip(axes, ("precision", "recall", "f1")):
        ax.plot(margins, [100 * getattr(r, metric) for r in swept], marker="o", markersize=3)
        if base is not None:
            ax.axhline(100 * getattr(base, metric), linestyle="--", color="grey", label="unfiltered")
            ax.legend(loc="best", fontsize=8)
        ax.set_xlabel("margin")
        ax.set_ylabel(f"{metric} (%)" if metric != "f1" else "F1 (%)")
        ax.grid(alpha=0.3)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
