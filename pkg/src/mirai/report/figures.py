"""Matplotlib renderings of a finished report."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from ..config import DIMENSIONS


def render_figures(report, out_dir) -> list[Path]:
    """Dimension-score bars and the MIRAI ranking chart as PNG files."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    names = list(report.models)
    paths = []

    fig, ax = plt.subplots(figsize=(1.8 + 1.6 * len(DIMENSIONS), 4.2))
    x = np.arange(len(DIMENSIONS), dtype=np.float64)
    width = 0.8 / max(len(names), 1)
    for i, name in enumerate(names):
        scores = [report.models[name].dimensions[d].score for d in DIMENSIONS]
        ax.bar(x + (i - (len(names) - 1) / 2.0) * width, scores, width, label=name)
    ax.set_xticks(x)
    ax.set_xticklabels([d.capitalize() for d in DIMENSIONS], rotation=20)
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("dimension score")
    ax.set_title(f"{report.dataset}: dimension scores")
    ax.legend(fontsize=8)
    fig.tight_layout()
    p = out_dir / "dimension_scores.png"
    fig.savefig(p, dpi=120)
    plt.close(fig)
    paths.append(p)

    fig, ax = plt.subplots(figsize=(6.4, 1.2 + 0.6 * len(names)))
    ordered = list(report.ranking)[::-1]
    vals = [report.models[n].mirai for n in ordered]
    colors = ["#d62728" if n == report.target_model else "#1f77b4" for n in ordered]
    ax.barh(np.arange(len(ordered)), vals, color=colors)
    ax.set_yticks(np.arange(len(ordered)))
    ax.set_yticklabels(ordered)
    ax.set_xlim(0, 1.0)
    ax.set_xlabel("composite index")
    ax.set_title(f"{report.dataset}: ranking (target in red)")
    for i, v in enumerate(vals):
        ax.text(v + 0.01, i, f"{v:.4f}", va="center", fontsize=8)
    fig.tight_layout()
    p = out_dir / "ranking.png"
    fig.savefig(p, dpi=120)
    plt.close(fig)
    paths.append(p)
    return paths
