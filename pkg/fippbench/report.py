import logging
from typing import Dict, List

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg as FigureCanvas
from matplotlib.figure import Figure

logger = logging.getLogger(__name__)

CLASS_COLORS = [(0.2, 0.5, 0.9), (0.9, 0.5, 0.2), (0.4, 0.7, 0.3)]


def counterexample_figure(report: Dict) -> Figure:
    """Grouped bars: |class| next to F(class) for each color of every k."""
    rows = report.get("rows", [])
    fig = Figure(figsize=(10.5, 5.5), dpi=100)
    ax = fig.add_subplot(111)
    if not rows:
        ax.text(0.5, 0.5, "no rows", ha='center', va='center', transform=ax.transAxes)
        return fig

    ks = np.array([row["k"] for row in rows])
    n_colors = len(rows[0]["sizes"])
    width = 0.8 / (2 * n_colors)
    for c in range(n_colors):
        sizes = [row["sizes"][c] for row in rows]
        values = [row["F"][c] for row in rows]
        color = CLASS_COLORS[c % len(CLASS_COLORS)]
        base = ks - 0.4 + width / 2 + 2 * c * width
        ax.bar(base, sizes, width, color=color, edgecolor='black', linewidth=0.2, label=f"|class {c}|")
        ax.bar(base + width, values, width, color=color, alpha=0.45, edgecolor='black', linewidth=0.2,
               hatch='//', label=f"F(class {c})")

    ax.set_xlabel('k')
    ax.set_ylabel('size / F')
    ax.set_title('Color classes of the counterexample coloring never exceed F')
    if len(ks) <= 32:
        ax.set_xticks(ks)
    ax.grid(True, axis='y', linestyle='--', alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    return fig


def thresholds_figure(rows: List[Dict]) -> Figure:
    """Measured FIPP₂ thresholds of const_F(c) against (n+1)·c, one line per n."""
    fig = Figure(figsize=(7.5, 5.0), dpi=100)
    ax = fig.add_subplot(111)
    for i, n in enumerate(sorted({row["n"] for row in rows})):
        mine = sorted((row for row in rows if row["n"] == n), key=lambda r: r["c"])
        cs = [row["c"] for row in mine]
        color = CLASS_COLORS[i % len(CLASS_COLORS)]
        measured = [np.nan if row["threshold"] is None else row["threshold"] for row in mine]
        ax.plot(cs, [row["expected"] for row in mine], linestyle='--', color=color, alpha=0.6,
                label=f"(n+1)·c, n={n}")
        ax.plot(cs, measured, marker='o', linestyle='none', color=color, label=f"measured, n={n}")
    ax.set_xlabel('c')
    ax.set_ylabel('least k')
    ax.set_title('FIPP₂ thresholds for constant set functions')
    ax.grid(True, linestyle='--', alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    return fig


def _save(fig: Figure, path: str) -> None:
    FigureCanvas(fig)
    fig.savefig(path)
    logger.info("Wrote chart %s", path)


def plot_counterexample(report: Dict, path: str) -> None:
    _save(counterexample_figure(report), path)


def plot_thresholds(rows: List[Dict], path: str) -> None:
    _save(thresholds_figure(rows), path)
