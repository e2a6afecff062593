"""Optional figure rendering for the CLI's CSV report data.

The delimited output remains the interface; these helpers render the same
rows to PNG files when a figure path is requested.  matplotlib is imported
lazily with the Agg backend so headless runs never touch a display.
"""

from __future__ import annotations

import numpy as np


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def plot_convergence(rows, path: str, title: str = "Parseval partial sums"):
    """Render (radius, value) rows as a convergence curve."""
    plt = _pyplot()
    rows = sorted(rows)
    radii = [r for r, _ in rows]
    values = [v for _, v in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(radii, values, marker="o")
    ax.set_xlabel("frequency truncation radius")
    ax.set_ylabel("partial sum")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_coverage(grid: np.ndarray, box, resolution: float, path: str,
                  title: str = "cube cover multiplicity"):
    """Render an (x, y, count) coverage grid as a heat map."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5, 5))
    extent = (box.lo[0], box.hi[0], box.lo[1], box.hi[1])
    im = ax.imshow(grid.T, origin="lower", extent=extent, interpolation="nearest")
    fig.colorbar(im, ax=ax, label="count")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
