"""Render result tables as figures next to their CSV files."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .scenarios import ResultTable

__all__ = ["plot_table"]

_STYLES = ["-", "--", "-.", ":"]


def plot_table(table: ResultTable, path: str | Path, title: str | None = None) -> Path:
    """Plot every population/fidelity column against the time axis.

    Populations (``P_*``) and fidelities (``F``/``F_*``) share the y axis;
    the figure is written to ``path`` (format from the extension).
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    x = table.rows[:, 0]
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    has_fid = False
    for k, name in enumerate(table.headers[1:], start=1):
        style = _STYLES[(k - 1) % len(_STYLES)]
        ax.plot(x, table.rows[:, k], style, lw=1.4, label=name)
        has_fid = has_fid or name.startswith("F")
    ax.set_xlabel(table.headers[0])
    ax.set_ylabel("fidelity" if has_fid else "population")
    ax.set_ylim(-0.02, 1.02)
    ax.grid(alpha=0.3)
    ax.legend(frameon=False, fontsize=9)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
