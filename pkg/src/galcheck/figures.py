"""Figure rendering for the report path.

Renders operator tables as annotated grids (with optimality diffs
highlighted) and small carriers as Hasse diagrams.  Files are written with
date metadata suppressed so repeated runs produce identical bytes.
"""
from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .order import FiniteDomain, iter_bits

_SAVE_KWARGS = {"dpi": 110, "metadata": {"Date": None}}


def save_table_figure(title: str, row_labels: Sequence[str],
                      col_labels: Sequence[str], table: dict,
                      best: dict | None, path: str | Path) -> Path:
    """Render a binary-operator table as a colored grid.

    ``table`` maps (row, col) label pairs to result strings; when ``best``
    is given, cells that disagree with it are highlighted and show the
    optimal value in parentheses.
    """
    nrows, ncols = len(row_labels), len(col_labels)
    fig, ax = plt.subplots(figsize=(0.9 * ncols + 1.2, 0.5 * nrows + 1.2))
    ax.set_xlim(0, ncols)
    ax.set_ylim(0, nrows)
    ax.invert_yaxis()
    ax.set_xticks([i + 0.5 for i in range(ncols)])
    ax.set_xticklabels(col_labels, fontsize=9)
    ax.set_yticks([i + 0.5 for i in range(nrows)])
    ax.set_yticklabels(row_labels, fontsize=9)
    ax.xaxis.tick_top()
    ax.tick_params(length=0)
    for spine in ax.spines.values():
        spine.set_visible(False)
    for r, row in enumerate(row_labels):
        for c, col in enumerate(col_labels):
            value = table[(row, col)]
            optimal = best is None or best[(row, col)] == value
            color = "#e8f0e8" if optimal else "#f4c7a6"
            ax.add_patch(plt.Rectangle((c, r), 1, 1, facecolor=color,
                                       edgecolor="white"))
            text = value if optimal else f"{value}\n({best[(row, col)]})"
            ax.text(c + 0.5, r + 0.5, text, ha="center", va="center", fontsize=8)
    ax.set_title(title, fontsize=11)
    path = Path(path)
    fig.savefig(path, bbox_inches="tight", **_SAVE_KWARGS)
    plt.close(fig)
    return path


def _hasse_covers(domain: FiniteDomain) -> list[tuple[int, int]]:
    covers = []
    for j in range(domain.size):
        below = domain.down_bits(j) & ~(1 << j)
        for i in iter_bits(below):
            strictly_between = below & domain.up_bits(i) & ~(1 << i)
            if not strictly_between:
                covers.append((i, j))
    return covers


def save_hasse_figure(domain: FiniteDomain, path: str | Path,
                      title: str | None = None) -> Path:
    """Render a small carrier's order as a layered Hasse diagram."""
    ranks = [0] * domain.size
    for j in sorted(range(domain.size),
                    key=lambda j: domain.down_bits(j).bit_count()):
        below = domain.down_bits(j) & ~(1 << j)
        ranks[j] = max((ranks[i] + 1 for i in iter_bits(below)), default=0)
    layers: dict[int, list[int]] = {}
    for i, r in enumerate(ranks):
        layers.setdefault(r, []).append(i)
    pos = {}
    for r, members in layers.items():
        members.sort(key=lambda i: str(domain.elements[i]))
        for k, i in enumerate(members):
            pos[i] = (k - (len(members) - 1) / 2, r)

    fig, ax = plt.subplots(figsize=(6, 4))
    for i, j in _hasse_covers(domain):
        (x1, y1), (x2, y2) = pos[i], pos[j]
        ax.plot([x1, x2], [y1, y2], color="#888888", linewidth=1, zorder=1)
    for i, (x, y) in pos.items():
        ax.scatter([x], [y], s=900, color="#e8f0e8", edgecolor="#444444", zorder=2)
        ax.text(x, y, str(domain.elements[i]), ha="center", va="center",
                fontsize=9, zorder=3)
    ax.set_title(title or domain.name, fontsize=11)
    ax.axis("off")
    path = Path(path)
    fig.savefig(path, bbox_inches="tight", **_SAVE_KWARGS)
    plt.close(fig)
    return path
