"""Figure rendering for the CLI report paths.

Renders alongside the delimited output: a filled-contour velocity field for
`field`, and per-method flow-rate curves for `sweep`.  Uses the Agg backend
so it works headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

__all__ = ["render_field", "render_sweep"]


def render_field(path: str, x: np.ndarray, y: np.ndarray, u: np.ndarray,
                 title: str) -> None:
    """Filled contours of u on the grid; NaN marks points outside the domain."""
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    cs = ax.contourf(x, y, u, levels=24, cmap="viridis")
    ax.contour(x, y, u, levels=12, colors="k", linewidths=0.4, alpha=0.5)
    fig.colorbar(cs, ax=ax, label="u")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title(title)
    ax.set_aspect("equal")
    fig.tight_layout()
    fig.savefig(path, dpi=160)
    plt.close(fig)


def render_sweep(path: str, rows: list[dict], title: str) -> None:
    """Flow rate against beta, one line per method (log-log when possible)."""
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    series: dict[tuple[str, float], list[tuple[float, float]]] = {}
    for row in rows:
        series.setdefault((row["method"], row["a"]), []).append((row["beta"], row["value"]))
    for (method, a), pts in sorted(series.items()):
        pts.sort()
        bs = [p[0] for p in pts]
        vs = [p[1] for p in pts]
        label = f"{method}, a={a:g}" if len({k[1] for k in series}) > 1 else method
        ax.plot(bs, vs, marker="o", markersize=3, label=label)
    if all(r["beta"] > 0 and r["value"] > 0 for r in rows):
        ax.set_xscale("log")
        ax.set_yscale("log")
    ax.set_xlabel("beta")
    ax.set_ylabel("Q")
    ax.set_title(title)
    ax.legend(fontsize=7)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=160)
    plt.close(fig)
