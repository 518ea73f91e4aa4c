"""Figure rendering for capacity sweeps (written to files next to the CSVs)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

__all__ = ["save_trajectory_plot", "save_family_plot", "save_crossing_plot"]

# one color per non-unitality degree, matched across all figures
_P_COLORS = ((0.0, "#7b2d8b"), (2.0 / 3.0, "#2e8b57"), (0.9, "#1f77b4"),
             (1.0, "#d62728"))


def _color_for(p: float) -> str:
    for value, color in _P_COLORS:
        if abs(abs(p) - value) < 1e-9:
            return color
    return "#555555"


def _finish(ax, log_x: bool, ylabel: str, path: str) -> None:
    if log_x:
        ax.set_xscale("log")
    ax.set_xlabel("t")
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    ax.legend()
    plt.tight_layout()
    plt.savefig(path, dpi=150)
    plt.close()


def save_trajectory_plot(points, path: str, log_x: bool = False) -> None:
    """Single-run panel: both capacities and their unital references."""
    ts = [pt.t for pt in points]
    _, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(ts, [pt.chi for pt in points], label="one-shot classical", color="#d62728")
    ax.plot(ts, [pt.c_e for pt in points], label="entanglement-assisted",
            color="#1f77b4")
    ax.plot(ts, [pt.chi_unital for pt in points], "--", color="#d62728",
            alpha=0.5, label="one-shot, unital")
    ax.plot(ts, [pt.c_e_unital for pt in points], "--", color="#1f77b4",
            alpha=0.5, label="assisted, unital")
    _finish(ax, log_x, "capacity (bits)", path)


def save_family_plot(runs: dict, quantity: str, path: str,
                     log_x: bool = False) -> None:
    """One curve per p value for a single quantity ('chi' or 'c_e')."""
    _, ax = plt.subplots(figsize=(6.0, 4.0))
    for p, points in sorted(runs.items()):
        ys = [getattr(pt, quantity) for pt in points]
        ax.plot([pt.t for pt in points], ys, color=_color_for(p),
                label=f"p = {p:g}")
    label = "one-shot capacity (bits)" if quantity == "chi" \
        else "assisted capacity (bits)"
    _finish(ax, log_x, label, path)


def save_crossing_plot(runs: dict, path: str, log_x: bool = False) -> None:
    """Unital assisted capacity against non-unital one-shot curves."""
    _, ax = plt.subplots(figsize=(6.0, 4.0))
    drew_reference = False
    for p, points in sorted(runs.items()):
        ts = [pt.t for pt in points]
        if not drew_reference:
            ax.plot(ts, [pt.c_e_unital for pt in points], color=_color_for(0.0),
                    label="assisted, unital")
            drew_reference = True
        if abs(p) > 1e-12:
            ax.plot(ts, [pt.chi for pt in points], color=_color_for(p),
                    label=f"one-shot, p = {p:g}")
    _finish(ax, log_x, "capacity (bits)", path)
