"""Figure rendering for sweep results.

SVG output is made byte-deterministic by pinning the matplotlib hash salt
and stripping the creation date, so regenerating a figure from identical
results reproduces the file exactly.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

_AXIS_LABELS = {
    "M": "number of receive elements",
    "K": "number of users",
    "P_s": "average transmit power (dBm)",
}

_STYLE = {
    ("raq", "mrc"): ("tab:blue", "o", "RAQ MRC"),
    ("raq", "zf"): ("tab:red", "s", "RAQ ZF"),
    ("mmimo", "mrc"): ("tab:green", "^", "M-MIMO MRC"),
    ("mmimo", "zf"): ("tab:purple", "v", "M-MIMO ZF"),
}


def render_rate_figure(table, path) -> None:
    """One curve per system/scheme pair, Monte Carlo solid, bounds dashed."""
    path = Path(path)
    with matplotlib.rc_context({"svg.hashsalt": "raqsim"}):
        fig, ax = plt.subplots(figsize=(6.0, 4.2))
        axis = table[0].axis
        for (system, scheme), (color, marker, label) in _STYLE.items():
            rows = [r for r in table
                    if r.system == system and r.scheme == scheme and not r.err]
            if not rows:
                continue
            x = [r.value for r in rows]
            ax.plot(x, [r.rate_mc for r in rows], color=color, marker=marker,
                    markersize=4, linewidth=1.2, label=label)
            ax.plot(x, [r.rate_lb for r in rows], color=color, linestyle="--",
                    linewidth=1.0, label=f"{label} LB")
        ax.set_xlabel(_AXIS_LABELS.get(axis, axis))
        ax.set_ylabel("average achievable rate (bit/s/Hz/user)")
        ax.grid(True, alpha=0.3)
        ax.legend(fontsize=8, ncol=2)
        fig.tight_layout()
        if path.suffix.lower() == ".svg":
            fig.savefig(path, format="svg", metadata={"Date": None})
        else:
            fig.savefig(path)
        plt.close(fig)
