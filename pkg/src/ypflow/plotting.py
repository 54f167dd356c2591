"""SVG rendering of fingerprints, trajectories and zones.

Output is byte-for-byte reproducible: text stays text, the id salt is fixed
and no date is written.
"""

from __future__ import annotations

import io

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

FP_STYLE = {1: ("tab:blue", "-"), 2: ("tab:red", "--"), 3: ("tab:green", ":")}
MERGE_MARKER = {"FP1-FP2": ("o", "black"), "FP2-FP3": ("s", "tab:purple")}


def _style():
    plt.rcParams.update(
        {
            "svg.hashsalt": "ypflow",
            "svg.fonttype": "none",
            "font.size": 10,
            "axes.grid": True,
            "grid.alpha": 0.3,
            "lines.linewidth": 1.4,
        }
    )


def _to_svg(fig) -> str:
    buf = io.StringIO()
    fig.savefig(buf, format="svg", metadata={"Date": None})
    plt.close(fig)
    return buf.getvalue()


def render_fingerprint_svg(branches, zones=None, merge_points=(), trajectories=(), title=None) -> str:
    """One polyline per branch over the (x, t) plane, merges as markers.

    Polylines carry ids ``fp{k}-branch{j}``, merge markers
    ``merge-{kind}-{i}`` and confinement spans ``zone-{i}``.
    """
    if not branches and not trajectories:
        raise ValueError("nothing to draw")
    _style()
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    seen = set()
    counters: dict[int, int] = {}
    for br in branches:
        color, ls = FP_STYLE.get(br.k, ("gray", "-"))
        j = counters.get(br.k, 0)
        counters[br.k] = j + 1
        label = f"FP{br.k}" if br.k not in seen else None
        seen.add(br.k)
        (line,) = ax.plot(br.x, br.t, color=color, ls=ls, label=label)
        line.set_gid(f"fp{br.k}-branch{j}")
    for i, tr in enumerate(trajectories):
        (line,) = ax.plot(tr.x, tr.t, color="tab:orange", lw=1.0, label="trajectory" if i == 0 else None)
        line.set_gid(f"trajectory{i}")
    for i, mp in enumerate(merge_points):
        marker, color = MERGE_MARKER.get(mp.kind, ("x", "black"))
        (pt,) = ax.plot([mp.x], [mp.t], marker=marker, color=color, ls="none", ms=6)
        pt.set_gid(f"merge-{mp.kind}-{i}")
    if zones is not None:
        for i, (lo, hi) in enumerate(zones.confinement):
            span = ax.axvspan(lo, hi, ymin=0, ymax=0.03, color="tab:gray", alpha=0.6)
            span.set_gid(f"zone-{i}")
    ax.set_xlabel("x")
    ax.set_ylabel("t")
    if title:
        ax.set_title(title)
    if seen or trajectories:
        ax.legend(loc="upper right")
    fig.tight_layout()
    return _to_svg(fig)


def render_curve_svg(xs, ys, xlabel: str, ylabel: str, marks=(), title=None) -> str:
    """Plain line plot, used for Delta(t) and x(t) style figures."""
    _style()
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    (line,) = ax.plot(xs, ys, color="tab:blue")
    line.set_gid("curve")
    ax.axhline(0.0, color="black", lw=0.6)
    for i, (mx, my) in enumerate(marks):
        (pt,) = ax.plot([mx], [my], "o", color="tab:red")
        pt.set_gid(f"mark{i}")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    return _to_svg(fig)
