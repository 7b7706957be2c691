"""Figures written next to the CLI's textual output."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .config import Configuration, PNorm  # noqa: E402
from .meb import EnclosingBall, ProbeReport  # noqa: E402

BOUNDARY_SAMPLES = 256


def _style():
    plt.rcParams.update({
        "svg.hashsalt": "ranspace",
        "font.size": 10,
        "axes.spines.right": False,
        "axes.spines.top": False,
    })


def unit_circle(norm: PNorm, samples: int = BOUNDARY_SAMPLES) -> np.ndarray:
    """Points on the unit sphere of a planar p-norm (Euclidean directions,
    rescaled onto the sphere)."""
    theta = np.linspace(0.0, 2 * np.pi, samples, endpoint=False)
    dirs = np.column_stack([np.cos(theta), np.sin(theta)])
    pts = dirs / norm.norms(dirs)[:, None]
    return np.vstack([pts, pts[:1]])


def plot_enclosing_ball(S: Configuration, ball: EnclosingBall, path) -> None:
    """Save the points and the boundary of their enclosing p-ball (d = 2)."""
    if S.dim != 2:
        raise ValueError(f"ball figures need planar configurations, got dim {S.dim}")
    _style()
    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    c = np.asarray(ball.center)
    if ball.radius > 0:
        boundary = c + ball.radius * unit_circle(ball.norm)
        ax.plot(boundary[:, 0], boundary[:, 1], color="#2980b9", lw=1.2,
                label=f"p = {ball.norm}, r = {ball.radius:.4g}")
    ax.scatter(S.array[:, 0], S.array[:, 1], s=18, color="#2c3e50", zorder=3, label="points")
    ax.scatter([c[0]], [c[1]], marker="+", s=60, color="#c0392b", zorder=4, label="center")
    ax.set_aspect("equal", adjustable="datalim")
    ax.legend(loc="best", frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, metadata={"Date": None} if str(path).endswith(".svg") else None)
    plt.close(fig)


def plot_probe(report: ProbeReport, path) -> None:
    """Median radius and center deviations against the perturbation size."""
    _style()
    rows = [r for r in report.rows if r.delta > 0]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    if rows:
        d = [r.delta for r in rows]
        ax.loglog(d, [max(r.median_radius_deviation, 1e-17) for r in rows], "o-",
                  label="median |Δr|")
        ax.loglog(d, [max(r.median_center_deviation, 1e-17) for r in rows], "s--",
                  label="median ‖Δc‖")
        ax.loglog(d, d, ":", color="gray", lw=0.8, label="δ")
    ax.set_xlabel("perturbation δ")
    ax.set_ylabel("deviation")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, metadata={"Date": None} if str(path).endswith(".svg") else None)
    plt.close(fig)
