"""Matplotlib rendering for the CLI report path (Agg backend, file output)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_DPI = 150


def _dist_legend(dist) -> str:
    lab = dist.source_label
    if lab is None:
        return "distribution"
    return f"{lab.family} (m={lab.m})"


def render_distribution(dists, path) -> None:
    """Grouped bar chart of photon-number distributions."""
    cut = 1
    for d in dists:
        sig = np.nonzero(d.probabilities > 1e-6)[0]
        if sig.size:
            cut = max(cut, int(sig[-1]) + 2)
    width = 0.8 / len(dists)
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    for i, d in enumerate(dists):
        k = np.arange(cut)
        p = np.zeros(cut)
        upto = min(cut, d.probabilities.size)
        p[:upto] = d.probabilities[:upto]
        ax.bar(k + (i - (len(dists) - 1) / 2) * width, p, width=width,
               label=_dist_legend(d))
    ax.set_xlabel("photon number k")
    ax.set_ylabel("P(k)")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def render_mandel(sweeps, path) -> None:
    """Mandel parameter curves Q(alpha); the dashed line marks Poissonian Q = 1."""
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    for s in sweeps:
        ax.plot(s.alphas, s.q_values, label=f"{s.family} m={s.m}")
    ax.axhline(1.0, color="0.6", linestyle="--", linewidth=0.8)
    ax.set_xlabel("alpha")
    ax.set_ylabel("Q (Poissonian = 1)")
    ax.legend(frameon=False, ncol=2, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def render_field(field, path) -> None:
    """Heat map of a phase-space field; diverging palette for Wigner."""
    g = field.grid
    fig, ax = plt.subplots(figsize=(5.6, 4.6))
    if field.kind == "wigner":
        vmax = float(np.max(np.abs(field.values)))
        mesh = ax.pcolormesh(g.xs(), g.ys(), field.values.T, cmap="RdBu_r",
                             vmin=-vmax, vmax=vmax, shading="auto")
    else:
        mesh = ax.pcolormesh(g.xs(), g.ys(), field.values.T, cmap="viridis",
                             shading="auto")
    ax.set_xlabel("Re z")
    ax.set_ylabel("Im z")
    ax.set_aspect("equal")
    fig.colorbar(mesh, ax=ax, label=field.kind)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
