"""Figure rendering for weight tables and spectra (Agg backend, fixed style)."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

golden_mean = (np.sqrt(5) - 1.0) / 2.0
fig_width = 3.4
colors = ["#08589e", "#2b8cbe", "#4eb3d3", "#7bccc4", "#a8ddb5"]

params = {
    "axes.prop_cycle": matplotlib.cycler(color=colors),
    "axes.labelsize": 9,
    "font.family": "serif",
    "font.size": 8,
    "mathtext.fontset": "stix",
    "legend.fontsize": 7,
    "legend.frameon": False,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "xtick.direction": "in",
    "ytick.direction": "in",
    "figure.figsize": [fig_width, fig_width * golden_mean],
    "figure.dpi": 200,
    "savefig.dpi": 200,
    "savefig.bbox": "tight",
    "lines.linewidth": 1.0,
    "svg.hashsalt": "polysu11",
}

_LABELS = {"bg": r"$\rho_{\mathrm{BG}}(t)$", "p": r"$\rho_{\mathrm{P}}(t)$"}


def _save(fig, path):
    path = Path(path)
    # metadata pinned so that repeated runs give byte-identical files
    meta = {"Software": None} if path.suffix.lower() == ".png" else {"Date": None, "Creator": None}
    if path.suffix.lower() == ".pdf":
        meta = {"CreationDate": None, "Creator": None, "Producer": None}
    fig.savefig(path, metadata=meta)
    plt.close(fig)


def plot_weight_table(rows: Sequence[tuple[float, float, float]], family: str, path) -> Path:
    """Plot rho(t) for each gamma in the (gamma, t, rho) rows."""
    with matplotlib.rc_context(params):
        fig, ax = plt.subplots()
        data = np.asarray(rows, dtype=float)
        for gamma in dict.fromkeys(data[:, 0]):
            sel = data[:, 0] == gamma
            ax.plot(data[sel, 1], data[sel, 2], label=rf"$\gamma = {gamma:g}$")
        ax.set_xlabel(r"$t = |\zeta|^2$")
        ax.set_ylabel(_LABELS.get(family, r"$\rho(t)$"))
        ax.set_xlim(0.0, data[:, 1].max())
        # rho is singular at t -> 0 and decays exponentially, so a log axis shows both ends
        ax.set_yscale("log")
        ax.legend()
        _save(fig, path)
    return Path(path)


def plot_spectrum(levels: Sequence[dict], gamma: float, path) -> Path:
    """Analytic levels as lines, grid eigenvalues of both partners as markers."""
    with matplotlib.rc_context(params):
        fig, ax = plt.subplots()
        n = [lv["n"] for lv in levels]
        ax.plot(n, [lv["analytic"] for lv in levels], color="0.6", label="analytic")
        ax.plot(n, [lv["grid_plus"] for lv in levels], "o", mfc="none", label=r"grid $H_+$")
        ax.plot(n, [lv["grid_minus"] for lv in levels], "x", label=r"grid $H_-$")
        ax.set_xlabel(r"$n$")
        ax.set_ylabel(r"$E_n$")
        ax.set_title(rf"$\gamma = {gamma:g}$")
        ax.legend()
        _save(fig, path)
    return Path(path)
