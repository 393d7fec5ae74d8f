"""Figures written next to CLI reports. matplotlib is imported lazily so the
numeric paths never pay for it."""
from __future__ import annotations

import numpy as np


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def plot_schmidt_spectra(spectra, path, title=None):
    """Bar chart of the singular values across one or more cuts."""
    plt = _pyplot()
    spectra = list(spectra)
    fig, axes = plt.subplots(1, len(spectra), figsize=(3.2 * len(spectra) + 1, 3), squeeze=False)
    for ax, spec in zip(axes[0], spectra):
        s = np.asarray(spec.singular_values)
        ax.bar(np.arange(1, len(s) + 1), s, color="0.35")
        left, right = spec.cut
        ax.set_title(f"{tuple(left)} | {tuple(right)}", fontsize=9)
        ax.set_xlabel("index")
        ax.set_xticks(np.arange(1, len(s) + 1))
    axes[0][0].set_ylabel("Schmidt coefficient")
    if title:
        fig.suptitle(title, fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_history(history, path, title=None):
    """Objective per sweep of the local-unitary refinement (log scale)."""
    plt = _pyplot()
    h = np.maximum(np.asarray(history, dtype=float), 1e-16)
    fig, ax = plt.subplots(figsize=(4.5, 3))
    ax.semilogy(np.arange(len(h)), h, "o-", color="k", ms=3)
    ax.set_xlabel("sweep")
    ax.set_ylabel(r"$\|U - \otimes_k V_k\|_F$")
    if title:
        ax.set_title(title, fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
