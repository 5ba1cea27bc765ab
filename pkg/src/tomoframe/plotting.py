"""Figure rendering for reports, distributions, quorums, and sweeps.

Uses the Agg backend so figures render headless; PNG output carries no
timestamps, keeping repeated runs byte-identical.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

DPI = 150


def save_matrix_figure(matrix, path, title="reconstruction"):
    """Real/imaginary heatmaps of a reconstructed matrix plus its spectrum."""
    matrix = np.asarray(matrix)
    herm = 0.5 * (matrix + matrix.conj().T)
    eigenvalues = np.linalg.eigvalsh(herm)
    scale = max(float(np.abs(matrix).max()), 1e-12)
    fig, axes = plt.subplots(1, 3, figsize=(10.5, 3.2), constrained_layout=True)
    for ax, part, label in ((axes[0], matrix.real, "Re"), (axes[1], matrix.imag, "Im")):
        im = ax.imshow(part, cmap="RdBu_r", vmin=-scale, vmax=scale)
        ax.set_title(label)
        fig.colorbar(im, ax=ax, fraction=0.046)
    axes[2].bar(np.arange(len(eigenvalues)), eigenvalues, color="tab:gray")
    axes[2].axhline(0.0, color="k", lw=0.8)
    axes[2].set_title("eigenvalues")
    axes[2].set_xlabel("index")
    fig.suptitle(title)
    fig.savefig(path, dpi=DPI)
    plt.close(fig)


def save_distribution_figure(thetas, values, path, title="phase distribution"):
    """Stem plot of the per-radian phase densities with the flat reference."""
    fig, ax = plt.subplots(figsize=(6.0, 3.4), constrained_layout=True)
    ax.stem(thetas, values, basefmt=" ")
    ax.axhline(1.0 / (2.0 * np.pi), color="tab:red", ls="--", lw=1.0, label="flat (1/2pi)")
    ax.set_xlabel("theta (rad)")
    ax.set_ylabel("P(theta)")
    ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    fig.savefig(path, dpi=DPI)
    plt.close(fig)


def save_sweep_figure(rows, slope, path, title="error scaling"):
    """Log-log trace-distance curve with the fitted power law."""
    shots = np.array([r.shots for r in rows], dtype=float)
    means = np.array([r.mean_trace_distance for r in rows])
    stds = np.array([r.std_trace_distance for r in rows])
    fig, ax = plt.subplots(figsize=(5.2, 3.6), constrained_layout=True)
    ax.errorbar(shots, means, yerr=stds, fmt="o-", capsize=3, label="mean trace distance")
    if slope is not None and means[0] > 0:
        fit = means[0] * (shots / shots[0]) ** slope
        ax.plot(shots, fit, "--", color="tab:red", label=f"slope {slope:.3f}")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("shots per setting")
    ax.set_ylabel("trace distance")
    ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    fig.savefig(path, dpi=DPI)
    plt.close(fig)


def save_quorum_figure(gram_eigenvalues, path, directions=None, title="quorum"):
    """Gram spectrum (log scale) and, when available, the direction layout."""
    w = np.asarray(gram_eigenvalues, dtype=float)
    panels = 2 if directions is not None else 1
    fig, axes = plt.subplots(1, panels, figsize=(5.2 * panels, 3.6), constrained_layout=True)
    axes = np.atleast_1d(axes)
    axes[0].semilogy(np.arange(len(w)), np.clip(w, 1e-18, None), "o")
    axes[0].set_xlabel("index")
    axes[0].set_ylabel("Gram eigenvalue")
    axes[0].set_title("Gram spectrum")
    if directions is not None:
        d = np.asarray(directions, dtype=float)
        ax = axes[1]
        if d.ndim == 2 and d.shape[1] == 2:
            ax.scatter(d[:, 1], d[:, 0], c=np.arange(len(d)), cmap="viridis")
            ax.set_xlabel("phi (rad)")
            ax.set_ylabel("theta (rad)")
            ax.invert_yaxis()
        elif d.ndim == 2 and d.shape[1] == 3:
            sc = ax.scatter(d[:, 0], d[:, 1], c=d[:, 2], cmap="coolwarm", vmin=-1, vmax=1)
            fig.colorbar(sc, ax=ax, label="z")
            ax.set_xlabel("x")
            ax.set_ylabel("y")
            ax.set_aspect("equal")
        else:
            ax.axis("off")
        ax.set_title("directions")
    fig.suptitle(title)
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
