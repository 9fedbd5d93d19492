"""Static figures written next to the CLI tables."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

_RC = {
    "font.size": 10,
    "axes.labelsize": 11,
    "legend.fontsize": 9,
    "lines.linewidth": 1.5,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 150,
}


def _save(fig, path):
    fig.tight_layout()
    # no timestamp metadata, so reruns are byte-identical
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)


def _phi_axis(ax):
    ax.set_xlim(0, np.pi / 2)
    ax.set_xticks([0, np.pi / 8, np.pi / 4, 3 * np.pi / 8, np.pi / 2])
    ax.set_xticklabels(["0", "π/8", "π/4", "3π/8", "π/2"])
    ax.set_xlabel("attack strength φ")


def plot_figure1(rows, path):
    phi = np.array([r["phi"] for r in rows])
    with plt.rc_context(_RC):
        fig, (ax_s, ax_i) = plt.subplots(1, 2, figsize=(9, 3.6))
        for key, style in (("S_AB", "-"), ("S_AE", "--"), ("S_BE", ":")):
            ax_s.plot(phi, [r[key] for r in rows], style, label=key)
        ax_s.axhline(2.0, color="0.5", lw=0.8)
        ax_s.axvline(np.pi / 4, color="0.8", lw=0.8)
        ax_s.set_ylabel("Bell parameter S")
        ax_s.legend(frameon=False)
        for key, style in (("I_AB", "-"), ("I_AE", "--"), ("I_BE", ":")):
            ax_i.plot(phi, [r[key] for r in rows], style, label=key)
        ax_i.axvline(np.pi / 4, color="0.8", lw=0.8)
        ax_i.set_ylabel("mutual information I (bits)")
        ax_i.legend(frameon=False)
        for ax in (ax_s, ax_i):
            _phi_axis(ax)
        _save(fig, path)


def plot_scenario(rows, path):
    phi = np.array([r["phi"] for r in rows])
    N, n = rows[0]["N"], rows[0]["n"]
    with plt.rc_context(_RC):
        fig, (ax_s, ax_i) = plt.subplots(1, 2, figsize=(9, 3.6))
        ax_s.plot(phi, [r["S_a"] for r in rows], "o", ms=3, label="S_a optimized")
        ax_s.plot(phi, [r["S_a_formula"] for r in rows], "-", label="S_a closed form")
        ax_s.plot(phi, [r["S_u"] for r in rows], "s", ms=3, label="S_u optimized")
        ax_s.plot(phi, [r["S_u_formula"] for r in rows], "--", label="S_u closed form")
        ax_s.axhline(2 ** (N / 2), color="0.5", lw=0.8)
        ax_s.axhline(2 ** ((N - n + 1) / 2), color="0.7", lw=0.8, ls="--")
        ax_s.set_ylabel("Mermin-Klyshko value")
        ax_s.set_title(f"N={N}, n={n}")
        ax_s.legend(frameon=False)
        ax_i.plot(phi, [r["I_a"] for r in rows], "-", label="I_a")
        ax_i.plot(phi, [r["I_u"] for r in rows], "--", label="I_u")
        ax_i.set_ylabel("mutual information (bits)")
        ax_i.legend(frameon=False)
        for ax in (ax_s, ax_i):
            _phi_axis(ax)
        _save(fig, path)


def plot_overlap_table(rows, path):
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(9, 3.8))
        x = np.arange(len(rows))
        ratio = [r["max_value"] / r["threshold"] for r in rows]
        ref = [r["reference_value"] / r["threshold"] for r in rows]
        colors = ["tab:red" if r["verdict"] == "possible" else "tab:blue" for r in rows]
        ax.bar(x, ratio, color=colors, alpha=0.7, label="optimized / threshold")
        ax.plot(x, ref, "k_", ms=14, label="reference / threshold")
        ax.axhline(1.0, color="0.4", lw=0.8)
        ax.set_xticks(x)
        ax.set_xticklabels([r["label"] for r in rows], rotation=60, ha="right", fontsize=7)
        ax.set_ylim(0.9, max(ratio + ref) * 1.03)
        ax.legend(frameon=False)
        _save(fig, path)


def plot_counterexample(rows, path):
    alpha = [r["alpha"] for r in rows]
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(5, 3.6))
        ax.plot(alpha, [r["S_ABC"] for r in rows], "-o", ms=3, label="S_ABC")
        ax.plot(alpha, [r["S_BCD"] for r in rows], "--s", ms=3, label="S_BCD")
        ax.axhline(2 * np.sqrt(2), color="0.5", lw=0.8)
        ax.set_xlabel("α")
        ax.set_ylabel("Mermin-Klyshko value")
        ax.legend(frameon=False)
        _save(fig, path)
