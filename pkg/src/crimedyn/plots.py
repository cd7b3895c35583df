"""Optional SVG figures (requires matplotlib, the ``plot`` extra).

Files are self-contained (text converted to paths) and deterministic: no date
stamp and a fixed hash salt for element ids.
"""
from __future__ import annotations

import numpy as np

from .errors import ParameterError


def _pyplot():
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        raise ParameterError("--svg needs matplotlib (pip install 'crimedyn[plot]')") from None
    matplotlib.rcParams["svg.hashsalt"] = "crimedyn"
    matplotlib.rcParams["svg.fonttype"] = "path"
    return plt


def _save(fig, path) -> None:
    fig.savefig(path, format="svg", metadata={"Date": None})
    import matplotlib.pyplot as plt

    plt.close(fig)


def trajectory_svg(traj, path) -> None:
    plt = _pyplot()
    fig, axes = plt.subplots(2, 2, figsize=(8, 6), sharex=True)
    for ax, k, label in zip(axes.flat, range(4), ("S1", "S2", "C", "R")):
        ax.plot(traj.times, traj.states[:, k], lw=1.2)
        ax.set_ylabel(label)
    for ax in axes[1]:
        ax.set_xlabel("t (years)")
    fig.tight_layout()
    _save(fig, path)


def curve_svg(points, path, vary: str = "beta") -> None:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(7, 4.5))
    pts = [p for p in points if p.error is None]
    r0 = np.array([p.r0_value for p in pts])
    stable_cfe = [p.cfe_stability == "stable" for p in pts]
    ax.plot(r0[stable_cfe], np.zeros(sum(stable_cfe)), "b-", lw=1.5, label="crime-free (stable)")
    unstable_cfe = [not s for s in stable_cfe]
    ax.plot(r0[unstable_cfe], np.zeros(sum(unstable_cfe)), "b:", lw=1.5, label="crime-free (unstable)")
    for stab, style in (("stable", "r."), ("unstable", "k.")):
        xs = [p.r0_value for p in pts for c, s in p.branches if s == stab]
        ys = [c for p in pts for c, s in p.branches if s == stab]
        ax.plot(xs, ys, style, ms=3, label=f"endemic ({stab})")
    ax.set_xlabel(f"R0 (varying {vary})")
    ax.set_ylabel("C*")
    ax.legend(loc="upper left", fontsize=8)
    fig.tight_layout()
    _save(fig, path)


def contour_svg(cells, nx: int, ny: int, path) -> None:
    plt = _pyplot()
    sg = np.array([c.sigma for c in cells]).reshape(ny, nx)
    gm = np.array([c.gamma for c in cells]).reshape(ny, nx)
    r0 = np.array([c.r0 for c in cells]).reshape(ny, nx)
    fig, ax = plt.subplots(figsize=(6, 5))
    cs = ax.contourf(sg, gm, r0, levels=20)
    ax.contour(sg, gm, r0, levels=[1.0], colors="k", linewidths=1.2)
    fig.colorbar(cs, ax=ax, label="R0")
    ax.set_xlabel("sigma")
    ax.set_ylabel("gamma")
    fig.tight_layout()
    _save(fig, path)


def sweep_svg(results, path) -> None:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for a, traj in results:
        if isinstance(traj, Exception):
            continue
        ax.plot(traj.times, traj.states[:, 2], lw=1.2, label=f"alpha={a:g}")
    ax.set_xlabel("t (years)")
    ax.set_ylabel("C(t)")
    ax.legend(fontsize=8)
    fig.tight_layout()
    _save(fig, path)
