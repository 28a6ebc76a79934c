"""Figure rendering from the delimited artifacts.

Each renderer reads one artifact file and writes one PNG next to it; the
driver renders whatever subset of artifacts is present in the directory
and fails only when none of the known files is found.  Everything is
parsed back from the decimal strings, so plotting never needs the
high-precision stack.
"""

import csv
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .errors import ArtifactError

RAY_ANGLES = [0.0, 2 * math.pi / 3, 4 * math.pi / 3]


def _read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def plot_star_zeros(outdir):
    """Scatter of the star zeros of the top multiple of three (first
    family), overlaid with the rotated second-family zeros if present."""
    rows = _read_csv(outdir / "polys.csv")
    by_n = {int(r["n"]): r for r in rows}
    n = max(k for k in by_n if k % 3 == 0)
    coeffs = [float(x) for x in by_n[n]["coefficients"].split(";")]
    taus = np.roots(list(reversed(coeffs))) if len(coeffs) > 1 else np.array([])

    fig, ax = plt.subplots(figsize=(6, 6))
    lim = 1.15 * max((abs(t) ** (1 / 3) for t in taus), default=1.0)
    for th in RAY_ANGLES:
        ax.plot([0, lim * math.cos(th)], [0, lim * math.sin(th)],
                color="0.8", lw=1, zorder=0)
    pts = []
    for t in taus:
        r = abs(t) ** (1 / 3)
        pts += [r * complex(math.cos(th), math.sin(th)) for th in RAY_ANGLES]
    if pts:
        ax.scatter([p.real for p in pts], [p.imag for p in pts],
                   s=18, color="tab:blue", label=f"first family, n={n}")

    sk = outdir / "second_kind.csv"
    if sk.exists():
        rows2 = {int(r["n"]): r for r in _read_csv(sk)}
        if n in rows2 and rows2[n]["roots2"]:
            pts2 = []
            for s in rows2[n]["roots2"].split(";"):
                r = abs(float(s)) ** (1 / 3)
                pts2 += [r * complex(math.cos(th + math.pi / 3),
                                     math.sin(th + math.pi / 3))
                         for th in RAY_ANGLES]
            ax.scatter([p.real for p in pts2], [p.imag for p in pts2],
                       s=26, marker="x", color="tab:red",
                       label="second family")
    ax.set_aspect("equal")
    ax.legend(loc="upper right", fontsize=8)
    ax.set_title("zeros on the two stars")
    path = outdir / "star_zeros.png"
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def plot_recurrence(outdir):
    rows = _read_csv(outdir / "recurrence.csv")
    ns = np.array([int(r["n"]) for r in rows])
    av = np.array([float(r["a_n"]) for r in rows])

    fig, ax = plt.subplots(figsize=(7, 4.5))
    cmap = plt.get_cmap("tab10")
    for i in range(6):
        sel = ns % 6 == i
        ax.plot(ns[sel], av[sel], "o-", ms=3.5, lw=0.8,
                color=cmap(i), label=f"n = {i} mod 6")
        if sel.sum() >= 3:
            ax.axhline(av[sel][-3:].mean(), color=cmap(i), lw=0.6, ls="--")
    ax.set_xlabel("n")
    ax.set_ylabel("a_n")
    ax.set_title("recurrence coefficients and class tails")
    ax.legend(fontsize=7, ncol=2)
    path = outdir / "recurrence.png"
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def plot_ratios(outdir):
    rows = _read_csv(outdir / "ratios.csv")
    zs = sorted({r["z"] for r in rows})
    z0 = zs[0]

    fig, axes = plt.subplots(1, 2, figsize=(10, 4.2))
    cmap = plt.get_cmap("tab10")
    for fam, ax in zip(("1", "2"), axes):
        for i in range(6):
            seq = [(int(r["k"]), complex(r["value"])) for r in rows
                   if r["family"] == fam and int(r["i"]) == i and r["z"] == z0]
            seq.sort()
            if len(seq) < 2:
                continue
            last = seq[-1][1]
            ks = [k for k, _ in seq[:-1]]
            devs = [abs(v - last) for _, v in seq[:-1]]
            ax.semilogy(ks, devs, "o-", ms=3, lw=0.9, color=cmap(i),
                        label=f"class {i}")
        ax.set_xlabel("k")
        ax.set_title(f"family {fam} ratio convergence at z = {z0}")
        ax.legend(fontsize=7)
    axes[0].set_ylabel("|ratio(k) - ratio(k_max)|")
    path = outdir / "ratios.png"
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def plot_equilibrium(outdir):
    rows = _read_csv(outdir / "equilibrium.csv")

    fig, axes = plt.subplots(1, 2, figsize=(10, 4.2))
    for j, ax in enumerate(axes):
        xs = np.array([float(r["node"]) for r in rows
                       if int(r["interval"]) == j])
        ws = np.array([float(r["weight"]) for r in rows
                       if int(r["interval"]) == j])
        if len(xs) > 1:
            dens = ws / np.gradient(xs)
            ax.plot(xs, dens, lw=1.1, color="tab:green")
            ax.fill_between(xs, dens, alpha=0.25, color="tab:green")
        ax.set_xlabel("x")
        ax.set_title(f"equilibrium density on interval {j}")
    axes[0].set_ylabel("density")
    path = outdir / "equilibrium.png"
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def plot_branches(outdir):
    rows = _read_csv(outdir / "surface_branches.csv")

    fig, axes = plt.subplots(1, 2, figsize=(10, 4.2))
    for cut, ax in zip(("1", "2"), axes):
        xs = [float(r["x"]) for r in rows if r["cut"] == cut]
        for jj, style in zip(range(3), ("-", "--", ":")):
            ys = [math.hypot(float(r[f"t{jj}_re"]), float(r[f"t{jj}_im"]))
                  for r in rows if r["cut"] == cut]
            ax.semilogy(xs, ys, style, lw=1.1, label=f"branch {jj}")
        ax.set_xlabel("x")
        ax.set_title(f"normalised branches above cut {cut}")
        ax.legend(fontsize=8)
    axes[0].set_ylabel("|branch|")
    path = outdir / "surface_branches.png"
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


RENDERERS = [
    ("polys.csv", plot_star_zeros),
    ("recurrence.csv", plot_recurrence),
    ("ratios.csv", plot_ratios),
    ("equilibrium.csv", plot_equilibrium),
    ("surface_branches.csv", plot_branches),
]


def render_all(outdir):
    """Render a figure for every known artifact present; error when the
    directory contains none of them."""
    outdir = Path(outdir)
    written = []
    for name, renderer in RENDERERS:
        if (outdir / name).exists():
            written.append(renderer(outdir))
    if not written:
        raise ArtifactError(
            f"no plottable artifacts found in {outdir} (expected any of "
            + ", ".join(name for name, _ in RENDERERS) + ")")
    return written
