"""Figures written next to the delimited reports."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .bench import RunReport  # noqa: E402


def _slug(name: str) -> str:
    return "".join(c if c.isalnum() or c in "-_." else "_" for c in name)


def plot_trajectories(rep: RunReport, path: str | Path) -> Path:
    """Step plot of the best objective (as a color sum, penalties included) per run."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    xlabel = "iterations" if rep.time_unit == "iterations" else "time (s)"
    for r in rep.runs:
        if not r.trajectory:
            continue
        xs = [it if rep.time_unit == "iterations" else t for t, it, _ in r.trajectory]
        ys = [-h for _, _, h in r.trajectory]
        ax.step(xs, ys, where="post", lw=1.2, label=f"seed {r.seed}")
    if rep.bkr:
        ax.axhline(rep.bkr, color="k", ls="--", lw=0.8, label=f"BKR {rep.bkr}")
    ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel("-h(x)")
    ax.set_title(f"{rep.instance}  (K={rep.num_colors}, N={rep.dimension})")
    ax.legend(fontsize=7, frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_deviations(reports: list[RunReport], path: str | Path) -> Path:
    """Grouped bars of the relative gap of Best and Avr to BKR per instance."""
    path = Path(path)
    rows = [r.row() for r in reports if r.bkr and r.best is not None]
    fig, ax = plt.subplots(figsize=(max(4.0, 0.6 * len(rows) + 2), 3.6))
    xs = range(len(rows))
    ax.bar([x - 0.2 for x in xs], [r["dev_best"] for r in rows], width=0.4, label="Best")
    ax.bar([x + 0.2 for x in xs], [r["dev_avr"] for r in rows], width=0.4, label="Avr")
    ax.set_xticks(list(xs))
    ax.set_xticklabels([r["instance"] for r in rows], rotation=45, ha="right", fontsize=8)
    ax.set_ylabel("(value - BKR) / BKR")
    ax.axhline(0, color="k", lw=0.6)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def write_figures(reports: list[RunReport], outdir: str | Path) -> list[Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = [plot_trajectories(r, outdir / f"trajectory_{_slug(r.instance)}.png") for r in reports]
    if any(r.bkr for r in reports):
        paths.append(plot_deviations(reports, outdir / "deviation.png"))
    return paths
