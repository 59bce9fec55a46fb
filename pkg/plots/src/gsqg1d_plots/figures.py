"""Declarative figure specs over the solver's file contracts, plus the nine
standard layouts of a complete run directory.

A FigureSpec names its input files, panels, and overlay references; render()
consumes only those files and the closed-form overlays.  Expected run-dir
layout (each subdirectory produced by the corresponding solver command):

    solve_r2/   profile.csv iterates.csv report.json     (solve --problem r2)
    sweep_r2/   sweep.csv profile_a<alpha>.csv ...        (sweep --problem r2)
    sinc/       profile.csv report.json                   (solve at alpha=0.01)
    solve_hp/   profile.csv iterates.csv report.json      (solve --problem hp)
    sweep_hp/   sweep.csv profile_a<alpha>.csv ...        (sweep --problem hp)
    field2d/    sections.csv                              (field2d)
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .figio import column, load_columns
from .overlays import REGISTRY


@dataclass(frozen=True)
class Curve:
    source: str                  # key into FigureSpec.inputs
    x: str
    y: str
    label: str = ""
    transform: str = "none"      # none | times_x | neg_times_x | minus_sinc
    bold: bool = False
    where: tuple | None = None   # (column, value) row filter


@dataclass(frozen=True)
class Panel:
    curves: tuple
    title: str = ""
    overlays: tuple = ()
    logx: bool = False
    xlim: tuple | None = None
    xlabel: str = "x"
    markers: bool = False


@dataclass(frozen=True)
class FigureSpec:
    name: str
    inputs: dict
    panels: tuple
    ncols: int = 2
    suptitle: str = ""

    def input_paths(self):
        return list(self.inputs.values())


def _apply_transform(name, x, y):
    if name == "none":
        return y
    if name == "neg":
        return -y
    if name == "times_x":
        return x * y
    if name == "neg_times_x":
        return -x * y
    if name == "minus_sinc":
        return y - REGISTRY["sinc"][0](x)
    raise ValueError(f"unknown transform {name!r}")


def render(spec: FigureSpec, outdir, fmt: str = "png", dpi: int = 110) -> Path:
    """Draw the figure and return the written path; deterministic given the
    input files."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    tables = {key: load_columns(path) for key, path in spec.inputs.items()}
    n = len(spec.panels)
    ncols = min(spec.ncols, n)
    nrows = (n + ncols - 1) // ncols
    fig, axes = plt.subplots(nrows, ncols, figsize=(5.2 * ncols, 3.9 * nrows),
                             squeeze=False)
    for ax in axes.flat[n:]:
        ax.axis("off")
    for ax, panel in zip(axes.flat, spec.panels):
        xref = None
        for cv in panel.curves:
            table = tables[cv.source]
            path = spec.inputs[cv.source]
            x = column(table, path, cv.x)
            y = column(table, path, cv.y)
            if cv.where is not None:
                sel = column(table, path, cv.where[0]) == cv.where[1]
                x, y = x[sel], y[sel]
            y = _apply_transform(cv.transform, x, y)
            if panel.xlim is not None:
                sel = (x >= panel.xlim[0]) & (x <= panel.xlim[1])
                x, y = x[sel], y[sel]
            style = dict(lw=2.2 if cv.bold else 0.9)
            if panel.markers:
                style.update(marker="o", ms=4)
            ax.plot(x, y, label=cv.label or None, **style)
            xref = x if xref is None or x.size > xref.size else xref
        for name in panel.overlays:
            fn, label = REGISTRY[name]
            ax.plot(xref, fn(xref), "k--", lw=1.2, label=label)
        if panel.logx:
            ax.set_xscale("log")
        ax.set_title(panel.title)
        ax.set_xlabel(panel.xlabel)
        if any(c.label for c in panel.curves) or panel.overlays:
            ax.legend(fontsize=7)
    if spec.suptitle:
        fig.suptitle(spec.suptitle)
    fig.tight_layout()
    path = outdir / f"{spec.name}.{fmt}"
    fig.savefig(path, dpi=dpi, metadata={"Software": "gsqg1d-plots"})
    plt.close(fig)
    return path


# -------------------------------------------------------------------------
# the nine standard layouts
# -------------------------------------------------------------------------

def _csv_header(path):
    with open(path, newline="") as fh:
        return next(csv.reader(fh))


def _iterate_curves(path, transform, source="iterates"):
    names = [c for c in _csv_header(path) if c.startswith("iter_")]
    curves = []
    for k, name in enumerate(names):
        curves.append(Curve(source, "x", name, transform=transform,
                            bold=(k == len(names) - 1),
                            label="final" if k == len(names) - 1 else ""))
    return tuple(curves)


def _sweep_profile_curves(run_sub: Path, ycol: str, transform: str):
    curves = []
    inputs = {}
    for path in sorted(run_sub.glob("profile_a*.csv")):
        alpha = path.stem.replace("profile_a", "")
        inputs[f"a{alpha}"] = path
        curves.append(Curve(f"a{alpha}", "x", ycol, label=f"alpha={alpha}",
                            transform=transform))
    if not inputs:
        raise FileNotFoundError(f"no profile_a*.csv files under {run_sub}")
    return inputs, tuple(curves)


def fig1_profile_iterations_full_plane(run_dir: Path) -> FigureSpec:
    it = run_dir / "solve_r2" / "iterates.csv"
    return FigureSpec(
        "fig1_profile_iterations_full_plane", {"iterates": it},
        (Panel(_iterate_curves(it, "none"), title="f iterates",
               overlays=("barrier",), xlim=(0, 2.0)),
         Panel(_iterate_curves(it, "neg_times_x"), title="omega = -x f iterates",
               xlim=(0, 2.0))))


def fig2_alpha_family_full_plane(run_dir: Path) -> FigureSpec:
    inputs, curves_f = _sweep_profile_curves(run_dir / "sweep_r2", "f", "none")
    _, curves_om = _sweep_profile_curves(run_dir / "sweep_r2", "f", "neg_times_x")
    return FigureSpec(
        "fig2_alpha_family_full_plane", inputs,
        (Panel(curves_f, title="profiles f*", overlays=("barrier",), xlim=(0, 2.0)),
         Panel(curves_om, title="profiles omega* = -x f*", xlim=(0, 2.0))))


def fig3_sinc_limit(run_dir: Path) -> FigureSpec:
    prof = run_dir / "sinc" / "profile.csv"
    return FigureSpec(
        "fig3_sinc_limit", {"profile": prof},
        (Panel((Curve("profile", "x", "f", label="f*", bold=True),),
               title="f* vs the small-alpha limit", overlays=("sinc",),
               xlim=(0, 2.0)),
         Panel((Curve("profile", "x", "f", transform="minus_sinc",
                      label="f* - sinc", bold=True),),
               title="difference", xlim=(0, 2.0))))


def fig4_profile_iterations_half_plane(run_dir: Path) -> FigureSpec:
    it = run_dir / "solve_hp" / "iterates.csv"
    return FigureSpec(
        "fig4_profile_iterations_half_plane", {"iterates": it},
        (Panel(_iterate_curves(it, "none"), title="f iterates", logx=True),
         Panel(_iterate_curves(it, "times_x"), title="theta = x f iterates",
               logx=True)))


def fig5_alpha_family_half_plane(run_dir: Path) -> FigureSpec:
    inputs, curves_f = _sweep_profile_curves(run_dir / "sweep_hp", "f_rescaled",
                                             "none")
    _, curves_th = _sweep_profile_curves(run_dir / "sweep_hp", "f_rescaled",
                                         "times_x")
    return FigureSpec(
        "fig5_alpha_family_half_plane", inputs,
        (Panel(curves_f, title="rescaled profiles", xlim=(0, 10.0),
               overlays=("barrier", "burgers")),
         Panel(curves_th, title="rescaled theta", xlim=(0, 10.0))))


def fig6_scaling_ratio_half_plane(run_dir: Path) -> FigureSpec:
    sweep = run_dir / "sweep_hp" / "sweep.csv"
    return FigureSpec(
        "fig6_scaling_ratio_half_plane", {"sweep": sweep},
        (Panel((Curve("sweep", "alpha", "ratio", label="c_ell/c_theta",
                      bold=True),),
               title="scaling ratio vs alpha", overlays=("focusing_bound",),
               xlabel="alpha", markers=True),),
        ncols=1)


def _sections_fig(run_dir: Path, name: str, ycol: str, transform: str,
                  title: str) -> FigureSpec:
    sections = run_dir / "field2d" / "sections.csv"
    table_lines = [(1000.0, "x=0"), (1001.0, "x=1"), (1004.0, "x=4"),
                   (1016.0, "x=16"), (2000.0, "y=0"), (2001.0, "y=1"),
                   (2004.0, "y=4"), (2016.0, "y=16")]
    panels = []
    for tag, label in table_lines:
        panels.append(Panel(
            (Curve("sections", "coord", ycol, transform=transform, bold=True,
                   where=("line", tag)),),
            title=f"{title} at {label}",
            xlabel="y" if label.startswith("x") else "x"))
    return FigureSpec(name, {"sections": sections}, tuple(panels), ncols=4)


def fig7_sections_theta(run_dir: Path) -> FigureSpec:
    return _sections_fig(run_dir, "fig7_sections_theta", "theta", "none", "theta")


def fig8_sections_minus_u1(run_dir: Path) -> FigureSpec:
    spec = _sections_fig(run_dir, "fig8_sections_minus_u1", "u1", "none", "-u1")
    # negate by transform: reuse neg via times? dedicated transform below
    panels = tuple(
        Panel(tuple(Curve(c.source, c.x, c.y, c.label, "neg", c.bold, c.where)
                    for c in p.curves),
              title=p.title, overlays=p.overlays, logx=p.logx, xlim=p.xlim,
              xlabel=p.xlabel, markers=p.markers)
        for p in spec.panels)
    return FigureSpec(spec.name, spec.inputs, panels, ncols=4)


def fig9_sections_u2(run_dir: Path) -> FigureSpec:
    return _sections_fig(run_dir, "fig9_sections_u2", "u2", "none", "u2")


ALL_FIGURES = [
    fig1_profile_iterations_full_plane,
    fig2_alpha_family_full_plane,
    fig3_sinc_limit,
    fig4_profile_iterations_half_plane,
    fig5_alpha_family_half_plane,
    fig6_scaling_ratio_half_plane,
    fig7_sections_theta,
    fig8_sections_minus_u1,
    fig9_sections_u2,
]


def render_all(run_dir, outdir, fmt: str = "png") -> list[Path]:
    run_dir = Path(run_dir)
    written = []
    for builder in ALL_FIGURES:
        spec = builder(run_dir)
        missing = [str(p) for p in spec.input_paths() if not Path(p).exists()]
        if missing:
            raise FileNotFoundError(
                f"{spec.name}: missing inputs {missing}; see the run-dir "
                "layout in gsqg1d_plots.figures")
        written.append(render(spec, outdir, fmt=fmt))
    return written
