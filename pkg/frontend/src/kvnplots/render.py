"""The four plot kinds rendered from solver output files.

Raster output only; every renderer returns a small summary of what it drew
so callers (and the smoke tests) can assert on content without parsing
images back.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Tuple

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .readers import (
    SchemaError,
    density_grid_shape,
    load_density_csv,
    load_expansion_json,
    load_report_json,
)

KINDS = ("heatmap", "tau_marginal", "spectrum", "convergence")


@dataclass(frozen=True)
class PlotJob:
    """One rendering request: input files, plot kind, style, output path."""

    kind: str
    inputs: Tuple[str, ...]
    output: str
    colormap: str = "viridis"
    figsize: Tuple[float, float] = (7.0, 5.5)
    dpi: int = 130

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaError(f"unknown plot kind {self.kind!r}")
        if not self.inputs:
            raise SchemaError("plot job needs at least one input file")


@dataclass
class RenderSummary:
    """What got drawn, for smoke assertions."""

    output: Path
    kind: str
    series: int = 0
    bars: int = 0
    overlay_circles: int = 0
    overlay_rays: int = 0
    notes: List[str] = field(default_factory=list)


def _finish(fig, job: PlotJob, summary: RenderSummary) -> RenderSummary:
    out = Path(job.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=job.dpi)
    plt.close(fig)
    summary.output = out
    return summary


def render_heatmap(job: PlotJob) -> RenderSummary:
    """Phase-space density map with constant-H circles and constant-tau rays."""
    density = load_density_csv(job.inputs[0])
    n_q, n_p = density_grid_shape(density)
    q = density["q"].reshape(n_q, n_p)
    p = density["p"].reshape(n_q, n_p)
    rho = density["rho_spectral"].reshape(n_q, n_p)
    fig, ax = plt.subplots(figsize=job.figsize)
    mesh = ax.pcolormesh(q, p, rho, cmap=job.colormap, shading="auto")
    fig.colorbar(mesh, ax=ax, label="density")
    summary = RenderSummary(Path(job.output), "heatmap")
    # oscillator guides (unit-scaled display): circles of constant energy,
    # rays of constant dynamical time clockwise from the p-axis
    r_max = float(np.hypot(q, p).max())
    for radius in np.linspace(r_max / 4, r_max * 0.95, 4):
        theta = np.linspace(0, 2 * np.pi, 256)
        ax.plot(radius * np.sin(theta), radius * np.cos(theta),
                color="white", lw=0.6, alpha=0.5)
        summary.overlay_circles += 1
    for angle in np.arange(0.0, 2 * np.pi, np.pi / 4):
        ax.plot([0, r_max * np.sin(angle)], [0, r_max * np.cos(angle)],
                color="white", lw=0.5, alpha=0.35, ls="--")
        summary.overlay_rays += 1
    ax.set_xlabel("q")
    ax.set_ylabel("p")
    ax.set_title(f"phase-space density ({Path(job.inputs[0]).name})")
    ax.set_aspect("equal")
    return _finish(fig, job, summary)


def render_tau_marginal(job: PlotJob) -> RenderSummary:
    """Waterfall of angle-marginals, one trace per density file."""
    fig, ax = plt.subplots(figsize=job.figsize)
    summary = RenderSummary(Path(job.output), "tau_marginal")
    bins = np.linspace(-np.pi, np.pi, 121)
    centers = 0.5 * (bins[:-1] + bins[1:])
    for offset, path in enumerate(job.inputs):
        density = load_density_csv(path)
        angle = np.arctan2(density["q"], density["p"])
        weights = density["rho_spectral"]
        marginal, _ = np.histogram(angle, bins=bins, weights=weights)
        total = marginal.sum()
        if total > 0:
            marginal = marginal / (total * (bins[1] - bins[0]))
        ax.plot(centers, marginal + 0.4 * offset, label=Path(path).name)
        summary.series += 1
    ax.set_xlabel("angle from the p-axis (clockwise)")
    ax.set_ylabel("marginal density (offset per file)")
    ax.legend(fontsize=8)
    ax.set_title("dynamical-time marginals")
    return _finish(fig, job, summary)


def render_spectrum(job: PlotJob) -> RenderSummary:
    """Coefficient magnitudes |c_n| over the mode window: 2N+1 bars."""
    data = load_expansion_json(job.inputs[0])
    modes = [entry["n"] for entry in data["coefficients"]]
    mags = [abs(complex(entry["re"], entry["im"])) for entry in data["coefficients"]]
    fig, ax = plt.subplots(figsize=job.figsize)
    bars = ax.bar(modes, mags, color="steelblue")
    ax.set_xlabel("mode n")
    ax.set_ylabel("|c_n|")
    ax.set_title(f"mode spectrum, N={data['N']}, sum |c|^2 = {data['completeness']:.6f}")
    summary = RenderSummary(Path(job.output), "spectrum", bars=len(bars))
    return _finish(fig, job, summary)


def render_convergence(job: PlotJob) -> RenderSummary:
    """Error-vs-window curves across evolve reports (one point per report)."""
    points = []
    for path in job.inputs:
        report = load_report_json(path)
        n = report.get("N")
        if n is None:
            raise SchemaError(f"{path}: convergence plots need reports with N")
        for entry in report["l2_error_vs_oracle"]:
            points.append((int(n), float(entry["t"]), float(entry["err"])))
    times = sorted({t for _, t, _ in points})
    fig, ax = plt.subplots(figsize=job.figsize)
    summary = RenderSummary(Path(job.output), "convergence")
    for t in times:
        series = sorted((n, err) for n, tt, err in points if tt == t)
        ax.loglog([n for n, _ in series], [e for _, e in series],
                  marker="o", label=f"t = {t}")
        summary.series += 1
        if all(a >= b for (_, a), (_, b) in zip(series, series[1:])):
            summary.notes.append(f"t={t}: nonincreasing")
    ax.set_xlabel("mode window N")
    ax.set_ylabel("relative L2 error vs transport oracle")
    ax.legend(fontsize=8)
    ax.set_title("spectral convergence")
    return _finish(fig, job, summary)


RENDERERS = {
    "heatmap": render_heatmap,
    "tau_marginal": render_tau_marginal,
    "spectrum": render_spectrum,
    "convergence": render_convergence,
}


def render(job: PlotJob) -> RenderSummary:
    """Dispatch a job to its renderer; raises SchemaError on bad inputs."""
    return RENDERERS[job.kind](job)
