"""Complex amplitudes sampled on quadrature grids.

An AmplitudeGrid stores chi on a rectangular grid in either (q, p) or
(tau, H) coordinates, together with the per-axis quadrature rule, so norms
and inner products do not depend on how a particular grid was built.

Axis flavors:

* periodic uniform nodes on the tau interval (trapezoid weights; exact for
  trigonometric polynomials below the node count, and FFT-differentiable),
* composite Gauss-Legendre panels, for energy axes and for tau axes that
  must align with the edges of piecewise states,
* Gauss-Legendre in u = sqrt(H) mapped to H (integrands built from
  sqrt(H) stay smooth),
* plain trapezoid axes for (q, p) rectangles.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Optional, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import DivergentIntegralError, GridMismatchError, UnboundedTauError
from .models import (
    HamiltonianModel,
    dynamical_time,
    tau_bounds,
)

QP = "qp"
TAUH = "tauh"


@dataclass(frozen=True)
class Axis:
    """Quadrature nodes and weights along one grid direction."""

    nodes: np.ndarray
    weights: np.ndarray
    periodic: bool = False
    period: Optional[float] = None

    def __post_init__(self):
        if self.nodes.shape != self.weights.shape or self.nodes.ndim != 1:
            raise ValueError("axis nodes/weights must be matching 1D arrays")
        if np.any(self.weights <= 0):
            raise ValueError("quadrature weights must be positive")

    def __len__(self):
        return self.nodes.size

    @property
    def uniform_spacing(self) -> Optional[float]:
        """Node spacing if the axis is uniform, else None."""
        if len(self) < 2:
            return None
        d = np.diff(self.nodes)
        h = d[0]
        if np.allclose(d, h, rtol=1e-12, atol=1e-15 * abs(h)):
            return float(h)
        return None

    def matches(self, other: "Axis") -> bool:
        return (
            len(self) == len(other)
            and np.array_equal(self.nodes, other.nodes)
            and np.array_equal(self.weights, other.weights)
        )


def periodic_uniform_axis(lo: float, hi: float, n: int) -> Axis:
    """Uniform nodes on (lo, hi], weights (hi-lo)/n.

    Right-aligned so every node stays inside the canonical half-open tau
    range.  For periodic integrands this is the trapezoid rule, exact for
    trigonometric polynomials of degree < n.
    """
    if n < 2:
        raise ValueError("need at least two nodes")
    h = (hi - lo) / n
    nodes = lo + h * np.arange(1, n + 1)
    return Axis(nodes, np.full(n, h), periodic=True, period=hi - lo)


def legendre_axis(lo: float, hi: float, n_per_panel: int, edges=None) -> Axis:
    """Composite Gauss-Legendre axis on [lo, hi].

    ``edges`` lists interior panel boundaries (sorted, inside (lo, hi));
    states with jumps should pass their jump locations here so every panel
    sees a smooth integrand.
    """
    pts = [lo] + sorted(float(e) for e in (edges or []) if lo < e < hi) + [hi]
    x, w = leggauss(n_per_panel)
    nodes, weights = [], []
    for a, b in zip(pts[:-1], pts[1:]):
        nodes.append(0.5 * (b - a) * x + 0.5 * (a + b))
        weights.append(0.5 * (b - a) * w)
    return Axis(np.concatenate(nodes), np.concatenate(weights))


def sqrt_energy_axis(h_max: float, n_per_panel: int, panels: int = 12) -> Axis:
    """Gauss-Legendre in u = sqrt(H), mapped back to the H axis.

    Nodes u^2 with weights 2*u*w integrate dH exactly; integrands carrying
    sqrt(H) factors become polynomially smooth in u.
    """
    x, w = leggauss(n_per_panel)
    edges = np.linspace(0.0, np.sqrt(h_max), panels + 1)
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        u = 0.5 * (b - a) * x + 0.5 * (a + b)
        wu = 0.5 * (b - a) * w
        nodes.append(u * u)
        weights.append(2.0 * u * wu)
    return Axis(np.concatenate(nodes), np.concatenate(weights))


def trapezoid_axis(lo: float, hi: float, n: int) -> Axis:
    """Plain trapezoid rule on [lo, hi] with n nodes."""
    if n < 2:
        raise ValueError("need at least two nodes")
    nodes = np.linspace(lo, hi, n)
    h = (hi - lo) / (n - 1)
    weights = np.full(n, h)
    weights[0] = weights[-1] = h / 2.0
    return Axis(nodes, weights)


@dataclass(frozen=True)
class AmplitudeGrid:
    """A complex amplitude chi sampled on a 2D quadrature grid.

    ``values[i, j]`` is chi at ``(axis1.nodes[i], axis2.nodes[j])`` where
    axis1 is q or tau and axis2 is p or H.  Values are treated as
    immutable; every operation allocates a fresh grid.
    """

    coords: str
    axis1: Axis
    axis2: Axis
    values: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        if self.coords not in (QP, TAUH):
            raise ValueError(f"unknown coords {self.coords!r}")
        if self.values.shape != (len(self.axis1), len(self.axis2)):
            raise ValueError("values shape does not match axes")

    @property
    def shape(self) -> Tuple[int, int]:
        return self.values.shape

    def mesh(self):
        """Meshgrid of node coordinates, shaped like values."""
        return np.meshgrid(self.axis1.nodes, self.axis2.nodes, indexing="ij")

    def weight_matrix(self) -> np.ndarray:
        return np.outer(self.axis1.weights, self.axis2.weights)

    def with_values(self, values: np.ndarray, time: Optional[float] = None) -> "AmplitudeGrid":
        return replace(self, values=values, time=self.time if time is None else time)

    def same_axes(self, other: "AmplitudeGrid") -> bool:
        return (
            self.coords == other.coords
            and self.axis1.matches(other.axis1)
            and self.axis2.matches(other.axis2)
        )

    def integrate(self, field: Optional[np.ndarray] = None) -> complex:
        """Quadrature of an arbitrary field (default |chi|^2) over the grid."""
        f = np.abs(self.values) ** 2 if field is None else field
        return (self.axis1.weights @ f) @ self.axis2.weights

    def norm_squared(self) -> float:
        return float(np.real(self.integrate()))

    def norm(self) -> float:
        return float(np.sqrt(self.norm_squared()))

    def normalized(self) -> "AmplitudeGrid":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("cannot normalize a zero amplitude")
        return self.with_values(self.values / n)

    def inner(self, other: "AmplitudeGrid") -> complex:
        """<self|other> with self conjugated, on identical grids."""
        if not self.same_axes(other):
            raise GridMismatchError("amplitudes live on different grids")
        return complex(
            (self.axis1.weights @ (np.conj(self.values) * other.values))
            @ self.axis2.weights
        )


def grid_from_function(coords, axis1, axis2, fn: Callable, time: float = 0.0) -> AmplitudeGrid:
    """Sample fn(x1, x2) on the tensor grid of the two axes."""
    x1, x2 = np.meshgrid(axis1.nodes, axis2.nodes, indexing="ij")
    values = np.asarray(fn(x1, x2), dtype=complex)
    return AmplitudeGrid(coords, axis1, axis2, values, time=time)


def tau_energy_grid(
    model: HamiltonianModel,
    n_tau: int,
    n_energy: int,
    energy_max: float,
    *,
    energy_min: float = 0.0,
    tau_edges=None,
    energy_edges=None,
    sqrt_energy: bool = False,
    energy_panels: int = 12,
) -> Tuple[Axis, Axis]:
    """Axes for a (tau, H) grid on the model's tau range x [energy_min, energy_max].

    The tau axis is periodic uniform unless ``tau_edges`` is given, in
    which case composite Gauss-Legendre panels split at those edges (use
    for piecewise-constant states).  The energy axis is composite
    Gauss-Legendre, optionally in sqrt(H).
    """
    bounds = tau_bounds(model)
    if bounds is None:
        raise UnboundedTauError("(tau, H) grids need a finite tau range")
    lo, hi = bounds
    if tau_edges is None:
        tau_axis = periodic_uniform_axis(lo, hi, n_tau)
    else:
        per_panel = max(4, int(np.ceil(n_tau / (len(list(tau_edges)) + 1))))
        tau_axis = legendre_axis(lo, hi, per_panel, edges=tau_edges)
    if sqrt_energy:
        if energy_min != 0.0:
            raise ValueError("sqrt-energy axes start at H = 0")
        panels = max(energy_panels, 1)
        per_panel = max(4, int(np.ceil(n_energy / panels)))
        energy_axis = sqrt_energy_axis(energy_max, per_panel, panels)
    else:
        panels = max(energy_panels, 1)
        per_panel = max(4, int(np.ceil(n_energy / panels)))
        inner = np.linspace(energy_min, energy_max, panels + 1)[1:-1]
        edges = sorted(set(list(inner) + list(energy_edges or [])))
        energy_axis = legendre_axis(energy_min, energy_max, per_panel, edges=edges)
    return tau_axis, energy_axis


def position_momentum_grid(
    model: HamiltonianModel,
    n_q: int,
    n_p: int,
    *,
    energy_max: Optional[float] = None,
    q_bounds: Optional[Tuple[float, float]] = None,
    p_bounds: Optional[Tuple[float, float]] = None,
) -> Tuple[Axis, Axis]:
    """Uniform trapezoid axes for a (q, p) rectangle.

    Without explicit bounds the rectangle is the bounding box of the
    oscillator energy shell H <= energy_max.
    """
    if q_bounds is None or p_bounds is None:
        if model.kind != "harmonic" or energy_max is None:
            raise DivergentIntegralError(
                "explicit (q, p) bounds required for unbounded systems"
            )
        q_half = np.sqrt(2.0 * energy_max / (model.m * model.omega**2))
        p_half = np.sqrt(2.0 * model.m * energy_max)
        q_bounds = q_bounds or (-q_half, q_half)
        p_bounds = p_bounds or (-p_half, p_half)
    return (
        trapezoid_axis(q_bounds[0], q_bounds[1], n_q),
        trapezoid_axis(p_bounds[0], p_bounds[1], n_p),
    )


def grid_tau_energy_fields(model: HamiltonianModel, grid: AmplitudeGrid):
    """(tau, H) arrays at the grid nodes, for either coordinate system.

    On (q, p) grids the exact origin is assigned tau = 0 (a measure-zero
    convention so densities stay evaluable there).
    """
    x1, x2 = grid.mesh()
    if grid.coords == TAUH:
        return x1, x2
    q, p = x1, x2
    energy = model.hamiltonian(q, p)
    if model.kind == "harmonic":
        w = model.omega
        tau = np.arctan2(model.m * w * q, p) / w
        tau = np.where(tau <= -np.pi / w, tau + 2.0 * np.pi / w, tau)
        return tau, energy
    tau, energy = dynamical_time(model, q, p)
    return tau, energy
