"""Closed-form stationary amplitudes: canonical ensembles and energy shells.

Separable solutions of the gauged amplitude equation pick out the
canonical ensemble: chi = Z^{-1/2} e^{-beta H/2} e^{-i epsilon t/hbar}
with Z(beta) the partition function over the phase-space region.  In
superposable form the same states read f(H) e^{i epsilon (tau - t)/hbar}
for a normalized energy profile f; this module builds both, plus the
microcanonical shell profiles used by the box example.

The phase-space measure is dOmega = dq dp (equivalently dtau dH), with no
action-constant normalization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, NamedTuple, Optional, Tuple

import numpy as np

from .errors import DivergentIntegralError, UnboundedTauError
from .grids import (
    TAUH,
    AmplitudeGrid,
    Axis,
    grid_tau_energy_fields,
    legendre_axis,
    periodic_uniform_axis,
)
from .models import HARMONIC, HamiltonianModel, tau_bounds

#: Boltzmann tail kept below this fraction of the peak when truncating H.
ENERGY_TAIL = 1e-16


def energy_cutoff(beta: float, tail: float = ENERGY_TAIL) -> float:
    """H above which e^{-beta H} drops below ``tail`` of its peak."""
    return math.log(1.0 / tail) / beta


CANONICAL = "canonical_half_boltzmann"
MICROCANONICAL = "microcanonical_shell"
CUSTOM_PROFILE = "custom"


@dataclass(frozen=True)
class EnergyProfile:
    """A normalized energy profile f(H) for stationary states.

    Normalization is 1/T with T the tau-range length, so that the full
    state f(H) e^{i epsilon (tau - t)/hbar} has unit norm over dtau dH.
    """

    tag: str
    fn: Callable[[np.ndarray], np.ndarray]
    support: Tuple[float, float]
    beta: Optional[float] = None
    center: Optional[float] = None
    width: Optional[float] = None

    def __call__(self, energy) -> np.ndarray:
        energy = np.asarray(energy, dtype=float)
        lo, hi = self.support
        inside = (energy >= lo) & (energy <= hi)
        out = np.zeros(energy.shape, dtype=complex)
        if np.any(inside):
            out[inside] = self.fn(energy[inside])
        return out

    def params(self) -> dict:
        if self.tag == CANONICAL:
            return {"beta": self.beta}
        if self.tag == MICROCANONICAL:
            return {"center": self.center, "width": self.width}
        return {}


def canonical_profile(model: HamiltonianModel, beta: float) -> EnergyProfile:
    """f(H) = sqrt(beta/T) e^{-beta H/2} on H >= 0."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    period = _finite_period(model)
    amp = math.sqrt(beta / period)
    return EnergyProfile(
        CANONICAL,
        lambda H: amp * np.exp(-0.5 * beta * H),
        support=(0.0, math.inf),
        beta=float(beta),
    )


def microcanonical_profile(
    model: HamiltonianModel, center: float, width: float
) -> EnergyProfile:
    """Hard-edged shell |H - center| <= width/2, constant inside."""
    if width <= 0:
        raise ValueError("shell width must be positive")
    if center - width / 2.0 < 0:
        raise ValueError("shell extends below H = 0")
    period = _finite_period(model)
    amp = math.sqrt(1.0 / (period * width))
    return EnergyProfile(
        MICROCANONICAL,
        lambda H: np.full(H.shape, amp),
        support=(center - width / 2.0, center + width / 2.0),
        center=float(center),
        width=float(width),
    )


def custom_profile(model, fn, support) -> EnergyProfile:
    return EnergyProfile(CUSTOM_PROFILE, fn, support=tuple(support))


def _finite_period(model: HamiltonianModel) -> float:
    period = model.tau_period
    if period is None:
        raise UnboundedTauError("profiles need a finite tau range to normalize")
    return period


def profile_overlap(model: HamiltonianModel, a: EnergyProfile, b: EnergyProfile) -> complex:
    """Int conj(a) b dH, closed form for the standard profile pairs."""
    period = _finite_period(model)
    if a.tag == CANONICAL and b.tag == CANONICAL:
        return 2.0 * math.sqrt(a.beta * b.beta) / ((a.beta + b.beta) * period)
    if a.tag == MICROCANONICAL and b.tag == MICROCANONICAL:
        lo = max(a.support[0], b.support[0])
        hi = min(a.support[1], b.support[1])
        if hi <= lo:
            return 0.0
        return (hi - lo) / (period * math.sqrt(a.width * b.width))
    if {a.tag, b.tag} == {CANONICAL, MICROCANONICAL}:
        can, mic = (a, b) if a.tag == CANONICAL else (b, a)
        lo, hi = mic.support
        integral = (2.0 / can.beta) * (
            math.exp(-0.5 * can.beta * lo) - math.exp(-0.5 * can.beta * hi)
        )
        return math.sqrt(can.beta / (period * period * mic.width)) * integral
    # generic: quadrature over the common support
    lo = max(a.support[0], b.support[0])
    hi = min(a.support[1], b.support[1])
    if not np.isfinite(hi):
        hi = max(energy_cutoff(a.beta or 1.0), energy_cutoff(b.beta or 1.0))
    if hi <= lo:
        return 0.0
    axis = legendre_axis(lo, hi, 24, edges=list(np.linspace(lo, hi, 13)[1:-1]))
    return complex(np.sum(axis.weights * np.conj(a(axis.nodes)) * b(axis.nodes)))


# ---------------------------------------------------------------------------
# Partition function and canonical states
# ---------------------------------------------------------------------------

Region = Optional[Tuple[Tuple[float, float], Tuple[float, float]]]


def _axis_integral(fn, lo, hi, n_per_panel=24, panels=12) -> float:
    axis = legendre_axis(lo, hi, n_per_panel, edges=list(np.linspace(lo, hi, panels + 1)[1:-1]))
    return float(np.sum(axis.weights * fn(axis.nodes)))


def partition_function(model: HamiltonianModel, beta: float, region: Region = None) -> float:
    """Z(beta, Gamma) = Int_Gamma e^{-beta H} dq dp, by quadrature.

    ``region`` is a ((q_lo, q_hi), (p_lo, p_hi)) rectangle; None means the
    full plane, which converges only for the oscillator.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    if region is None:
        if model.kind != HARMONIC:
            raise DivergentIntegralError(
                f"full-plane partition function diverges for {model.kind!r}"
            )
        period = _finite_period(model)
        h_max = energy_cutoff(beta)
        return period * _axis_integral(lambda H: np.exp(-beta * H), 0.0, h_max)
    (q_lo, q_hi), (p_lo, p_hi) = region
    if not (np.isfinite([q_lo, q_hi, p_lo, p_hi]).all()):
        raise DivergentIntegralError("region must be a finite rectangle")
    z_q = _axis_integral(lambda q: np.exp(-beta * model.potential(q)), q_lo, q_hi)
    z_p = _axis_integral(lambda p: np.exp(-beta * model.kinetic(p)), p_lo, p_hi)
    return z_q * z_p


class MeanEnergy(NamedTuple):
    """<H> computed two ways; the pair should agree to ~1e-6 relative."""

    direct: float
    log_derivative: float


def mean_energy(model: HamiltonianModel, beta: float, region: Region = None) -> MeanEnergy:
    """<H> under the canonical ensemble, by quadrature and by -d log Z/d beta."""
    z = partition_function(model, beta, region)
    if region is None:
        period = _finite_period(model)
        h_max = energy_cutoff(beta)
        direct = period * _axis_integral(lambda H: H * np.exp(-beta * H), 0.0, h_max) / z
    else:
        (q_lo, q_hi), (p_lo, p_hi) = region
        z_q = _axis_integral(lambda q: np.exp(-beta * model.potential(q)), q_lo, q_hi)
        z_p = _axis_integral(lambda p: np.exp(-beta * model.kinetic(p)), p_lo, p_hi)
        u_mean = (
            _axis_integral(
                lambda q: model.potential(q) * np.exp(-beta * model.potential(q)), q_lo, q_hi
            )
            / z_q
        )
        k_mean = (
            _axis_integral(
                lambda p: model.kinetic(p) * np.exp(-beta * model.kinetic(p)), p_lo, p_hi
            )
            / z_p
        )
        direct = u_mean + k_mean
    step = 1e-3 * beta
    log_hi = math.log(partition_function(model, beta + step, region))
    log_lo = math.log(partition_function(model, beta - step, region))
    return MeanEnergy(direct, -(log_hi - log_lo) / (2.0 * step))


@dataclass(frozen=True)
class CanonicalState:
    """A (q, p, t)-separable canonical-ensemble amplitude.

    |chi|^2 = e^{-beta H}/Z; the time dependence is the global phase
    e^{-i epsilon t/hbar}, with alpha = epsilon its natural gauge.
    """

    model: HamiltonianModel
    beta: float
    epsilon: float
    z: float
    region: Region = None

    def sample(self, t: float = 0.0, **grid_kwargs) -> "AmplitudeGrid":
        return canonical_state(self.model, self.beta, self.epsilon, t, **grid_kwargs)


def canonical_ensemble(
    model: HamiltonianModel, beta: float, epsilon: float = 0.0, region: Region = None
) -> CanonicalState:
    """The canonical state record, with its partition function evaluated."""
    return CanonicalState(model, beta, epsilon, partition_function(model, beta, region), region)


def canonical_axes(
    model: HamiltonianModel, beta: float, n_tau: int = 256, n_energy: int = 192
) -> Tuple[Axis, Axis]:
    """(tau, H) axes whose energy cut keeps the Boltzmann tail below round-off."""
    lo, hi = tau_bounds(model)
    h_max = energy_cutoff(beta)
    panels = 12
    tau_axis = periodic_uniform_axis(lo, hi, n_tau)
    energy_axis = legendre_axis(
        0.0, h_max, max(4, int(np.ceil(n_energy / panels))),
        edges=list(np.linspace(0.0, h_max, panels + 1)[1:-1]),
    )
    return tau_axis, energy_axis


def canonical_state(
    model: HamiltonianModel,
    beta: float,
    epsilon: float = 0.0,
    t: float = 0.0,
    *,
    axes: Optional[Tuple[Axis, Axis]] = None,
    coords: str = TAUH,
    n_tau: int = 256,
    n_energy: int = 192,
) -> AmplitudeGrid:
    """Sample chi = Z^{-1/2} e^{-beta H/2} e^{-i epsilon t/hbar} on a grid.

    Z is evaluated with the grid's own quadrature, so the sampled state has
    unit norm on its grid; with the default energy cutoff this matches the
    full-plane partition function to better than 1e-8 relative.
    """
    if coords != TAUH and axes is None:
        raise ValueError("(q, p) canonical states need explicit axes")
    if axes is None:
        axes = canonical_axes(model, beta, n_tau, n_energy)
    axis1, axis2 = axes
    template = AmplitudeGrid(
        coords, axis1, axis2, np.zeros((len(axis1), len(axis2)), dtype=complex), time=t
    )
    _, energy = grid_tau_energy_fields(model, template)
    boltzmann = np.exp(-beta * energy)
    z = float((axis1.weights @ boltzmann) @ axis2.weights)
    phase = np.exp(-1j * epsilon * t / model.hbar)
    values = np.sqrt(boltzmann / z) * phase
    return template.with_values(values)


# ---------------------------------------------------------------------------
# Stationary (superposable) states
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StationaryState:
    """f_n(H) e^{i epsilon_n (tau - t)/hbar}: one discrete mode, stored structurally."""

    model: HamiltonianModel
    profile: EnergyProfile
    n: int
    epsilon: float
    time: float = 0.0

    def evaluate(self, tau, energy) -> np.ndarray:
        tau = np.asarray(tau, dtype=float)
        phase = np.exp(1j * self.epsilon * (tau - self.time) / self.model.hbar)
        return self.profile(energy) * phase

    def on_grid(self, grid: AmplitudeGrid) -> AmplitudeGrid:
        """Sample onto an existing grid (its axes and coords are kept)."""
        tau, energy = grid_tau_energy_fields(self.model, grid)
        return grid.with_values(self.evaluate(tau, energy), time=self.time)

    def to_grid(self, axis1: Axis, axis2: Axis, coords: str = TAUH) -> AmplitudeGrid:
        template = AmplitudeGrid(
            coords, axis1, axis2, np.zeros((len(axis1), len(axis2)), dtype=complex),
            time=self.time,
        )
        return self.on_grid(template)

    def at_time(self, t: float) -> "StationaryState":
        return replace(self, time=t)


def stationary_state(
    model: HamiltonianModel,
    profile: EnergyProfile,
    n: int,
    t: float = 0.0,
    epsilon0: float = 0.0,
) -> StationaryState:
    """The n-th orthonormal stationary state, epsilon_n = n*spacing + epsilon0.

    Raises UnboundedTauError for models without a finite tau range, where
    no discrete mode exists.
    """
    spacing = model.mode_spacing()
    return StationaryState(model, profile, int(n), epsilon0 + n * spacing, time=t)
