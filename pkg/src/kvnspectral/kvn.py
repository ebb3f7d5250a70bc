"""Gauged amplitude dynamics: the tilde-Hamiltonian and its checks.

The amplitude obeys i*hbar dchi/dt = Htilde chi with
Htilde = i*hbar {H, .} + alpha(q, p).  In (tau, H) coordinates the bracket
is {H, f} = -df/dtau, evaluated spectrally on periodic uniform tau axes;
on (q, p) grids it is assembled from analytic dH and fourth-order central
differences of chi.  Gauge transformations multiply chi by a phase and
shift alpha by D(phi) with D = d/dt - {H, .}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import (
    GridMismatchError,
    GridTooSmallError,
    InsufficientSlicesError,
    NonRealGaugeError,
)
from .grids import TAUH, AmplitudeGrid, grid_tau_energy_fields
from .models import HamiltonianModel

ZERO = "zero"
CONSTANT = "constant"
CUSTOM = "custom"


@dataclass(frozen=True)
class Gauge:
    """The real energy-valued function alpha entering the tilde-Hamiltonian."""

    kind: str = ZERO
    epsilon: float = 0.0
    samples: Optional[np.ndarray] = None

    @classmethod
    def zero(cls):
        return cls(ZERO)

    @classmethod
    def constant(cls, epsilon: float):
        if epsilon == 0.0:
            return cls(ZERO)
        return cls(CONSTANT, epsilon=float(epsilon))

    @classmethod
    def custom(cls, samples: np.ndarray):
        samples = np.asarray(samples)
        if np.iscomplexobj(samples) and np.any(samples.imag != 0):
            raise NonRealGaugeError("gauge samples must be real")
        return cls(CUSTOM, samples=np.real(samples).astype(float))

    def alpha_on(self, grid: AmplitudeGrid) -> np.ndarray:
        if self.kind == ZERO:
            return np.zeros(grid.shape)
        if self.kind == CONSTANT:
            return np.full(grid.shape, self.epsilon)
        if self.samples is None or self.samples.shape != grid.shape:
            raise GridMismatchError("custom gauge samples do not match the grid")
        return self.samples

    def shifted(self, delta: float) -> "Gauge":
        """alpha - delta, staying in the simplest representation."""
        if self.kind == CUSTOM:
            return Gauge(CUSTOM, samples=self.samples - delta)
        return Gauge.constant((self.epsilon if self.kind == CONSTANT else 0.0) - delta)


PHASE_CONSTANT = "constant"
PHASE_EPSILON_TAU = "epsilon_tau"


@dataclass(frozen=True)
class GaugePhase:
    """A phase function phi with closed-form D(phi).

    ``constant``: phi = phi0, D(phi) = 0.
    ``epsilon_tau``: phi = epsilon*tau, D(phi) = epsilon (D tau = 1 for
    time-independent H).
    """

    kind: str
    value: float

    @classmethod
    def constant(cls, phi0: float):
        return cls(PHASE_CONSTANT, float(phi0))

    @classmethod
    def epsilon_tau(cls, epsilon: float):
        return cls(PHASE_EPSILON_TAU, float(epsilon))

    def phase_on(self, grid: AmplitudeGrid, model: HamiltonianModel) -> np.ndarray:
        if self.kind == PHASE_CONSTANT:
            return np.full(grid.shape, self.value)
        tau, _ = grid_tau_energy_fields(model, grid)
        return self.value * tau

    def d_phi(self) -> float:
        return 0.0 if self.kind == PHASE_CONSTANT else self.value


def _fft_derivative(values: np.ndarray, spacing: float, axis: int) -> np.ndarray:
    """Spectral d/dx along a periodic uniform axis."""
    n = values.shape[axis]
    k = 2.0 * np.pi * np.fft.fftfreq(n, d=spacing)
    if n % 2 == 0:
        k[n // 2] = 0.0  # odd derivative: drop the unsigned Nyquist mode
    shape = [1, 1]
    shape[axis] = n
    return np.fft.ifft(1j * k.reshape(shape) * np.fft.fft(values, axis=axis), axis=axis)


def _central_derivative(values: np.ndarray, spacing: float, axis: int) -> np.ndarray:
    """Fourth-order central differences inside, second-order one-sided at edges."""
    f = np.moveaxis(values, axis, 0)
    n = f.shape[0]
    if n < 5:
        raise GridTooSmallError("need at least 5 nodes along each axis to difference")
    d = np.empty_like(f)
    d[2:-2] = (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12.0 * spacing)
    d[0] = (-3 * f[0] + 4 * f[1] - f[2]) / (2.0 * spacing)
    d[1] = (f[2] - f[0]) / (2.0 * spacing)
    d[-2] = (f[-1] - f[-3]) / (2.0 * spacing)
    d[-1] = (3 * f[-1] - 4 * f[-2] + f[-3]) / (2.0 * spacing)
    return np.moveaxis(d, 0, axis)


def _tau_derivative(grid: AmplitudeGrid) -> np.ndarray:
    axis = grid.axis1
    h = axis.uniform_spacing
    if axis.periodic and h is not None:
        return _fft_derivative(grid.values, h, axis=0)
    return np.gradient(grid.values, axis.nodes, axis=0, edge_order=2)


def apply_tilde_hamiltonian(
    model: HamiltonianModel, gauge: Gauge, chi: AmplitudeGrid
) -> AmplitudeGrid:
    """Htilde chi = i*hbar {H, chi} + alpha chi on the grid of chi.

    Linear in chi; on (tau, H) grids the bracket is -d/dtau (spectral when
    the tau axis is periodic uniform), on (q, p) grids it uses analytic
    gradients of H against finite differences of chi.
    """
    if min(chi.shape) < 8:
        raise GridTooSmallError("tilde-Hamiltonian needs at least an 8x8 grid")
    alpha = gauge.alpha_on(chi)
    hbar = model.hbar
    if chi.coords == TAUH:
        bracket = -_tau_derivative(chi)  # {H, chi} = -dchi/dtau
    else:
        hq = chi.axis1.uniform_spacing
        hp = chi.axis2.uniform_spacing
        if hq is None or hp is None:
            raise GridTooSmallError("(q, p) differencing requires uniform axes")
        q, p = chi.mesh()
        dchi_dq = _central_derivative(chi.values, hq, axis=0)
        dchi_dp = _central_derivative(chi.values, hp, axis=1)
        bracket = model.grad_q(q) * dchi_dp - model.grad_p(p) * dchi_dq
    return chi.with_values(1j * hbar * bracket + alpha * chi.values)


def kvn_residual(
    model: HamiltonianModel, gauge: Gauge, trajectory: Sequence[AmplitudeGrid]
) -> float:
    """Grid L2 norm of i*hbar dchi/dt - Htilde chi at the middle slice.

    The time derivative is a central difference over the neighbouring
    slices, so exact eigenstate trajectories leave an O(dt^2 + h^2)
    residual.
    """
    if len(trajectory) < 3:
        raise InsufficientSlicesError("need at least 3 time slices")
    mid = len(trajectory) // 2
    if mid == len(trajectory) - 1:
        mid -= 1
    before, center, after = trajectory[mid - 1], trajectory[mid], trajectory[mid + 1]
    if not (center.same_axes(before) and center.same_axes(after)):
        raise GridMismatchError("trajectory slices live on different grids")
    dt_lo = center.time - before.time
    dt_hi = after.time - center.time
    if not math.isclose(dt_lo, dt_hi, rel_tol=1e-9):
        raise InsufficientSlicesError("time slices must be uniformly spaced")
    dchi_dt = (after.values - before.values) / (dt_lo + dt_hi)
    applied = apply_tilde_hamiltonian(model, gauge, center)
    resid = 1j * model.hbar * dchi_dt - applied.values
    return float(np.sqrt(np.real(center.integrate(np.abs(resid) ** 2))))


def liouville_residual(
    model: HamiltonianModel, trajectory: Sequence[AmplitudeGrid]
) -> float:
    """Grid L2 norm of d rho/dt + {rho, H} at the middle density slice.

    Pure finite differences: a central stencil in time and a fourth-order
    periodic central stencil along tau ({rho, H} = d rho/dtau).  Slices
    must be densities on a periodic uniform (tau, H) grid.
    """
    if len(trajectory) < 3:
        raise InsufficientSlicesError("need at least 3 time slices")
    mid = len(trajectory) // 2
    if mid == len(trajectory) - 1:
        mid -= 1
    before, center, after = trajectory[mid - 1], trajectory[mid], trajectory[mid + 1]
    if not (center.same_axes(before) and center.same_axes(after)):
        raise GridMismatchError("trajectory slices live on different grids")
    if center.coords != TAUH:
        raise GridMismatchError("the transport residual is evaluated in (tau, H)")
    h = center.axis1.uniform_spacing
    if not center.axis1.periodic or h is None:
        raise GridMismatchError("tau axis must be periodic uniform for the stencil")
    dt_lo = center.time - before.time
    dt_hi = after.time - center.time
    if not math.isclose(dt_lo, dt_hi, rel_tol=1e-9):
        raise InsufficientSlicesError("time slices must be uniformly spaced")
    drho_dt = np.real(after.values - before.values) / (dt_lo + dt_hi)
    f = np.real(center.values)
    drho_dtau = (
        np.roll(f, 2, axis=0)
        - 8.0 * np.roll(f, 1, axis=0)
        + 8.0 * np.roll(f, -1, axis=0)
        - np.roll(f, -2, axis=0)
    ) / (12.0 * h)
    resid = drho_dt + drho_dtau
    return float(np.sqrt(np.real(center.integrate(resid**2))))


def gauge_transform(
    chi: AmplitudeGrid,
    gauge: Gauge,
    phase: GaugePhase,
    model: HamiltonianModel,
) -> Tuple[AmplitudeGrid, Gauge]:
    """(chi, alpha) -> (chi e^{i phi/hbar}, alpha - D phi).

    The density |chi|^2 is untouched; the returned gauge absorbs the
    closed-form D(phi) of the supported phase kinds.
    """
    phi = phase.phase_on(chi, model)
    rotated = chi.with_values(chi.values * np.exp(1j * phi / model.hbar))
    return rotated, gauge.shifted(phase.d_phi())


def hermiticity_defect(
    model: HamiltonianModel,
    gauge: Gauge,
    chi_a: AmplitudeGrid,
    chi_b: AmplitudeGrid,
) -> complex:
    """<a|Htilde b> - <Htilde a|b>.

    Equals i*hbar Int {H, a* b} dOmega, i.e. a pure boundary term: zero
    for amplitudes that are periodic in tau or negligible at the domain
    cuts.
    """
    if not chi_a.same_axes(chi_b):
        raise GridMismatchError("operands live on different grids")
    hb = apply_tilde_hamiltonian(model, gauge, chi_b)
    ha = apply_tilde_hamiltonian(model, gauge, chi_a)
    return chi_a.inner(hb) - ha.inner(chi_b)
