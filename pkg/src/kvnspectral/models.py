"""1D separable Hamiltonians and their dynamical-time coordinates.

Each supported system H(q, p) = K(p) + U(q) comes with a closed-form
phase-space function tau that is canonically conjugate to the energy,
{tau, H} = 1, plus the inverse map and the exact Hamiltonian flow.  For
the harmonic oscillator, omega*tau is the clockwise angle from the p-axis,
so tau lives on the half-open interval (-pi/omega, pi/omega] and time
evolution is a rigid shift of tau.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

import numpy as np

from .errors import (
    NegativeEnergyError,
    OriginSingularError,
    UnboundedTauError,
    ZeroMomentumError,
)

HARMONIC = "harmonic"
FREE_PARTICLE = "free"
LINEAR_POTENTIAL = "linear"

_KINDS = (HARMONIC, FREE_PARTICLE, LINEAR_POTENTIAL)


class PhaseSample(NamedTuple):
    """A point (or array of points) in (q, p) coordinates."""

    q: np.ndarray
    p: np.ndarray


class TauEnergyPoint(NamedTuple):
    """A point (or array of points) in (tau, H) coordinates."""

    tau: np.ndarray
    energy: np.ndarray


@dataclass(frozen=True)
class HamiltonianModel:
    """A 1D Hamiltonian H = K(p) + U(q) with its coordinate data.

    Parameters
    ----------
    kind : str
        One of ``"harmonic"``, ``"free"``, ``"linear"``.
    m : float
        Particle mass, > 0.
    omega : float, optional
        Angular frequency (harmonic oscillator only), > 0.
    force : float, optional
        Constant force (linear potential only), != 0.
    hbar : float
        The action constant entering the amplitude equations.  Its value
        only sets units; default 1.
    phase_bounds : tuple, optional
        ``((q_lo, q_hi), (p_lo, p_hi))`` rectangle, or None for the full
        plane.
    """

    kind: str
    m: float = 1.0
    omega: Optional[float] = None
    force: Optional[float] = None
    hbar: float = 1.0
    phase_bounds: Optional[Tuple[Tuple[float, float], Tuple[float, float]]] = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown Hamiltonian kind {self.kind!r}")
        if not (self.m > 0 and np.isfinite(self.m)):
            raise ValueError("mass must be positive and finite")
        if not (self.hbar > 0 and np.isfinite(self.hbar)):
            raise ValueError("hbar must be positive and finite")
        if self.kind == HARMONIC:
            if self.omega is None or not (self.omega > 0 and np.isfinite(self.omega)):
                raise ValueError("harmonic oscillator needs omega > 0")
        if self.kind == LINEAR_POTENTIAL:
            if self.force is None or self.force == 0 or not np.isfinite(self.force):
                raise ValueError("linear potential needs a nonzero force")

    # -- constructors ---------------------------------------------------

    @classmethod
    def harmonic(cls, m=1.0, omega=1.0, hbar=1.0, phase_bounds=None):
        return cls(HARMONIC, m=m, omega=omega, hbar=hbar, phase_bounds=phase_bounds)

    @classmethod
    def free_particle(cls, m=1.0, hbar=1.0, phase_bounds=None):
        return cls(FREE_PARTICLE, m=m, hbar=hbar, phase_bounds=phase_bounds)

    @classmethod
    def linear_potential(cls, m=1.0, force=1.0, hbar=1.0, phase_bounds=None):
        return cls(LINEAR_POTENTIAL, m=m, force=force, hbar=hbar, phase_bounds=phase_bounds)

    # -- energy pieces --------------------------------------------------

    def kinetic(self, p):
        return np.asarray(p) ** 2 / (2.0 * self.m)

    def potential(self, q):
        q = np.asarray(q)
        if self.kind == HARMONIC:
            return 0.5 * self.m * self.omega**2 * q**2
        if self.kind == LINEAR_POTENTIAL:
            return -self.force * q
        return np.zeros_like(q, dtype=float)

    def hamiltonian(self, q, p):
        return self.kinetic(p) + self.potential(q)

    def grad_q(self, q):
        """dH/dq, analytic."""
        q = np.asarray(q, dtype=float)
        if self.kind == HARMONIC:
            return self.m * self.omega**2 * q
        if self.kind == LINEAR_POTENTIAL:
            return np.full_like(q, -self.force)
        return np.zeros_like(q)

    def grad_p(self, p):
        """dH/dp, analytic."""
        return np.asarray(p, dtype=float) / self.m

    # -- dynamical-time bookkeeping --------------------------------------

    @property
    def tau_period(self) -> Optional[float]:
        """Length of the tau range, or None when tau is unbounded."""
        if self.kind == HARMONIC:
            return 2.0 * np.pi / self.omega
        return None

    def mode_spacing(self) -> float:
        """Eigenvalue spacing 2*pi*hbar / (tau_hi - tau_lo).

        The oscillator spacing is reported analytically as hbar*omega so
        downstream spectra are exact in floating point.
        """
        if self.kind == HARMONIC:
            return self.hbar * self.omega
        raise UnboundedTauError(
            f"{self.kind!r} model has unbounded dynamical time; no discrete spectrum"
        )


def tau_bounds(model: HamiltonianModel) -> Optional[Tuple[float, float]]:
    """Return (tau_lo, tau_hi), or None when tau is unbounded.

    The oscillator covers (-pi/omega, pi/omega]; the free particle and the
    linear potential have tau ranging over the whole real line.
    """
    if model.kind == HARMONIC:
        return (-np.pi / model.omega, np.pi / model.omega)
    return None


def dynamical_time(model: HamiltonianModel, q, p) -> TauEnergyPoint:
    """Map phase points to (tau, H).

    For the oscillator, tau = atan2(m*omega*q, p)/omega: the three-branch
    arctangent whose range (-pi/omega, pi/omega] tiles the plane so that
    (q, p) and (tau, H) integrals agree.  Points exactly on the negative-p
    half-axis get tau = pi/omega; the boundary p = 0 maps to
    +-pi/(2*omega) by continuity from p > 0.

    Raises
    ------
    OriginSingularError
        Oscillator at q = p = 0, where tau is undefined.
    ZeroMomentumError
        Free particle at p = 0.
    """
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    energy = model.hamiltonian(q, p)
    if model.kind == HARMONIC:
        if np.any((q == 0) & (p == 0)):
            raise OriginSingularError("tau is undefined at the oscillator origin")
        w = model.omega
        tau = np.arctan2(model.m * w * q, p) / w
        # atan2 can return -pi for q = -0.0; fold onto the +pi branch
        tau = np.where(tau <= -np.pi / w, tau + 2.0 * np.pi / w, tau)
        return TauEnergyPoint(tau, energy)
    if model.kind == FREE_PARTICLE:
        if np.any(p == 0):
            raise ZeroMomentumError("free-particle tau diverges at p = 0")
        return TauEnergyPoint(model.m * q / p, energy)
    # linear potential
    return TauEnergyPoint(p / model.force, energy)


def inverse_map(model: HamiltonianModel, tau, energy) -> PhaseSample:
    """Map (tau, H) back to phase space.

    Oscillator: q = sqrt(2mH) sin(omega tau)/(m omega),
    p = sqrt(2mH) cos(omega tau).  The free particle keeps the positive
    momentum branch (H fixes only |p|), so dynamical_time(inverse_map(.))
    is the identity.

    Raises
    ------
    NegativeEnergyError
        Oscillator with H < 0.
    ZeroMomentumError
        Free particle with H <= 0.
    """
    tau = np.asarray(tau, dtype=float)
    energy = np.asarray(energy, dtype=float)
    if model.kind == HARMONIC:
        if np.any(energy < 0):
            raise NegativeEnergyError("oscillator energies are nonnegative")
        amp = np.sqrt(2.0 * model.m * energy)
        w = model.omega
        return PhaseSample(amp * np.sin(w * tau) / (model.m * w), amp * np.cos(w * tau))
    if model.kind == FREE_PARTICLE:
        if np.any(energy <= 0):
            raise ZeroMomentumError("free-particle energies are positive")
        p = np.sqrt(2.0 * model.m * energy)
        return PhaseSample(tau * p / model.m, p)
    # linear potential: tau fixes p, H then fixes q
    p = model.force * tau
    q = (p**2 / (2.0 * model.m) - energy) / model.force
    return PhaseSample(q, p)


def flow(model: HamiltonianModel, q, p, t) -> PhaseSample:
    """Exact Hamiltonian flow of (q, p) over time t (closed form per kind)."""
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    if model.kind == HARMONIC:
        w = model.omega
        c, s = np.cos(w * t), np.sin(w * t)
        q_t = q * c + p * s / (model.m * w)
        p_t = p * c - model.m * w * q * s
        return PhaseSample(q_t, p_t)
    if model.kind == FREE_PARTICLE:
        return PhaseSample(q + p * t / model.m, p)
    # linear potential: constant force
    q_t = q + p * t / model.m + model.force * t**2 / (2.0 * model.m)
    p_t = p + model.force * t
    return PhaseSample(q_t, p_t)


def wrap_tau(model: HamiltonianModel, tau):
    """Fold tau into the canonical range (half-open on the left).

    No-op for models with unbounded tau.
    """
    bounds = tau_bounds(model)
    if bounds is None:
        return np.asarray(tau, dtype=float)
    lo, hi = bounds
    period = hi - lo
    wrapped = (np.asarray(tau, dtype=float) - lo) % period + lo
    return np.where(wrapped <= lo, wrapped + period, wrapped)
