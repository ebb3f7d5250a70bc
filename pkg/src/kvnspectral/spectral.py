"""Discrete orthonormal mode basis and spectral evolution.

On a finite tau range the stationary states f(H) e^{i epsilon (tau-t)/hbar}
are mutually orthogonal only on the lattice
epsilon_n = 2*pi*hbar*n/(tau_hi - tau_lo) + epsilon_0.  Expanding an
initial amplitude over that lattice reduces time evolution to phase
rotation of the coefficients; the density returns as the absolute square
of the rebuilt sum.

Expansions here use one shared energy profile across the window (the
worked examples' setting); per-mode profiles would additionally need
mutual orthonormality over H, which a single profile gives for free.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from typing import Optional, Union

import numpy as np

from .ensembles import (
    CANONICAL,
    MICROCANONICAL,
    EnergyProfile,
    StationaryState,
    canonical_profile,
    microcanonical_profile,
    profile_overlap,
)
from .errors import GridMismatchError, UnderResolvedError, UnderResolvedWarning
from .grids import TAUH, AmplitudeGrid, grid_tau_energy_fields
from .models import HamiltonianModel, tau_bounds

OrState = Union[AmplitudeGrid, StationaryState]


def select_spectrum(model: HamiltonianModel, epsilon0: float, n_max: int) -> np.ndarray:
    """Eigenvalues epsilon_n = n*spacing + epsilon0 for n in [-n_max, n_max].

    The spacing is 2*pi*hbar over the tau-range length (hbar*omega for the
    oscillator, computed exactly).  Raises UnboundedTauError when the model
    has no finite tau range.
    """
    spacing = model.mode_spacing()
    return epsilon0 + spacing * np.arange(-n_max, n_max + 1, dtype=float)


def _tau_integral(model, eps_a, time_a, eps_b, time_b) -> complex:
    """Int e^{i(eps_b(tau-t_b) - eps_a(tau-t_a))/hbar} dtau, closed form."""
    lo, hi = tau_bounds(model)
    hbar = model.hbar
    k = (eps_b - eps_a) / hbar
    offset = np.exp(-1j * (eps_b * time_b - eps_a * time_a) / hbar)
    if k == 0.0:
        return complex(offset * (hi - lo))
    # lattice pairs: k*(hi-lo) is a multiple of 2*pi and the integral vanishes
    cycles = k * (hi - lo) / (2.0 * np.pi)
    if abs(cycles - round(cycles)) < 1e-12 and round(cycles) != 0:
        return 0.0 + 0.0j
    return complex(offset * (np.exp(1j * k * hi) - np.exp(1j * k * lo)) / (1j * k))


def inner_product(chi_a: OrState, chi_b: OrState) -> complex:
    """<chi_a|chi_b> with chi_a conjugated.

    Stationary-state pairs use the closed-form tau integral (exactly 0 or
    1 on the lattice) times the profile overlap; grids use their own
    quadrature; mixed pairs sample the structural state onto the grid.
    """
    if isinstance(chi_a, StationaryState) and isinstance(chi_b, StationaryState):
        if chi_a.model != chi_b.model:
            raise GridMismatchError("states belong to different models")
        if (
            chi_a.profile == chi_b.profile
            and chi_a.epsilon == chi_b.epsilon
            and chi_a.time == chi_b.time
        ):
            return 1.0 + 0.0j  # normalized by construction
        tau_part = _tau_integral(
            chi_a.model, chi_a.epsilon, chi_a.time, chi_b.epsilon, chi_b.time
        )
        if tau_part == 0.0:
            return 0.0 + 0.0j
        return complex(profile_overlap(chi_a.model, chi_a.profile, chi_b.profile) * tau_part)
    if isinstance(chi_a, StationaryState):
        _check_resolution(chi_b, abs(chi_a.n), hard=False)
        return chi_a.on_grid(chi_b).inner(chi_b)
    if isinstance(chi_b, StationaryState):
        _check_resolution(chi_a, abs(chi_b.n), hard=False)
        return chi_a.inner(chi_b.on_grid(chi_a))
    return chi_a.inner(chi_b)


def _check_resolution(grid: AmplitudeGrid, n_max: int, hard: bool = True):
    """Nyquist guard for the tau axis against mode |n| <= n_max."""
    if grid.coords != TAUH or n_max == 0:
        return
    m = len(grid.axis1)
    if grid.axis1.periodic:
        if m <= 2 * n_max:
            if hard:
                raise UnderResolvedError(
                    f"{m} tau nodes alias modes up to |n| = {n_max}"
                )
            warnings.warn(
                f"{m} tau nodes alias modes up to |n| = {n_max}", UnderResolvedWarning
            )
        elif m < 8 * n_max:
            warnings.warn(
                f"{m} tau nodes give fewer than 8 per oscillation of mode {n_max}",
                UnderResolvedWarning,
            )
    else:
        if m <= 2 * n_max:
            if hard:
                raise UnderResolvedError(
                    f"{m} tau nodes cannot resolve modes up to |n| = {n_max}"
                )
            warnings.warn(
                f"{m} tau nodes cannot resolve modes up to |n| = {n_max}",
                UnderResolvedWarning,
            )
        elif m < 3 * n_max:
            warnings.warn(
                f"{m} panel nodes are marginal for modes up to |n| = {n_max}",
                UnderResolvedWarning,
            )


@dataclass(frozen=True)
class SpectralExpansion:
    """Coefficients c_n over the mode window n in [-N, N].

    ``time`` is the reference time of the coefficients; evolution keeps
    them fixed and shifts the reconstruction phases.
    """

    model: HamiltonianModel
    profile: EnergyProfile
    epsilon0: float
    coefficients: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        if self.coefficients.ndim != 1 or self.coefficients.size % 2 != 1:
            raise ValueError("coefficients must cover a symmetric window -N..N")

    @property
    def truncation(self) -> int:
        return (self.coefficients.size - 1) // 2

    @property
    def mode_numbers(self) -> np.ndarray:
        n = self.truncation
        return np.arange(-n, n + 1)

    @property
    def epsilons(self) -> np.ndarray:
        return self.epsilon0 + self.model.mode_spacing() * self.mode_numbers

    @property
    def completeness(self) -> float:
        return float(np.sum(np.abs(self.coefficients) ** 2))

    def coefficient(self, n: int) -> complex:
        if abs(n) > self.truncation:
            return 0.0 + 0.0j
        return complex(self.coefficients[n + self.truncation])

    def to_json_dict(self) -> dict:
        m = self.model
        return {
            "model": {
                "kind": m.kind,
                "m": m.m,
                "omega": m.omega,
                "force": m.force,
                "hbar": m.hbar,
            },
            "epsilon0": self.epsilon0,
            "N": self.truncation,
            "profile": {"tag": self.profile.tag, **self.profile.params()},
            "coefficients": [
                {"n": int(n), "re": float(c.real), "im": float(c.imag)}
                for n, c in zip(self.mode_numbers, self.coefficients)
            ],
            "completeness": self.completeness,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "SpectralExpansion":
        md = data["model"]
        model = HamiltonianModel(
            md["kind"], m=md["m"], omega=md.get("omega"),
            force=md.get("force"), hbar=md.get("hbar", 1.0),
        )
        pd = data["profile"]
        if pd["tag"] == CANONICAL:
            profile = canonical_profile(model, pd["beta"])
        elif pd["tag"] == MICROCANONICAL:
            profile = microcanonical_profile(model, pd["center"], pd["width"])
        else:
            raise ValueError("custom profiles cannot be rebuilt from JSON")
        n = data["N"]
        coeff = np.zeros(2 * n + 1, dtype=complex)
        for entry in data["coefficients"]:
            coeff[entry["n"] + n] = entry["re"] + 1j * entry["im"]
        return cls(model, profile, data["epsilon0"], coeff, time=data.get("time", 0.0))


def expand(
    initial: AmplitudeGrid,
    profile: EnergyProfile,
    n_max: int,
    epsilon0: float = 0.0,
    *,
    model: Optional[HamiltonianModel] = None,
) -> SpectralExpansion:
    """Project an initial amplitude on the discrete basis: c_n = <chi_n|chi>.

    The grid must be in (tau, H) coordinates and resolve mode n_max along
    tau.  Coefficients are taken at the grid's own time stamp.
    """
    if model is None:
        raise ValueError("expand needs the model that defines the basis")
    if initial.coords != TAUH:
        raise GridMismatchError("expansion works on (tau, H) grids")
    _check_resolution(initial, n_max, hard=True)
    eps = select_spectrum(model, epsilon0, n_max)
    tau = initial.axis1.nodes
    f_h = profile(initial.axis2.nodes)
    # contract H first: v(tau) = sum_j w_j conj(f_j) chi(tau, j)
    v = initial.values @ (initial.axis2.weights * np.conj(f_h))
    phases = np.exp(
        -1j * np.outer(eps, tau - initial.time) / model.hbar
    )
    coeff = phases @ (initial.axis1.weights * v)
    return SpectralExpansion(model, profile, epsilon0, coeff, time=initial.time)


def evolve(expansion: SpectralExpansion, t: float) -> SpectralExpansion:
    """Advance the expansion by t.

    Coefficients are untouched (evolution is exactly unitary); only the
    reference time moves, entering reconstruction as e^{-i epsilon_n t/hbar}.
    """
    return replace(expansion, time=expansion.time + t)


def auto_truncation(
    initial: AmplitudeGrid,
    profile: EnergyProfile,
    epsilon0: float = 0.0,
    *,
    model: HamiltonianModel,
    start: int = 8,
    limit: int = 2048,
    gain_tol: float = 1e-4,
) -> SpectralExpansion:
    """Grow the window by doubling until the completeness gain drops below tol."""
    n = start
    current = expand(initial, profile, n, epsilon0, model=model)
    while 2 * n <= limit:
        grown = expand(initial, profile, 2 * n, epsilon0, model=model)
        if grown.completeness - current.completeness < gain_tol:
            return grown
        current, n = grown, 2 * n
    return current


def reconstruct_amplitude(
    expansion: SpectralExpansion, t: float, grid: AmplitudeGrid
) -> np.ndarray:
    """chi(tau, H, time+t) = sum_n c_n f(H) e^{i epsilon_n (tau - time - t)/hbar}."""
    model = expansion.model
    _check_resolution(grid, expansion.truncation, hard=True)
    tau, energy = grid_tau_energy_fields(model, grid)
    x = tau - (expansion.time + t)
    spacing = model.mode_spacing()
    z = np.exp(1j * spacing * x / model.hbar)
    acc = np.zeros_like(z, dtype=complex)
    for c in expansion.coefficients[::-1]:
        acc = acc * z + c
    n = expansion.truncation
    acc = acc * z ** (-n) * np.exp(1j * expansion.epsilon0 * x / model.hbar)
    if grid.coords == TAUH:
        f_h = expansion.profile(grid.axis2.nodes)
        return acc * f_h[np.newaxis, :]
    return acc * expansion.profile(energy)


def reconstruct_density(
    expansion: SpectralExpansion, t: float, grid: AmplitudeGrid
) -> np.ndarray:
    """Liouville density |chi(t)|^2 on the grid nodes.

    Computed as the absolute square of the complex mode sum, hence
    nonnegative by construction; it integrates to the completeness sum on
    grids that resolve the window.
    """
    amp = reconstruct_amplitude(expansion, t, grid)
    return np.abs(amp) ** 2
