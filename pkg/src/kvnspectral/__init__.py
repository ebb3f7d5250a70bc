"""Spectral solution of the 1D Liouville equation via probability amplitudes.

The density rho is carried by a complex amplitude chi with |chi|^2 = rho.
In dynamical-time/energy coordinates the evolution generator has a
discrete orthonormal eigenbasis on systems with a finite tau range; this
package builds that basis, expands initial distributions over it, evolves
them exactly, and verifies every step against independent oracles.
"""

from .ensembles import (
    CanonicalState,
    EnergyProfile,
    MeanEnergy,
    StationaryState,
    canonical_ensemble,
    canonical_profile,
    canonical_state,
    energy_cutoff,
    mean_energy,
    microcanonical_profile,
    partition_function,
    stationary_state,
)
from .errors import (
    DegenerateStateError,
    DivergentIntegralError,
    GridMismatchError,
    GridTooSmallError,
    InsufficientSlicesError,
    KvnError,
    NegativeEnergyError,
    NonRealGaugeError,
    OriginSingularError,
    SpecOutOfRangeError,
    UnboundedTauError,
    UnderResolvedError,
    UnderResolvedWarning,
    ZeroMomentumError,
)
from .examples import (
    BoxStateSpec,
    ShiftedCanonicalSpec,
    UncertaintyReport,
    box_amplitude,
    box_coefficients,
    box_parseval_bound,
    density_error_vs_oracle,
    oracle_density,
    random_spectral_state,
    shifted_canonical_amplitude,
    shifted_canonical_bound,
    shifted_canonical_coefficients,
    uncertainty_product,
)
from .grids import (
    AmplitudeGrid,
    Axis,
    legendre_axis,
    periodic_uniform_axis,
    position_momentum_grid,
    sqrt_energy_axis,
    tau_energy_grid,
    trapezoid_axis,
)
from .kvn import (
    Gauge,
    GaugePhase,
    apply_tilde_hamiltonian,
    gauge_transform,
    hermiticity_defect,
    kvn_residual,
    liouville_residual,
)
from .models import (
    HamiltonianModel,
    PhaseSample,
    TauEnergyPoint,
    dynamical_time,
    flow,
    inverse_map,
    tau_bounds,
    wrap_tau,
)
from .spectral import (
    SpectralExpansion,
    auto_truncation,
    evolve,
    expand,
    inner_product,
    reconstruct_amplitude,
    reconstruct_density,
    select_spectrum,
)

__version__ = "0.1.0"
