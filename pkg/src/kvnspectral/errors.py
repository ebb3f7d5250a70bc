"""Exception and warning types shared across the package."""


class KvnError(Exception):
    """Base class for all kvnspectral errors."""


class OriginSingularError(KvnError):
    """Dynamical time is undefined at the phase-space origin of the oscillator."""


class ZeroMomentumError(KvnError):
    """Free-particle coordinates degenerate at p = 0."""


class NegativeEnergyError(KvnError):
    """Requested an oscillator phase point with H < 0."""


class UnboundedTauError(KvnError):
    """Operation requires a finite dynamical-time range."""


class DivergentIntegralError(KvnError):
    """Phase-space integral does not converge on the requested region."""


class GridTooSmallError(KvnError):
    """Grid lacks the interior margin needed for differencing."""


class NonRealGaugeError(KvnError):
    """Gauge samples must be real-valued."""


class InsufficientSlicesError(KvnError):
    """Time-derivative stencil needs at least three trajectory slices."""


class GridMismatchError(KvnError):
    """Operands live on different grids."""


class UnderResolvedError(KvnError):
    """Quadrature nodes cannot resolve the requested mode window."""


class SpecOutOfRangeError(KvnError):
    """Worked-example specification violates its domain constraints."""


class DegenerateStateError(KvnError):
    """State carries no probability mass to take statistics over."""


class UnderResolvedWarning(UserWarning):
    """Node count is below the recommended density for the mode span."""
