"""Exception types shared across the package.

Each error carries a short ``name`` that the CLI prints on stderr when a
run fails for a physics/algebra reason (exit code 1, as opposed to usage
errors which exit 2).
"""


class DomainError(Exception):
    name = "domain-error"


class FrequencyMismatchError(DomainError):
    """Two Fourier series with different fundamental frequencies were combined."""

    name = "frequency-mismatch"


class DisconnectedGraphError(DomainError):
    """Observed line set does not connect all levels; term values are
    determined only per connected component."""

    name = "disconnected-graph"


class InvalidLevelError(DomainError):
    """Principal level must be a positive integer."""

    name = "invalid-level"


class JumpRangeError(DomainError):
    """Overtone jump k must satisfy 1 <= |k| < m."""

    name = "jump-out-of-range"


class NonOscillatoryError(DomainError):
    """No closed orbit at the requested energy (below the minimum, above a
    separatrix, or no turning points found)."""

    name = "non-oscillatory"


class InvalidStepError(DomainError):
    """A step size (dt, dI, finite-difference h) must be positive."""

    name = "invalid-step"


class UnknownObservableError(DomainError):
    name = "unknown-observable"


class PotentialSpecError(DomainError):
    """Malformed ``family:key=value,...`` potential string."""

    name = "potential-spec"


class BandError(DomainError):
    """Band width incompatible with the matrix size (no interior block)."""

    name = "band-exceeds-size"


class GridMismatchError(DomainError):
    """Matrices built on different action grids cannot be combined."""

    name = "grid-mismatch"
