"""Exception types shared across the package."""


class CVCloneError(ValueError):
    """Base class for all domain errors raised by this package."""


class DimensionError(CVCloneError):
    """Mode counts or array shapes do not match."""


class InvalidState(CVCloneError):
    """A Gaussian state violates a structural or physical requirement."""


class InvalidChannel(CVCloneError):
    """A Gaussian channel violates symmetry or complete positivity."""


class InvalidGain(CVCloneError):
    """Amplifier gain below 1."""


class InvalidShape(CVCloneError):
    """Inconsistent input/output copy counts for a cloner."""


class InvalidNoise(CVCloneError):
    """Noise variance outside its allowed domain."""


class InvalidVariance(CVCloneError):
    """Nonpositive variance passed to an information formula."""


class NoSqueezing(CVCloneError):
    """Squeezed-quadrature variance outside (0, 1/2)."""


class GridTooSmall(CVCloneError):
    """Wavefunction support reaches the grid boundary."""
