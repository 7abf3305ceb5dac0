"""Exception types shared across the package."""


class ShapeError(ValueError):
    """Shape of a tensor or vector does not match what an operation needs."""


class AsymmetricTensorError(ValueError):
    """A symmetric tensor was required but the input fails the symmetry check."""


class DegenerateTensorError(RuntimeError):
    """The stationary-point set appears to be a continuum (or otherwise
    degenerate), so a finite list of isolated points cannot be reported."""
