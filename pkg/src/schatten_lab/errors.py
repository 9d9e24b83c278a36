"""Exception types shared across the package."""


class SchattenLabError(Exception):
    """Base class for all package errors."""


class ConvergenceError(SchattenLabError):
    """Eigensolver failed to converge within the sweep cap."""

    def __init__(self, residual: float, sweeps: int):
        self.residual = residual
        self.sweeps = sweeps
        super().__init__(
            f"Jacobi eigensolver did not converge after {sweeps} sweeps "
            f"(off-diagonal residual {residual:.3e})"
        )


class NearSingularError(SchattenLabError):
    """Input is too close to singular for the requested operation."""


class NotPositiveError(SchattenLabError):
    """A matrix required to be positive (definite) is not."""


class InvalidPairError(SchattenLabError):
    """Two inputs that must share structure (e.g. an off-diagonal block) differ."""


class UnstableEstimateError(SchattenLabError):
    """Finite-difference levels disagree too much to trust the estimate."""

    def __init__(self, spread: float, scale: float):
        self.spread = spread
        self.scale = scale
        super().__init__(
            f"Richardson levels disagree by {spread:.3e} (scale {scale:.3e})"
        )


class DimensionMismatchError(SchattenLabError):
    """Operands have incompatible dimensions."""


class DimensionTooLargeError(SchattenLabError):
    """Input dimension exceeds a hard cap (e.g. 2^n sign-matrix enumeration)."""


class ConfigError(SchattenLabError):
    """Invalid run configuration (CLI exit code 2)."""
