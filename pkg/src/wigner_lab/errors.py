"""Exception types shared across the package."""


class WignerLabError(Exception):
    """Base class for all package-specific errors."""


class UnsupportedOrderError(WignerLabError):
    """Moment order above the implementation ceiling."""


class InfeasibleMomentError(WignerLabError):
    """Requested moments violate a moment inequality."""


class NonHermitianError(WignerLabError):
    """Input matrix is not Hermitian within tolerance."""


class DegenerateSpectrumError(WignerLabError):
    """Operation requires a simple eigenvalue but the spectrum is degenerate."""


class SingularityError(WignerLabError):
    """Linear system is singular or the probed energy sits on the spectrum.

    Carries the offending margin (distance to the spectrum, or a residual
    bound when no eigenvalues are available).
    """

    def __init__(self, message, margin=0.0):
        super().__init__(message)
        self.margin = float(margin)


class HypothesisViolationError(WignerLabError):
    """Experiment preconditions (moment matching, vector constraints) fail."""
