"""Exception types shared across the package.

Every numerical failure mode has its own class so that callers (and the CLI
exit-code mapping) can react without string matching.
"""


class NsxError(Exception):
    """Base class for all package errors."""


class ConfigError(NsxError):
    """Invalid problem configuration (CLI exit code 2)."""


class NumericalError(NsxError):
    """Base class for runtime numerical failures (CLI exit code 3)."""


# --- mpcore ---------------------------------------------------------------

class BranchAmbiguity(NumericalError):
    """A continuation step was too large to disambiguate the square-root sign."""


class ZeroOnPath(NumericalError):
    """The radicand fell below tolerance at a continuation sample."""


class NoConvergence(NumericalError):
    """Quadrature refinements failed to agree within tolerance."""


# --- germs ----------------------------------------------------------------

class UnsupportedKind(ConfigError):
    """Germ kind has no series generator / evaluator."""


class OrientationMismatch(NumericalError):
    """Arc orientations violate the all-toward-or-all-away rule at a shared end."""


class TooCloseToContour(NumericalError):
    """Evaluation point is within the configured guard distance of the contour."""


# --- pade -----------------------------------------------------------------

class InsufficientMoments(ConfigError):
    """Fewer moments supplied than the requested index needs."""


class PrecisionLoss(NumericalError):
    """Residual of a linear solve exceeded tolerance at the current precision."""


class QuadratureFailure(NumericalError):
    """Propagated quadrature failure."""


# --- contour ----------------------------------------------------------------

class NewtonDivergence(NumericalError):
    """The B-polynomial Newton iteration did not converge."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class GPViolation(NumericalError):
    """Degenerate constellation: a zero of B collides with A or has even order on Delta."""

    def __init__(self, message, contour=None):
        super().__init__(message)
        self.contour = contour


class RecurrentTrajectory(NumericalError):
    """A traced trajectory exceeded the maximum length without terminating."""


class PathCrossesContour(NumericalError):
    """No integration path avoiding the contour was found."""


class OnCut(NumericalError):
    """Evaluation point lies on the cut system of the conformal map."""


# --- surface ----------------------------------------------------------------

class SingularNormalization(NumericalError):
    """The a-period matrix of the raw differential basis is numerically singular."""


class PathNotFound(PathCrossesContour):
    """No admissible path on the cut surface."""


class InversionFailed(NumericalError):
    """Jacobi inversion found fewer roots than the genus at max refinement."""


class GenusCapExceeded(ConfigError):
    """The Szego pipeline is implemented for genus <= 2 only."""


# --- asymptotics -------------------------------------------------------------

class TooCloseToDivisor(NumericalError):
    """Prediction point inside an epsilon-ball of the divisor projection."""


class UnderflowMasked(NumericalError):
    """Errors fell below the precision floor; raise the working precision."""
