"""Exception types raised across the package."""


class GeoplanError(Exception):
    """Base class for all geoplan errors."""


class NonSkewInput(GeoplanError):
    """Matrix handed to vee() is not skew-symmetric within tolerance."""


class AntipodalSingularity(GeoplanError):
    """Rotation at or beyond the tr(R) = -1 boundary where the log map fails."""


class TooFarFromGroup(GeoplanError):
    """Matrix is too far from SO(3) for the polar correction to be trusted."""


class NotHorizontal(GeoplanError):
    """Algebra vector has a vertical (stabilizer) component where none is allowed."""


class FiberDegenerate(GeoplanError):
    """Fiber-distance minimizer is not isolated; no well-defined representative."""


class AntipodalLiftAmbiguity(GeoplanError):
    """Sphere point is antipodal to the base point and no lift hint was given."""


class NonFiniteState(GeoplanError):
    """Integration produced NaN or Inf state components."""


class NoConvergence(GeoplanError):
    """Shooting iterations exhausted without meeting the residual tolerance.

    Carries the best iterate found so far in ``best`` (a PlannedTrajectory,
    possibly None) and a ``diagnostics`` dict.
    """

    def __init__(self, message, best=None, diagnostics=None):
        super().__init__(message)
        self.best = best
        self.diagnostics = diagnostics or {}


class HomotopyStall(GeoplanError):
    """A potential-continuation stage failed to converge even at maximum damping."""

    def __init__(self, message, stage=None, tau=None, best=None, diagnostics=None):
        super().__init__(message)
        self.stage = stage
        self.tau = tau
        self.best = best
        self.diagnostics = diagnostics or {}


class ParseError(GeoplanError):
    """Scenario document is not syntactically valid."""


class ValidationError(GeoplanError):
    """Scenario or problem data violates a structural invariant."""


class IoError(GeoplanError):
    """Trajectory output could not be written; message includes the path."""
