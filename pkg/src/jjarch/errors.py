"""Exception and warning types shared across the package."""


class JJArchError(Exception):
    """Base class for all package errors."""


class NonHermitian(JJArchError, ValueError):
    def __init__(self, max_asymmetry):
        self.max_asymmetry = float(max_asymmetry)
        super().__init__(f"matrix is not Hermitian (max |H - H^dagger| = {self.max_asymmetry:.3e})")


class GridTooCoarse(JJArchError, ValueError):
    pass


class NoWell(JJArchError, ValueError):
    pass


class SingleWell(JJArchError, ValueError):
    pass


class OutOfLinearRange(JJArchError, ValueError):
    pass


class GroundLevelCrossing(JJArchError, RuntimeError):
    pass


class CutoffTooSmall(JJArchError, RuntimeError):
    pass


class BoundsInfeasible(JJArchError, ValueError):
    pass


class LevelsUnbound(UserWarning):
    """Requested levels lie above the barrier top (quasi-bound treatment)."""


class RegimeViolation(UserWarning):
    """Parameters fall outside the regime where an effective model holds."""


class LinearRangeWarning(UserWarning):
    pass


class SmallDenominator(UserWarning):
    pass
