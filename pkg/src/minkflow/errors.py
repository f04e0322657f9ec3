"""Exception types shared across the package."""


class MinkflowError(Exception):
    """Base class for all package-specific errors."""


class OddHarmonic(MinkflowError):
    """An indicatrix harmonic breaks central symmetry (odd index, or index < 2)."""


class NonPositiveRadius(MinkflowError):
    """The radial function is not strictly positive everywhere."""


class NonConvex(MinkflowError):
    """The indicatrix boundary fails the strict-convexity curvature condition."""


class DegenerateTangent(MinkflowError):
    """A curve sample has a numerically vanishing tangent vector."""


class InvalidInitialCurve(MinkflowError):
    """Flow initial data is negatively oriented or encloses no area."""


class NoZero(MinkflowError):
    """Wirtinger oracle input does not vanish at the declared grid index."""


class InsufficientData(MinkflowError):
    """Too few usable samples for a fit."""


class ConfigError(MinkflowError):
    """Scenario config failed validation. Carries every issue found."""

    def __init__(self, issues):
        self.issues = list(issues)
        super().__init__("; ".join(str(issue) for issue in self.issues))
