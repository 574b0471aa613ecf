"""Exception hierarchy for the opfeyn package."""


class OpfeynError(Exception):
    """Base class for all package errors."""


# ---------------------------------------------------------------------------
# scale pair / domain
# ---------------------------------------------------------------------------

class NonPositiveVariance(OpfeynError):
    """The variance function fails to increase at some grid node."""


class NonzeroOrigin(OpfeynError):
    """Drift or variance does not vanish at t = 0 within tolerance."""


class OutOfDomain(OpfeynError):
    """A time argument lies outside [0, T]."""


# ---------------------------------------------------------------------------
# directions in the reproducing-kernel space
# ---------------------------------------------------------------------------

class MismatchedScalePair(OpfeynError):
    """Two elements built over different scale pairs were combined."""


class ZeroDirection(OpfeynError):
    """An operation required a direction with positive norm."""


# ---------------------------------------------------------------------------
# path sampling
# ---------------------------------------------------------------------------

class InvalidGrid(OpfeynError):
    """A sampling grid is empty, unordered, or otherwise unusable."""


class GridMismatch(OpfeynError):
    """A path and a direction do not share the same scale pair."""


class NotOrthonormal(OpfeynError):
    """Cylinder directions fail the orthonormality tolerance."""


# ---------------------------------------------------------------------------
# spectral measures / functionals
# ---------------------------------------------------------------------------

class MeasureUnderflow(OpfeynError):
    """A truncated density discards more mass than the tolerance allows."""


class UnsupportedVariant(OpfeynError):
    """The operation is not defined for this measure variant."""


class UnknownExample(OpfeynError):
    """Unrecognized gallery name."""


# ---------------------------------------------------------------------------
# kernel parameters
# ---------------------------------------------------------------------------

class ZeroLambda(OpfeynError):
    """The kernel parameter must be nonzero."""


class ArgOutOfRange(OpfeynError):
    """The kernel parameter lies outside the admissible half plane."""


# ---------------------------------------------------------------------------
# operator engine
# ---------------------------------------------------------------------------

class NonPositiveLambda(OpfeynError):
    """Monte Carlo evaluation needs a real, strictly positive parameter."""


class NotAdmissible(OpfeynError):
    """The kernel parameter is outside the admissible region."""


class NotInFq0(OpfeynError):
    """The functional's measure fails the exponential-moment condition."""


class PsiNotIntegrable(OpfeynError):
    """The state function is not integrable against the required weight."""


class SequenceLeavesRegion(OpfeynError):
    """An approach sequence exits the admissible region."""


class BadConfig(OpfeynError):
    """An engine routine received an inconsistent configuration."""


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------

class QuadratureError(OpfeynError):
    """Adaptive quadrature could not reach the requested tolerance."""


class KernelOverflow(OpfeynError):
    """A kernel exponent left the representable floating-point range."""


# ---------------------------------------------------------------------------
# command line
# ---------------------------------------------------------------------------

class ConfigError(OpfeynError):
    """A run configuration file is malformed or inconsistent."""
