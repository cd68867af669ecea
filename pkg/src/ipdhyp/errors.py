"""Exception hierarchy and warning categories for ipdhyp.

Every domain error raised by this package derives from :class:`IpdHypError`,
so callers can catch one base class.  Warnings (non-fatal conditions such as
a shifted parameter landing on a series pole that may still terminate first)
use :class:`RootWarning`.
"""


class IpdHypError(Exception):
    """Base class for all ipdhyp domain errors."""


class LengthMismatchError(IpdHypError):
    """Parameter vector and multiplicity vector have different lengths."""


class PoleAtNonpositiveIntegerError(IpdHypError):
    """log-gamma requested at a nonpositive integer."""


class IndexOutOfRangeError(IpdHypError):
    """Coefficient index outside its admissible range."""


class ZeroDenominatorError(IpdHypError):
    """A normalizing Pochhammer product vanishes."""


class DegenerateLeadingError(IpdHypError):
    """The weight parameter is zero, collapsing a polynomial to zero."""


class UnsupportedPError(IpdHypError):
    """Closed-form coefficient route requested outside its parameter range."""


class DegenerateCaseError(IpdHypError):
    """A Pochhammer non-vanishing condition of a transformation fails."""


class GammaPoleError(IpdHypError):
    """A gamma-function argument hits a nonpositive integer."""


class NonConvergenceError(IpdHypError):
    """Iterative root solver exceeded its iteration budget."""


class ZeroPolynomialError(IpdHypError):
    """Root extraction requested for the zero polynomial."""


class DivergentSeriesError(IpdHypError):
    """Series evaluation requested outside its convergence region."""


class DenominatorPoleError(IpdHypError):
    """A bottom parameter hits a nonpositive integer before termination."""


class SlowConvergenceError(IpdHypError):
    """Series evaluation hit the term cap before meeting the tolerance."""


class OnBranchCutError(IpdHypError):
    """Prefactor evaluation requested on the branch cut [1, oo)."""


class PoleAtOneError(IpdHypError):
    """Moebius argument map requested at its pole x = 1."""


class IntegerDifferenceError(IpdHypError):
    """Series route genericity condition (non-integer differences) fails."""


class DistinctnessViolationError(IpdHypError):
    """Shifted denominator-parameter grid contains coincident entries."""


class TrivialSplitError(IpdHypError):
    """Two-free-parameter split requested with zero weight parameter."""


class RejectionExhaustedError(IpdHypError):
    """Parameter sampler could not satisfy preconditions within its budget."""


class RootWarning(UserWarning):
    """A shifted parameter sits at (or near) a nonpositive integer.

    Non-fatal: evaluation may still succeed if the series terminates before
    the pole is reached.
    """
