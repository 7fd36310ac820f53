"""Exception hierarchy shared by all regprod modules.

Three families:

* ``DomainError``      -- the request is mathematically meaningless (poles,
                          shifts sitting on the sequence, malformed specs).
* ``ConvergenceError`` -- a numerical procedure could not reach its target
                          accuracy (quadrature, root finding, tail matching).
* ``ConsistencyError`` -- two internal evaluation routes that must agree
                          did not; indicates a bug or corrupted input data.
"""


class RegprodError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(RegprodError):
    """Input lies outside the mathematical domain of the operation."""


class ConvergenceError(RegprodError):
    """A numerical procedure failed to converge to its accuracy target."""


class ConsistencyError(RegprodError):
    """Redundant evaluation routes disagree beyond their error budget."""


# -- domain errors -----------------------------------------------------------

class PoleAtNonPositiveInteger(DomainError):
    """Gamma-type function evaluated at a non-positive integer."""


class PoleAtOne(DomainError):
    """Zeta-type function evaluated at its pole s = 1."""


class ShiftOnSequence(DomainError):
    """A shift z coincides with a sequence element lambda_k."""


class RootOnSequence(DomainError):
    """A polynomial root coincides with a sequence element."""


class NonMonic(DomainError):
    """Polynomial is not monic (leading coefficient != 1)."""


class ZeroScale(DomainError):
    """Scaling factor a = 0 is not invertible."""


class NonPositiveBase(DomainError):
    """Sequence base point must have positive real part."""


class SpecInvalid(DomainError):
    """Provider specification violates its invariants."""


class ExpansionTooShort(DomainError):
    """Supplied theta expansion does not reach the requested exponent."""


# -- convergence errors ------------------------------------------------------

class PrecisionLoss(ConvergenceError):
    """Cancellation exceeded the available guard digits."""


class CapExceeded(ConvergenceError):
    """Enumeration size cap exceeded (raise the cap explicitly to proceed)."""


class QuadratureNonConvergence(ConvergenceError):
    """Adaptive quadrature refinements failed to agree."""


class TruncationInsufficient(ConvergenceError):
    """Series/lattice truncation cannot meet the accuracy target."""


class RootFindingFailure(ConvergenceError):
    """Simultaneous polynomial root iteration did not converge."""


class ZeroScanFailure(ConvergenceError):
    """Sign-change scan did not locate the requested number of zeros."""


class ZeroRefinementFailure(ConvergenceError):
    """Newton/bisection refinement of a zero did not meet its residual."""


class TailFitUnstable(ConvergenceError):
    """Tail-matched Laurent fit not stable across truncation levels."""


# -- consistency errors ------------------------------------------------------

class FormMismatch(ConsistencyError):
    """The two closed-form product representations disagree."""


class RouteMismatch(ConsistencyError):
    """Analytic and numeric derivative routes disagree."""
