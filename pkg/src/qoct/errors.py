"""Exception types shared across the package."""


class QoctError(Exception):
    """Base class for all qoct errors."""


class DomainError(QoctError, ValueError):
    """An argument is outside the mathematical domain of the operation."""


class SingularLocusError(DomainError):
    """The state sits on the locus where the switching-ratio functions blow up."""


class RegimeError(DomainError):
    """The requested quantity is undefined for this extremal regime."""


class NoSolutionError(QoctError):
    """Root finding failed; the target is unreachable by the synthesis families."""


class BracketError(QoctError):
    """A bisection bracket does not straddle the solution."""


class HorizonError(QoctError):
    """No boundary crossing was found within the integration horizon."""


class StepError(QoctError):
    """A renormalization correction was too large; a step probably straddled a
    control discontinuity."""


class ConsistencyError(QoctError):
    """Imaginary residues too large when undoing the resonant phase transformations."""


class QuadratureDepthError(QoctError):
    """Adaptive quadrature exceeded the recursion-depth cap."""
