"""Exception types shared across the package."""


class DomainError(ValueError):
    """A parameter or operand lies outside the domain of an operation."""


class NotPrimeError(DomainError):
    """The modulus failed the Miller-Rabin primality test."""


class NotInertError(DomainError):
    """The chosen extension generator is a square, so F_{p^2} degenerates."""


class ResidueClassError(DomainError):
    """The prime is in the wrong residue class for the requested family."""


class DegenerateParameterError(DomainError):
    """The parameter value produces a singular or excluded curve."""


class OffCurveError(DomainError):
    """A point does not satisfy the curve equation it was used with."""


class KernelError(DomainError):
    """A kernel description does not define a subgroup of the stated order."""


class NotSquareError(DomainError):
    """A twisting factor has no square root in F_{p^2}."""


class StructureError(DomainError):
    """The group structure is inconsistent with the requested basis variant."""


class OracleGuardError(DomainError):
    """The prime is too large for exhaustive point enumeration."""


class SupersingularError(DomainError):
    """The curve is supersingular, so no eigenvalue machinery applies."""


class TraceError(DomainError):
    """A supplied trace is inconsistent with the curve family."""


class MapPoleError(DomainError):
    """A model map was evaluated at one of its exceptional points."""
