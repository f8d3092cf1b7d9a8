"""Exception hierarchy shared by all modules."""


class AptFlowError(Exception):
    """Base class for errors raised by aptflow."""


class DomainError(AptFlowError, ValueError):
    """A parameter lies outside its admissible domain."""


class DimensionError(AptFlowError, ValueError):
    """Operand shapes are inconsistent."""


class SymmetryError(AptFlowError, ValueError):
    """A matrix expected to be Hermitian is not."""


class NormalizationError(AptFlowError, ArithmeticError):
    """A state cannot be renormalized (vanishing trace or norm)."""


class PostSelectionError(AptFlowError, ArithmeticError):
    """The requested measurement branch has (numerically) zero probability."""


class CircuitFormatError(AptFlowError, ValueError):
    """Malformed circuit text."""
