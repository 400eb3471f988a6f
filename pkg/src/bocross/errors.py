"""Exception hierarchy shared by all bocross modules."""


class BocrossError(Exception):
    """Base class for library errors."""


class GammaPoleError(BocrossError, ValueError):
    """Gamma evaluated at a non-positive integer."""


class InvalidParameterError(BocrossError, ValueError):
    """Hypergeometric parameter is zero or a negative integer."""


class DegenerateParameterError(BocrossError, ValueError):
    """A parameter value makes the requested identity degenerate."""


class NonConvergenceError(BocrossError, ArithmeticError):
    """Series did not satisfy the stopping rule within the term budget."""


class AsymptoticRegimeError(BocrossError, ValueError):
    """Argument lies below the crossover of an asymptotic formula."""


class InsufficientPrecisionError(BocrossError, ArithmeticError):
    """Cancellation would require more precision than allowed."""


class IntegrationBlowupError(BocrossError, ArithmeticError):
    """ODE solution magnitude exceeded the overflow threshold."""


class QuadratureError(BocrossError, ArithmeticError):
    """Adaptive quadrature failed to reach its tolerance."""


class DegenerateFitError(BocrossError, ValueError):
    """Power-law fit impossible (non-positive or non-finite observable)."""
