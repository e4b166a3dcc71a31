"""Exception hierarchy.

``DataError`` covers anything wrong with the input table or role
assignment; ``NumericalError`` covers rank deficiency and solver failures.
The CLI maps them to exit codes 2 and 3.
"""


class CollinDiagError(Exception):
    """Base class for every error raised by this package."""


class DataError(CollinDiagError, ValueError):
    """Input data or column roles violate a precondition."""


class NotApplicableError(CollinDiagError, ValueError):
    """A measure is undefined for this design (e.g. VIF with no quantitative column)."""


class NumericalError(CollinDiagError, ArithmeticError):
    """Numerical failure in a well-formed problem."""


class RankDeficiencyError(NumericalError):
    """The (scaled) cross-product is singular to working precision.

    ``columns`` names the columns involved when the caller knows them.
    """

    def __init__(self, message, columns=()):
        super().__init__(message)
        self.columns = tuple(columns)


class ConvergenceError(NumericalError):
    """The Jacobi eigensolver hit its sweep cap."""
