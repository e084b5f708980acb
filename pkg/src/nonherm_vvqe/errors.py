"""Exception types shared across the package."""


class VvqeError(Exception):
    """Base class for all errors raised by this package."""


class NonPowerOfTwoDim(VvqeError):
    """Matrix dimension is not a power of two; no qubit embedding is defined."""


class NonFinite(VvqeError):
    """A matrix or parameter contains NaN or Inf."""


class UnknownMatrix(VvqeError):
    """Requested built-in matrix name does not exist."""


class ParseError(VvqeError):
    """Matrix file could not be parsed.

    Carries the (row, col) location of the offending entry when known.
    """

    def __init__(self, message, row=None, col=None):
        loc = "" if row is None else f" at row {row}" + ("" if col is None else f", col {col}")
        super().__init__(message + loc)
        self.row = row
        self.col = col


class DimensionMismatch(VvqeError):
    """Matrix shape is unusable: ragged rows, not square, wrong declared dim,
    or beyond the supported size."""


class NotHermitian(VvqeError):
    """Operation requires a Hermitian matrix."""


class QubitCountMismatch(VvqeError):
    """Pauli strings act on different numbers of qubits."""


class InvalidVariant(VvqeError):
    """Ansatz variant is not valid for the requested qubit count."""


class ParamCountMismatch(VvqeError):
    """Parameter vector length does not match the ansatz."""


class DimMismatch(VvqeError):
    """State and observable act on different dimensions."""


class NotHermitianInput(VvqeError):
    """Plain expectation-value minimization only applies to Hermitian matrices."""


class NoConvergedRuns(VvqeError):
    """Every restart of a multi-start solve exceeded the variance threshold."""


class ConvergenceFailure(VvqeError):
    """QR iteration exceeded its sweep budget."""
