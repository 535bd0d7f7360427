"""Exception types shared across the package."""


class TwinprepError(Exception):
    """Base class for all errors raised by this package."""


class NotHermitian(TwinprepError):
    pass


class NotPSD(TwinprepError):
    pass


class DuplicateLabel(TwinprepError):
    pass


class UnknownLabel(TwinprepError):
    pass


class NotUnitary(TwinprepError):
    pass


class EmptyKeepSet(TwinprepError):
    pass


class DimensionMismatch(TwinprepError):
    pass


class AngleOutOfRange(TwinprepError):
    pass


class InputsNotOrthonormal(TwinprepError):
    pass


class SingularSigma(TwinprepError):
    pass


class DomainError(TwinprepError):
    pass


class AuditFailure(TwinprepError):
    """Raised when a no-signaling audit finds a receiver marginal away from I/2.

    Carries the offending matrix in ``offending_matrix``.
    """

    def __init__(self, message, offending_matrix=None):
        super().__init__(message)
        self.offending_matrix = offending_matrix


class InvalidTransition(TwinprepError):
    pass


class MatrixFileError(TwinprepError):
    """A matrix file failed to parse or violated a density-matrix invariant.

    ``invariant`` names the violated requirement (e.g. "hermitian", "trace").
    """

    def __init__(self, message, invariant):
        super().__init__(message)
        self.invariant = invariant


class TranscriptError(TwinprepError):
    pass
