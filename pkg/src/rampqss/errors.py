"""Exception hierarchy shared by every module."""


class ParameterError(ValueError):
    """Invalid argument: wrong shape, out-of-range index, bad scheme parameters."""


class NotPrimeError(ParameterError):
    pass


class FieldTooSmallError(ParameterError):
    pass


class NotPureSchemeError(ParameterError):
    """Raised when n != 2k - L; only pure (isometric) schemes are constructed."""


class DuplicatePointsError(ParameterError):
    pass


class SingularMatrixError(ArithmeticError):
    """Matrix over GF(q) is not invertible. ``rank`` holds the computed rank."""

    def __init__(self, rank: int, size: int):
        super().__init__(f"matrix is singular over the field (rank {rank} < {size})")
        self.rank = rank
        self.size = size
