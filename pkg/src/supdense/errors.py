"""Exception hierarchy shared by every solver module."""


class DensityError(Exception):
    pass


class EmptySubset(DensityError):
    pass


class CapExceeded(DensityError):
    def __init__(self, n, cap, what="brute force"):
        super().__init__(f"{what}: {n} elements exceeds cap of {cap}")
        self.n = n
        self.cap = cap


class EngineMismatch(DensityError):
    pass


class GroundExhausted(DensityError):
    pass


class InfeasibleInstance(DensityError):
    pass


class NoFiniteCut(DensityError):
    pass


class CoordinateOutOfRange(DensityError):
    pass


class InvalidMatroid(DensityError):
    pass


class InvariantViolation(DensityError):
    pass


class FormatError(DensityError):
    def __init__(self, message, path=None, line=None):
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(where + message)
        self.path = path
        self.line = line
