"""Exception types raised across the toolkit."""


class QuatCatError(ValueError):
    pass


class ZeroQuaternion(QuatCatError):
    pass


class NegativeRealAxis(QuatCatError):
    """Log requested on (or within branch_eps of) the closed negative real axis."""


class SizeMismatch(QuatCatError):
    pass


class NotUnit(QuatCatError):
    pass


class NotInQn(QuatCatError):
    """Matrix is not (numerically) of the form x(lambda - 1)x* + I."""


class OutOfBall(QuatCatError):
    pass


class BranchViolation(QuatCatError):
    pass


class DomainError(QuatCatError):
    pass
