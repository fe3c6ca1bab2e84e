"""Exception hierarchy shared by every module."""


class SqapnError(Exception):
    """Base class for all library errors."""


# field arithmetic
class NotIrreducible(SqapnError, ValueError):
    pass


class DegreeMismatch(SqapnError, ValueError):
    pass


class DivisionByZero(SqapnError, ZeroDivisionError):
    pass


class NotADivisor(SqapnError, ValueError):
    pass


# skew polynomials
class CtxMismatch(SqapnError, ValueError):
    pass


class DivisionByZeroPoly(SqapnError, ZeroDivisionError):
    pass


class BothZero(SqapnError, ValueError):
    pass


class ZeroInput(SqapnError, ValueError):
    pass


# family / analysis
class ZeroA(SqapnError, ValueError):
    pass


class BadTwist(SqapnError, ValueError):
    pass


class ZeroScalar(SqapnError, ValueError):
    pass


class ZeroDirection(SqapnError, ValueError):
    pass


class NotCoprime(SqapnError, ValueError):
    pass


class TooLarge(SqapnError, ValueError):
    pass


class Singular(SqapnError, ValueError):
    pass


class WidthMismatch(SqapnError, ValueError):
    pass


class ZeroImage(SqapnError):
    """A nonzero input maps to zero, so the projective map is undefined."""

    def __init__(self, point):
        super().__init__(f"nonzero point {point} maps to 0")
        self.point = point


class OracleDisagreement(SqapnError, AssertionError):
    """Two independent computations of the same quantity disagree (a defect)."""


# search / cli
class BudgetExceeded(SqapnError):
    """Time budget ran out; ``result`` holds the partial sweep."""

    def __init__(self, result):
        super().__init__(f"budget exceeded after {len(result.rows)} rows")
        self.result = result


class NoneFound(SqapnError):
    def __init__(self, searched: int):
        super().__init__(f"no passing triple among {searched} searched")
        self.searched = searched


class RefusedUnverified(SqapnError):
    pass
