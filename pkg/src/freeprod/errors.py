"""Exception hierarchy shared by all modules."""


class FreeProdError(Exception):
    pass


class ParseError(FreeProdError, ValueError):
    pass


class FactorMismatch(FreeProdError, ValueError):
    def __init__(self, a: int, b: int):
        super().__init__(f"elements of different factors g{a} and g{b}")
        self.factors = (a, b)


class OrderUnavailable(FreeProdError):
    pass


class InternalDegreeBoundViolated(FreeProdError, AssertionError):
    pass


class CapMismatch(FreeProdError, ValueError):
    pass


class EmptyWord(FreeProdError, ValueError):
    pass


class NotCyclicallyReduced(FreeProdError, ValueError):
    pass


class PreconditionViolated(FreeProdError, ValueError):
    def __init__(self, which: str, reason: str):
        super().__init__(f"{which}: {reason}")
        self.which = which
        self.reason = reason


class FactorFreeViolation(FreeProdError):
    """Folding hit two parallel edges with different labels.

    ``witness`` is a reduced word of the form s*g*s^-1 lying in the subgroup,
    with g a nontrivial element of a single factor.
    """

    def __init__(self, witness, factor: int):
        super().__init__(f"subgroup meets a conjugate of factor g{factor}")
        self.witness = witness
        self.factor = factor


class ChiNonNegative(FreeProdError, ValueError):
    pass


class MalformedCertificate(FreeProdError, ValueError):
    pass


class RetriesExhausted(FreeProdError):
    def __init__(self, rejections: int):
        super().__init__(f"no factor-free instance after {rejections} rejections")
        self.rejections = rejections
