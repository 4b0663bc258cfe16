class ArborealError(Exception):
    pass


class CardinalityGuardExceeded(ArborealError):
    pass


class UnsupportedSpec(ArborealError):
    pass


class BadReduction(ArborealError):
    """Raised when a point or model does not reduce well at p.

    `reason` is one of "denominator", "discriminant", "excluded".
    """

    def __init__(self, p, reason):
        super().__init__(f"bad reduction at p={p}: {reason}")
        self.p = p
        self.reason = reason


class NotFound(ArborealError):
    pass


class DivergenceDetected(ArborealError):
    pass


class NonIntegralTerm(ArborealError):
    pass


class UnknownReference(ArborealError):
    pass
