"""Exception types raised by the toolkit."""


class BifourError(ValueError):
    """Base class for all precondition failures."""


class InvalidDimensionError(BifourError):
    pass


class InvalidSizeError(BifourError):
    pass


class NonpositivePeriodError(BifourError):
    pass


class LatticeMismatchError(BifourError):
    pass


class SymbolError(BifourError):
    """Unknown symbol name, unsupported dilation or off-grid evaluation."""


class RangeError(BifourError):
    """A dyadic index, axis or exponent outside the admissible range."""


class PreconditionError(BifourError):
    """An input violates a documented analytic precondition."""


class UnknownCheckError(BifourError):
    pass
