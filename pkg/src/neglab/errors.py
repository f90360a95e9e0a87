"""Exception hierarchy shared by all neglab modules."""


class NegLabError(Exception):
    """Base class for every error raised by neglab."""


class NonHermitian(NegLabError, ValueError):
    pass


class InvalidOrder(NegLabError, ValueError):
    """Schatten order p below 1."""


class DimensionMismatch(NegLabError, ValueError):
    pass


class DomainError(NegLabError, ValueError):
    """Argument outside the natural domain of a scalar map."""


class NotAState(NegLabError, ValueError):
    """Matrix is not PSD with unit trace."""


class IncompleteInstrument(NegLabError, ValueError):
    pass


class InvalidParameter(NegLabError, ValueError):
    pass


class NonzeroConstantTerm(NegLabError, ValueError):
    pass


class NotDeltaForm(NegLabError, ValueError):
    """Series is not of the form s + O(s^2)."""


class UnsupportedFamily(NegLabError, ValueError):
    pass
