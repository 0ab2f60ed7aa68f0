"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A family or session parameter lies outside its legal range."""


class PreconditionError(ValueError):
    """An operation was called on inputs it is not defined for."""


class UndefinedOrderError(ArithmeticError):
    """The order of vanishing of zero was requested."""


class PoleError(ArithmeticError):
    """A value with a pole at the specialization point was specialized."""

    def __init__(self, order, message=None):
        self.order = order
        super().__init__(message or f"pole of order {-order} at the specialization point")


class InvariantError(RuntimeError):
    """An internal invariant failed; this always signals a bug."""
