"""Exception hierarchy shared by every module."""


class ZetaDRError(Exception):
    pass


class DomainError(ZetaDRError, ValueError):
    """Arguments outside the region where the requested quantity is defined."""


class PoleError(DomainError):
    pass


class SingularEndpoint(DomainError):
    """A half-line integral diverges at t -> 0 for the given sigma and b = 0."""


class ResourceError(ZetaDRError):
    pass


class NotConverged(ZetaDRError, ArithmeticError):
    """A series or quadrature ran out of budget.

    The best available result is attached as ``result`` so callers can still
    report it.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class NonConvergent(NotConverged):
    pass
