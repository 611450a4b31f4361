"""Exception types shared across the package."""


class BerkdynError(Exception):
    pass


class DivisionByZero(BerkdynError, ZeroDivisionError):
    """Divisor is zero modulo its precision cap."""


class PrecisionExhausted(BerkdynError):
    """Not enough certified terms to decide the requested quantity."""


class NotIntegral(BerkdynError, ValueError):
    """Residue requested for a series of negative order."""


class InexactRoot(BerkdynError, ValueError):
    """A root that the exact backend cannot represent (outside Q(i))."""


class ParseError(BerkdynError, ValueError):
    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class SearchBoundExceeded(BerkdynError):
    def __init__(self, bound, what="search"):
        super().__init__(f"{what} not decided within bound {bound}")
        self.bound = bound


class DepthExceeded(BerkdynError):
    pass


class NotLiftable(BerkdynError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NoMatch(BerkdynError):
    pass


class AxiomViolation(BerkdynError):
    pass


class NoConjugacy(BerkdynError):
    def __init__(self, message, level=None, witness=None):
        super().__init__(message)
        self.level = level
        self.witness = witness
