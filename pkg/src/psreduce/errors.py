"""Exception types shared across the pipeline."""


class PSError(Exception):
    """Base class for every error raised by this package."""


class ParseError(PSError):
    def __init__(self, message: str, pos: int = 0):
        super().__init__(f"{message} (at position {pos})")
        self.message = message
        self.pos = pos


class UnsupportedExpression(ParseError):
    pass


class LimitExceeded(PSError):
    """A Groebner-basis size/degree cap or a stage timeout was hit."""

    def __init__(self, message: str, kind: str = "timeout"):
        super().__init__(message)
        self.kind = kind  # "timeout", "degree" or "size"


class EmptySolution(PSError):
    """A linear system has no solution."""


class IrrationalBranch(PSError):
    """A triangular system has no rational root on this branch."""


class NoElementaryFactorAtThisDegree(PSError):
    pass


class NothingFound(PSError):
    """No verified (S, R) pair up to the configured degree bound."""


class UnsupportedIntegral(PSError):
    """The restricted rational integrator cannot express the antiderivative."""

    def __init__(self, message: str, partial=None, remainder=None):
        super().__init__(message)
        self.partial = partial
        self.remainder = remainder


class InternalError(PSError):
    pass
