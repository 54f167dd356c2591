"""Exception hierarchy.

``DomainError`` subclasses describe inputs the methods are not defined for
(the CLI maps them to exit status 2).  ``ConsistencyViolation`` signals that
two independent computations disagree and is treated as a bug.
"""


class YPFlowError(Exception):
    pass


class DomainError(YPFlowError, ValueError):
    pass


class ZeroPolynomial(DomainError):
    pass


class OddDegree(DomainError):
    pass


class NegativeLeading(DomainError):
    pass


class WrongDegree(DomainError):
    pass


class NonpositiveWidth(DomainError):
    pass


class DegenerateLeading(DomainError):
    pass


class DegenerateDenominator(DomainError):
    pass


class NotAMergeTime(DomainError):
    pass


class NotApplicable(DomainError):
    pass


class StartOnSingularity(DomainError):
    pass


class NonConvergence(YPFlowError, RuntimeError):
    pass


class ConsistencyViolation(YPFlowError, AssertionError):
    pass


class PolySyntaxError(DomainError):
    """Malformed polynomial expression; ``pos`` is the 0-based offset."""

    def __init__(self, message, pos=None, source=None):
        self.pos = pos
        self.source = source
        if pos is not None:
            message = f"{message} (at position {pos})"
        super().__init__(message)


class MultipleVariables(PolySyntaxError):
    pass
