"""Exception hierarchy shared by every gammacf module."""


class GammaCFError(Exception):
    """Base class for all library errors."""


class ZeroDenominator(GammaCFError, ZeroDivisionError):
    """A rational function or modified approximant has a zero denominator."""


class UnboundParameter(GammaCFError, KeyError):
    def __init__(self, name):
        super().__init__(name)
        self.name = name

    def __str__(self):
        return f"parameter {self.name!r} is not bound"


class IndexedError(GammaCFError):
    """Error carrying the offending term index."""

    label = "index"

    def __init__(self, index, detail=""):
        self.index = index
        self.detail = detail
        msg = f"{self.label} {index}"
        super().__init__(f"{msg}: {detail}" if detail else msg)


class TemplateDenominatorZero(IndexedError):
    label = "template denominator vanishes at m ="


class ZeroDenominatorB(IndexedError):
    label = "B_n vanishes at n ="


class ZeroFactor(IndexedError):
    label = "equivalence factor vanishes at m ="


class ContractionUndefined(IndexedError):
    label = "even contraction undefined at k ="


class AdjointZero(IndexedError):
    label = "adjoint factor vanishes at m ="


class NoSolutionFound(GammaCFError):
    pass


class NotLogNormalized(GammaCFError, ValueError):
    pass


class DivisionByZeroSeries(GammaCFError, ZeroDivisionError):
    pass


class AllZeroThroughTruncation(GammaCFError, ValueError):
    pass


class LambdaNotGreaterThanOne(GammaCFError, ValueError):
    pass


class SearchExhausted(GammaCFError):
    def __init__(self, bound, detail=""):
        self.bound = bound
        super().__init__(f"no correction of degree <= {bound} improves the rate" + (f" ({detail})" if detail else ""))


class NoExactFit(GammaCFError, ValueError):
    pass


class PoleAtMinusOne(GammaCFError, ZeroDivisionError):
    pass


class NonpositiveArgument(GammaCFError, ValueError):
    pass


class PoleArgument(GammaCFError, ValueError):
    pass


class DomainViolation(GammaCFError, ValueError):
    pass


class ConfigError(GammaCFError, ValueError):
    pass


class ExpressionError(GammaCFError, ValueError):
    """Malformed expression in the coefficient grammar."""
