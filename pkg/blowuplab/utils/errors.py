class Error(Exception):
    pass


class DomainError(Error):
    """Raised when an input lies outside the domain of an operation"""

    pass


class SeparationViolation(DomainError):
    """Raised when two nodes are closer than the relative separation threshold"""

    pass


class DomainViolation(DomainError):
    pass


class PoleViolation(DomainError):
    """Raised when a rational function is evaluated at, or on the wrong side of, a pole"""

    pass


class UndefinedBase(DomainError):
    """Raised when a negative base meets a non-integer exponent"""

    pass


class IllDefinedZeroPow(DomainError):
    """Raised when a zero base meets a zero exponent"""

    pass


class InvalidConfig(DomainError):
    pass


class NumericalFailure(Error):
    """Raised when a numerical kernel cannot reach its tolerance"""

    pass


class QuadratureFailure(NumericalFailure):
    pass


class StiffFailure(NumericalFailure):
    """Raised when the step size underflows before horizon or escape"""

    pass


class SamplingExhausted(NumericalFailure):
    """Raised when the rejection sampler exceeds its budget"""

    pass


class ConsistencyViolation(Error):
    """Raised when two independent routes disagree beyond tolerance"""

    pass
