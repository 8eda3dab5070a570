"""Exception hierarchy.

Two families are distinguished so that the command line can map them to
different exit codes: violated preconditions (bad input, missing metadata)
and numerical failures (non-finite samples, failed convergence, degenerate
fits).
"""


class PoissonQuadError(Exception):
    """Base class for all package errors."""


class PreconditionError(PoissonQuadError, ValueError):
    """An operation was called outside its domain."""


class NumericalError(PoissonQuadError, ArithmeticError):
    """A computation could not be completed to the requested accuracy."""


class DomainError(PreconditionError):
    pass


class NonIntegrableDecay(PreconditionError):
    pass


class DecayHintMissing(PreconditionError):
    pass


class NoReferenceIntegral(PreconditionError):
    pass


class DecayPowerMissing(PreconditionError):
    pass


class DerivativeUnavailable(PreconditionError):
    pass


class RieszUnavailable(PreconditionError):
    pass


class NotL1(PreconditionError):
    pass


class UnboundedWeight(PreconditionError):
    pass


class NonFiniteSample(NumericalError):
    pass


class NoConvergence(NumericalError):
    pass


class DegenerateFit(NumericalError):
    pass


class InsufficientDecay(NumericalError):
    pass
