"""Exception hierarchy shared by every module."""
from __future__ import annotations


class DynnormError(Exception):
    """Base class; `exit_code` is what the CLI returns when this escapes."""

    exit_code = 1


class ParseError(DynnormError, ValueError):
    exit_code = 2


class UnsupportedCapability(DynnormError):
    exit_code = 3


class ResourceLimit(DynnormError):
    exit_code = 4


class OrbitTooLarge(ResourceLimit):
    pass


class MixedBackends(DynnormError, TypeError):
    pass


class RelationInvalid(DynnormError):
    pass


class NotNormalWitnessFailure(DynnormError):
    """Exact division promised by normality failed: the backend lied."""


class PreconditionViolated(DynnormError):
    pass


class NotComaximal(DynnormError):
    pass


class DivisionByZero(DynnormError, ZeroDivisionError):
    pass


class NotMonic(DynnormError):
    pass


class ExactDivisionFailed(DynnormError):
    pass


class DegenerateBranch(DynnormError):
    pass


class NotSymmetric(DynnormError):
    pass


class MissingWeightedForm(DynnormError):
    pass


class NeedsSplit(DynnormError):
    """Control flow for the pf path: a zero-divisor decision needs a fork.

    `u` is a base-ring payload with u*x = 0 and (1-u)*y = 0 in the node where
    the decision came up.
    """

    def __init__(self, u, message: str = "zero-divisor decision requires a split"):
        super().__init__(message)
        self.u = u
