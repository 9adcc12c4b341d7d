"""Exception hierarchy. Each class maps to one CLI exit code."""

from __future__ import annotations


class PeriodLabError(Exception):
    exit_code = 1


class InvalidInputError(PeriodLabError, ValueError):
    exit_code = 2


class CapacityError(PeriodLabError):
    """A size/budget limit was exceeded (subset cap, oracle budget)."""

    exit_code = 3


class NotFoundError(PeriodLabError):
    """A bounded search ran out of room before finding what it wanted."""

    exit_code = 3


class InvariantViolation(PeriodLabError, AssertionError):
    """Something that is proven impossible happened anyway."""

    exit_code = 1
