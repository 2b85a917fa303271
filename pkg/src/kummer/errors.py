"""Exception hierarchy shared by the whole package.

The CLI maps these onto exit codes: anything derived from InputError is a
usage/validation problem (exit 2); negative mathematical decisions are not
errors and are reported through return values instead.
"""

from __future__ import annotations

__all__ = [
    "KummerError",
    "InputError",
    "UnsupportedError",
    "NotExactError",
    "PurityError",
    "TowerInvalidError",
    "GlueError",
    "EvidenceError",
]


class KummerError(Exception):
    """Base class for all package errors."""


class InputError(KummerError):
    """Malformed or inconsistent input (bad dimensions, bad JSON, non-prime p, ...)."""


class UnsupportedError(KummerError):
    """The operation is not defined for this value (e.g. needs a finite group)."""


class NotExactError(InputError):
    """A pair of maps failed to be a short exact sequence.

    ``condition`` names the first failed check and ``witness`` carries a
    concrete offending generator or element when one is available.
    """

    def __init__(self, condition: str, message: str, witness=None):
        super().__init__(f"{condition}: {message}")
        self.condition = condition
        self.witness = witness


class PurityError(KummerError):
    """No same-order lift exists for the given element."""

    def __init__(self, message: str, element=None):
        super().__init__(message)
        self.element = element


class TowerInvalidError(InputError):
    """A tower failed validation; ``report`` lists the violations."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class GlueError(InputError):
    """Inconsistent primary-decomposition glue; ``component`` names the failure."""

    def __init__(self, message: str, component: str | None = None):
        super().__init__(message)
        self.component = component


class EvidenceError(InputError):
    """Hypothesis evidence for a limit-splitting claim failed verification."""

    def __init__(self, message: str, check: str | None = None):
        super().__init__(message)
        self.check = check
