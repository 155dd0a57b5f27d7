"""Exception hierarchy shared across the package.

The CLI and the HTTP service map these onto exit codes and error kinds:
invalid input (parse failures, infeasible generator parameters), resource
caps (solver size limits, enumeration budgets, step budgets), and violated
preconditions (wrong graph class, unstable configuration, illegal firing).
"""

from __future__ import annotations


class ArcfireError(Exception):
    """Base class for all library errors."""


class GraphParseError(ArcfireError, ValueError):
    """Malformed edge-list input. Carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ConfigParseError(ArcfireError, ValueError):
    """Malformed chip-configuration input."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InfeasibleParameterError(ArcfireError, ValueError):
    """Generator parameters that no graph can satisfy."""


class CapExceededError(ArcfireError, RuntimeError):
    """An instance exceeds a solver or enumeration resource cap."""


class PreconditionError(ArcfireError, ValueError):
    """An operation was called outside its contract (wrong graph class,
    unstable configuration, non-acyclic arc set, ...)."""


class NotRecurrentError(PreconditionError):
    """A burning pass failed to consume the whole graph.

    ``unburnt`` holds the vertices that never became active; it is the
    diagnostic surfaced by the check command.
    """

    def __init__(self, message: str, unburnt: frozenset[int]):
        self.unburnt = unburnt
        super().__init__(message)
