"""Exception hierarchy shared by all passes."""

from __future__ import annotations


class CrispcError(Exception):
    """Base class for every error raised by the toolkit."""

    exit_code = 2


class ChainError(CrispcError):
    """Invalid chain construction (bad size or a broken t-norm table)."""


class DomainError(CrispcError):
    """An operator was applied outside of its domain, e.g. ``succ(1)``."""


class ParseError(CrispcError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None, path: str | None = None):
        self.message = message
        self.line = line
        self.col = col
        self.path = path
        super().__init__(str(self))

    def __str__(self) -> str:
        where = self.path or "<input>"
        if self.line is not None:
            where += f":{self.line}"
            if self.col is not None:
                where += f":{self.col}"
        return f"{where}: {self.message}"


class ValidationError(CrispcError):
    """Raised when an ontology or query breaks an invariant that blocks a pass."""


class UnsupportedSemantics(CrispcError):
    """The requested pass is not correct for the chosen operator family."""

    exit_code = 3


class UnsupportedConstruct(CrispcError):
    """A construct outside the accepted fragment reached a pass."""

    exit_code = 3
