"""Exception types shared across the package."""

from __future__ import annotations


class GraphError(ValueError):
    """A structural precondition on a graph, path or colouring was violated."""


class FormatError(GraphError):
    """A text or JSON document did not match its grammar."""

    def __init__(self, message: str, source: str = "<string>", line: int | None = None):
        self.source = source
        self.line = line
        where = source if line is None else f"{source}:{line}"
        super().__init__(f"{where}: {message}")


class BudgetExhausted(RuntimeError):
    """A search ran out of its node budget before reaching a verdict."""

    def __init__(self, what: str, budget: int):
        self.what = what
        self.budget = budget
        super().__init__(f"{what}: budget of {budget} steps exhausted")


class Budget:
    """Step counter shared by the backtracking searches."""

    __slots__ = ("limit", "used", "what")

    def __init__(self, limit: int | None, what: str = "search"):
        self.limit = limit
        self.used = 0
        self.what = what

    def tick(self, n: int = 1) -> None:
        self.used += n
        if self.limit is not None and self.used > self.limit:
            raise BudgetExhausted(self.what, self.limit)
