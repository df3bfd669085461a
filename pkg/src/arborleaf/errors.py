"""Exception hierarchy shared by every arborleaf module."""

from __future__ import annotations


class ArborleafError(Exception):
    """Base class for all errors raised by this package."""


# --- graph validation -------------------------------------------------------


class DagError(ArborleafError, ValueError):
    """The input is not a valid rooted DAG."""


class ArcOutOfRange(DagError):
    def __init__(self, arc: tuple[int, int], n: int) -> None:
        super().__init__(f"arc {arc} has an endpoint outside [0, {n})")
        self.arc = arc
        self.n = n


class SelfLoop(DagError):
    def __init__(self, node: int) -> None:
        super().__init__(f"self-loop at node {node}")
        self.node = node


class DuplicateArc(DagError):
    def __init__(self, arc: tuple[int, int]) -> None:
        super().__init__(f"duplicate arc {arc}")
        self.arc = arc


class CycleDetected(DagError):
    def __init__(self, cycle: list[int]) -> None:
        super().__init__(f"directed cycle {' -> '.join(map(str, cycle + cycle[:1]))}")
        self.cycle = cycle


class UnreachableNode(DagError):
    def __init__(self, node: int, root: int) -> None:
        super().__init__(f"node {node} is not reachable from root {root}")
        self.node = node
        self.root = root


class InvalidBranching(ArborleafError, ValueError):
    """A parent map violates the branching invariants."""


# --- algorithms -------------------------------------------------------------


class PreconditionViolated(ArborleafError, ValueError):
    pass


class ConflictingExpansions(ArborleafError, ValueError):
    pass


class InvalidCollection(ArborleafError, ValueError):
    """A candidate collection is not a hereditary {2,3}-collection."""


class NotAugmenting(ArborleafError, ValueError):
    pass


class IterationCapExceeded(ArborleafError, RuntimeError):
    """Local search ran past its safety cap; always an implementation bug."""


class CertificateViolated(ArborleafError, AssertionError):
    def __init__(self, inequality: str, operands: dict) -> None:
        detail = ", ".join(f"{k}={v}" for k, v in operands.items())
        super().__init__(f"{inequality} violated ({detail})")
        self.inequality = inequality
        self.operands = operands


class BudgetExceeded(ArborleafError, RuntimeError):
    def __init__(self, what: str, budget: int) -> None:
        super().__init__(f"{what}: search budget of {budget} nodes exhausted")
        self.what = what
        self.budget = budget


# --- instances / io ---------------------------------------------------------


class UnknownFixture(ArborleafError, KeyError):
    pass


class MalformedInput(ArborleafError, ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None) -> None:
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column
