"""Core domain types: division problems, allocations, prices, consumption graphs.

All arithmetic is exact (`fractions.Fraction`); matrices are tuples of tuples so
every value object is hashable and safe to share across threads.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

GOODS = "goods"
BADS = "bads"
KINDS = (GOODS, BADS)

Rational = Fraction
Matrix = tuple[tuple[Fraction, ...], ...]


class ModelError(ValueError):
    """Base class for validation failures; carries a machine-readable code."""

    code = "model-error"

    def payload(self) -> dict:
        return {"error": self.code, "detail": str(self)}


class TooSmallError(ModelError):
    code = "too-small"


class NullRowError(ModelError):
    code = "null-row"

    def __init__(self, agent: str):
        super().__init__(f"agent {agent!r} values every item at zero")
        self.agent = agent


class NullColumnError(ModelError):
    code = "null-column"

    def __init__(self, item: str):
        super().__init__(f"item {item!r} is valued at zero by every agent")
        self.item = item


class BadsAllHarmlessError(ModelError):
    code = "bads-all-harmless"

    def __init__(self) -> None:
        super().__init__(
            "every chore has at least one agent who does not mind it; "
            "the all-zero disutility profile is feasible and the problem is trivial"
        )


class DimensionMismatchError(ModelError):
    code = "dimension-mismatch"


class NotFeasibleError(ModelError):
    code = "not-feasible"


class TooLargeToEnumerateError(Exception):
    """Instance exceeds the enumeration guard (default n + p <= 12)."""

    code = "too-large"

    def payload(self) -> dict:
        return {"error": self.code, "detail": str(self)}


def as_fraction(x) -> Fraction:
    """Parse ints, Fractions, and 'a/b' strings; floats are rejected to keep exactness."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise DimensionMismatchError(f"expected an exact rational, got {type(x).__name__}")


def format_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


@dataclass(frozen=True)
class Problem:
    """A division problem: who values what, and whether items are goods or chores.

    ``u[i][a]`` is agent ``i``'s marginal utility (goods) or disutility (bads)
    per unit of item ``a``.  Construct through :func:`validate_problem`.
    """

    agents: tuple[str, ...]
    items: tuple[str, ...]
    kind: str
    u: Matrix

    @property
    def n(self) -> int:
        return len(self.agents)

    @property
    def p(self) -> int:
        return len(self.items)

    def row_totals(self) -> tuple[Fraction, ...]:
        """Value of the whole manna per agent (u_i dotted with the all-ones bundle)."""
        return tuple(sum(row, Fraction(0)) for row in self.u)

    def fair_shares(self) -> tuple[Fraction, ...]:
        """Per-agent utility of the equal split: one n-th of everything."""
        n = self.n
        return tuple(t / n for t in self.row_totals())

    def agent_index(self, agent) -> int:
        """Positional index from an agent name, or a pass-through index."""
        if isinstance(agent, int):
            if not 0 <= agent < self.n:
                raise ModelError(f"agent index {agent} out of range")
            return agent
        return self.agents.index(agent)

    def item_index(self, item) -> int:
        if isinstance(item, int):
            if not 0 <= item < self.p:
                raise ModelError(f"item index {item} out of range")
            return item
        return self.items.index(item)

    def with_entry(self, agent: str, item: str, value) -> "Problem":
        """Copy with one matrix entry replaced (re-validated)."""
        i, a = self.agent_index(agent), self.item_index(item)
        rows = [list(r) for r in self.u]
        rows[i][a] = as_fraction(value)
        return validate_problem(rows, self.kind, agents=self.agents, items=self.items)

    def with_row(self, agent: str, row: Sequence) -> "Problem":
        i = self.agent_index(agent)
        rows = [list(r) for r in self.u]
        rows[i] = [as_fraction(v) for v in row]
        return validate_problem(rows, self.kind, agents=self.agents, items=self.items)

    def scale_column(self, item: str, factor) -> "Problem":
        """Shrink or grow one item by scaling its column (the item stays whole)."""
        a = self.item_index(item)
        f = as_fraction(factor)
        rows = [[v * f if j == a else v for j, v in enumerate(r)] for r in self.u]
        return validate_problem(rows, self.kind, agents=self.agents, items=self.items)

    def restrict(self, items: Sequence[str]) -> "Problem":
        """Sub-problem on a subset of the items (order taken from the argument)."""
        idx = [self.item_index(b) for b in items]
        rows = [[r[j] for j in idx] for r in self.u]
        return validate_problem(rows, self.kind, agents=self.agents, items=tuple(items))


def validate_problem(matrix, kind: str, agents=None, items=None) -> Problem:
    """Check the admissibility rules and build a Problem.

    Rejects matrices with a null row, a null column, fewer than two agents or
    items, and chore problems where every item is harmless to somebody (the
    all-zero disutility profile would be feasible).
    """
    if kind not in KINDS:
        raise ModelError(f"kind must be one of {KINDS}, got {kind!r}")
    rows = [tuple(as_fraction(v) for v in r) for r in matrix]
    n = len(rows)
    if n < 2:
        raise TooSmallError("need at least two agents")
    p = len(rows[0])
    if any(len(r) != p for r in rows):
        raise DimensionMismatchError("utility matrix is not rectangular")
    if p < 2:
        raise TooSmallError("need at least two items")
    if any(v < 0 for r in rows for v in r):
        raise ModelError("utilities must be nonnegative")
    agents = tuple(agents) if agents is not None else tuple(f"agent{i + 1}" for i in range(n))
    items = tuple(items) if items is not None else _default_item_names(p)
    if len(agents) != n or len(items) != p:
        raise DimensionMismatchError("agent/item id lists do not match the matrix shape")
    for i, r in enumerate(rows):
        if all(v == 0 for v in r):
            raise NullRowError(agents[i])
    for a in range(p):
        if all(r[a] == 0 for r in rows):
            raise NullColumnError(items[a])
    if kind == BADS and not any(all(r[a] > 0 for r in rows) for a in range(p)):
        raise BadsAllHarmlessError()
    return Problem(agents=agents, items=items, kind=kind, u=tuple(rows))


def _default_item_names(p: int) -> tuple[str, ...]:
    alphabet = "abcdefghijklmnopqrstuvwxyz"
    if p <= len(alphabet):
        return tuple(alphabet[:p])
    return tuple(f"item{j + 1}" for j in range(p))


def normalize(problem: Problem) -> Problem:
    """Rescale each row so the whole manna is worth exactly 1 to every agent."""
    totals = problem.row_totals()
    rows = [tuple(v / t for v in row) for row, t in zip(problem.u, totals)]
    return Problem(problem.agents, problem.items, problem.kind, tuple(rows))


@dataclass(frozen=True)
class Allocation:
    """Feasible division: row per agent, each item column sums to exactly 1."""

    z: Matrix

    def __post_init__(self):
        p = len(self.z[0]) if self.z else 0
        for row in self.z:
            if len(row) != p:
                raise DimensionMismatchError("allocation matrix is not rectangular")
            for v in row:
                if v < 0 or v > 1:
                    raise NotFeasibleError(f"allocation entry {v} outside [0, 1]")
        for a in range(p):
            col = sum(row[a] for row in self.z)
            if col != 1:
                raise NotFeasibleError(f"column {a} sums to {col}, not 1")

    @property
    def n(self) -> int:
        return len(self.z)

    @property
    def p(self) -> int:
        return len(self.z[0])


def allocation(rows) -> Allocation:
    return Allocation(tuple(tuple(as_fraction(v) for v in r) for r in rows))


def equal_split(problem: Problem) -> Allocation:
    n, p = problem.n, problem.p
    share = Fraction(1, n)
    return Allocation(tuple(tuple(share for _ in range(p)) for _ in range(n)))


def utility_profile(problem: Problem, alloc: Allocation) -> tuple[Fraction, ...]:
    """Exact dot product u_i . z_i per agent."""
    if alloc.n != problem.n or alloc.p != problem.p:
        raise DimensionMismatchError(
            f"allocation is {alloc.n}x{alloc.p}, problem is {problem.n}x{problem.p}"
        )
    return tuple(
        sum((ua * za for ua, za in zip(urow, zrow)), Fraction(0))
        for urow, zrow in zip(problem.u, alloc.z)
    )


Edge = tuple[int, int]  # (agent index, item index)


def consumption_graph(alloc: Allocation) -> frozenset[Edge]:
    """Bipartite graph of strictly positive consumptions."""
    return frozenset(
        (i, a) for i, row in enumerate(alloc.z) for a, v in enumerate(row) if v > 0
    )


def is_forest(edges: Iterable[Edge], n: int, p: int) -> bool:
    """Acyclicity of the bipartite consumption graph, via union-find."""
    parent = list(range(n + p))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, a in edges:
        ri, ra = find(i), find(n + a)
        if ri == ra:
            return False
        parent[ri] = ra
    return True


# --- JSON wire format -------------------------------------------------------
#
# {"kind": "goods"|"bads", "agents": [...], "items": [...], "u": [[...]]}
# Rationals come in as integers or "a/b" strings and always go out as strings.


def problem_to_json(problem: Problem) -> dict:
    return {
        "kind": problem.kind,
        "agents": list(problem.agents),
        "items": list(problem.items),
        "u": [[format_fraction(v) for v in row] for row in problem.u],
    }


def problem_from_json(doc: Mapping) -> Problem:
    try:
        kind = doc["kind"]
        u = doc["u"]
    except (KeyError, TypeError) as exc:
        raise ModelError(f"problem document missing field: {exc}") from exc
    return validate_problem(u, kind, agents=doc.get("agents"), items=doc.get("items"))


def load_problem(path: str) -> Problem:
    with open(path) as fh:
        return problem_from_json(json.load(fh))


def matrix_to_json(m: Matrix) -> list[list[str]]:
    return [[format_fraction(v) for v in row] for row in m]


def vector_to_json(v: Sequence[Fraction]) -> list[str]:
    return [format_fraction(x) for x in v]
