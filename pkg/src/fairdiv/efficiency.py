"""Pareto efficiency tests, cycle elimination, and genericity.

An efficient allocation can always be rewired, without changing anybody's
utility, until its consumption graph is a forest; along the way every cycle on
positively-valued entries must have an alternating ratio product of exactly 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .model import (
    BADS,
    Allocation,
    Problem,
    TooLargeToEnumerateError,
    consumption_graph,
    utility_profile,
)
from .lp import (
    LinearProgram,
    add_allocation_polytope,
    allocation_from_point,
    solve_lp,
    zvar,
)

FOREST_GUARD = 12


class NotEfficientError(ValueError):
    pass


class ZeroUtilityOnCycleError(ValueError):
    pass


@dataclass(frozen=True)
class Cycle:
    """Alternating cycle i_1, a_1, i_2, a_2, ..., i_K, a_K (closing back to i_1).

    Edge convention: agent i_k consumes items a_{k-1} and a_k (indices mod K),
    so the edge set is {(i_k, a_k)} plus {(i_{k+1}, a_k)}.
    """

    agents: tuple[int, ...]
    items: tuple[int, ...]

    def __post_init__(self):
        if len(self.agents) != len(self.items) or len(self.agents) < 2:
            raise ValueError("cycle needs K >= 2 agents and the same number of items")

    def edges(self) -> list[tuple[int, int]]:
        k = len(self.agents)
        out = []
        for t in range(k):
            out.append((self.agents[t], self.items[t]))
            out.append((self.agents[(t + 1) % k], self.items[t]))
        return out


@dataclass(frozen=True)
class EfficiencyResult:
    efficient: bool
    witness: Optional[Allocation]


def is_efficient(problem: Problem, alloc: Allocation) -> EfficiencyResult:
    """LP test: maximize total slack of a Pareto improvement; 0 means efficient.

    Goods: u_i.z'_i = U_i + s_i with s_i >= 0; bads flip the slack sign.
    """
    profile = utility_profile(problem, alloc)
    sign = -1 if problem.kind == BADS else 1
    lp = LinearProgram()
    add_allocation_polytope(lp, problem.n, problem.p)
    for i in range(problem.n):
        row = {zvar(i, a): problem.u[i][a] for a in range(problem.p)}
        row[("s", i)] = -sign
        lp.add_constraint(row, "==", profile[i])
    lp.set_objective({("s", i): 1 for i in range(problem.n)}, "max")
    sol = solve_lp(lp)
    if sol.optimum == 0:
        return EfficiencyResult(True, None)
    return EfficiencyResult(False, allocation_from_point(sol, problem.n, problem.p))


def cycle_product(problem: Problem, cycle: Cycle) -> Fraction:
    """Alternating ratio product pi(C) = prod_k u_{i_k a_k} / u_{i_{k+1} a_k}."""
    k = len(cycle.agents)
    for i, a in cycle.edges():
        if problem.u[i][a] == 0:
            raise ZeroUtilityOnCycleError(f"u[{i}][{a}] = 0 on cycle edge")
    prod = Fraction(1)
    for t in range(k):
        i, j, a = cycle.agents[t], cycle.agents[(t + 1) % k], cycle.items[t]
        prod *= Fraction(problem.u[i][a], problem.u[j][a])
    return prod


def _find_cycle(edges: set[tuple[int, int]], n: int, p: int) -> Optional[Cycle]:
    """First cycle in the bipartite graph by DFS in canonical vertex order."""
    adj: dict[int, list[int]] = {v: [] for v in range(n + p)}
    for i, a in sorted(edges):
        adj[i].append(n + a)
        adj[n + a].append(i)
    color = {}
    for start in range(n + p):
        if start in color:
            continue
        stack = [(start, -1)]
        parent = {start: -1}
        while stack:
            v, par = stack.pop()
            if v in color:
                continue
            color[v] = True
            parent[v] = par
            for w in adj[v]:
                if w == par:
                    continue
                if w in color:
                    # walk both endpoints up to their meeting point
                    path_v = [v]
                    x = v
                    while x != -1:
                        x = parent[x]
                        path_v.append(x)
                    x = w
                    path_w = [w]
                    while x not in path_v:
                        x = parent[x]
                        path_w.append(x)
                    meet = path_w[-1]
                    chain = path_v[: path_v.index(meet) + 1] + path_w[-2::-1]
                    return _cycle_from_vertices(chain, n)
                stack.append((w, v))
    return None


def _cycle_from_vertices(chain: list[int], n: int) -> Cycle:
    """Rotate a closed alternating vertex list so it starts at an agent."""
    if chain[0] >= n:
        chain = chain[1:] + chain[:1]
    agents = [v for v in chain if v < n]
    items = [v - n for v in chain if v >= n]
    return Cycle(tuple(agents), tuple(items))


def reduce_to_forest(problem: Problem, alloc: Allocation) -> Allocation:
    """Rewire an efficient allocation, profile unchanged, until Gamma(z) is acyclic.

    Zero-utility consumption is consolidated first (each such item column goes
    wholly to its first zero-utility consumer), then every remaining cycle has
    positive entries and must have pi(C) = 1; the utility-neutral transfer along
    it is pushed until some entry hits zero.  pi(C) != 1 means the input was not
    efficient and is rejected.
    """
    n, p = problem.n, problem.p
    z = [list(row) for row in alloc.z]

    for a in range(p):
        slack_consumers = [i for i in range(n) if z[i][a] > 0 and problem.u[i][a] == 0]
        if not slack_consumers:
            continue
        # someone with a positive value on this column makes zero-value
        # consumption inefficient for goods, and the reverse for bads
        keeper = slack_consumers[0]
        for i in range(n):
            if z[i][a] > 0 and i != keeper:
                if problem.u[i][a] > 0:
                    raise NotEfficientError(
                        f"column {a} mixes zero and positive utility consumers"
                    )
                z[keeper][a] += z[i][a]
                z[i][a] = Fraction(0)

    while True:
        edges = {(i, a) for i in range(n) for a in range(p) if z[i][a] > 0}
        cycle = _find_cycle(edges, n, p)
        if cycle is None:
            break
        if cycle_product(problem, cycle) != 1:
            raise NotEfficientError(f"cycle {cycle} has ratio product != 1")
        k = len(cycle.agents)
        # transfer coefficients: agent i_{k+1} trades a_k for a_{k+1} at her own rate
        coef = [Fraction(1)]
        for t in range(k - 1):
            j = cycle.agents[t + 1]
            coef.append(coef[-1] * problem.u[j][cycle.items[t]] / problem.u[j][cycle.items[t + 1]])
        step = min(
            z[cycle.agents[(t + 1) % k]][cycle.items[t]] / coef[t] for t in range(k)
        )
        for t in range(k):
            i, j, a = cycle.agents[t], cycle.agents[(t + 1) % k], cycle.items[t]
            z[i][a] += coef[t] * step
            z[j][a] -= coef[t] * step

    out = Allocation(tuple(tuple(row) for row in z))
    if utility_profile(problem, out) != utility_profile(problem, alloc):
        raise AssertionError("forest reduction changed the utility profile")
    return out


def is_generic(problem: Problem) -> bool:
    """All entries positive and no simple cycle with ratio product exactly 1."""
    n, p = problem.n, problem.p
    if n + p > FOREST_GUARD:
        raise TooLargeToEnumerateError(
            f"genericity check needs n + p <= {FOREST_GUARD}, got {n + p}"
        )
    if any(v == 0 for row in problem.u for v in row):
        return False
    return all(cycle_product(problem, c) != 1 for c in _all_simple_cycles(n, p))


def _all_simple_cycles(n: int, p: int):
    """Every simple cycle of the complete bipartite graph, once each.

    Canonical form: starts at the smallest agent on the cycle, and the first
    item index is smaller than the last (fixes the direction).
    """
    def extend(agents: list[int], items: list[int]):
        if len(items) == len(agents) and len(agents) >= 2:
            if items[0] < items[-1]:
                yield Cycle(tuple(agents), tuple(items))
        if len(items) < len(agents):  # next vertex is an item
            for a in range(p):
                if a not in items:
                    yield from extend(agents, items + [a])
        else:  # next vertex is an agent, strictly above the anchor
            for i in range(agents[0] + 1, n):
                if i not in agents:
                    yield from extend(agents + [i], items)

    for start in range(n - 1):
        yield from extend([start], [])
