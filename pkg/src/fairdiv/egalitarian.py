"""Egalitarian rule: leximin for goods, equal normalized disutility for bads.

The utility profile is unique; the representing allocation may not be.  We
return a deterministic LP vertex tidied by forest reduction and say so in the
result metadata instead of pretending the allocation is canonical.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .efficiency import is_efficient, reduce_to_forest
from .lp import (
    LinearProgram,
    add_allocation_polytope,
    allocation_from_point,
    leximin_max,
    solve_lp,
    zvar,
)
from .model import (
    BADS,
    GOODS,
    Allocation,
    Problem,
    normalize,
    utility_profile,
)


@dataclass(frozen=True)
class EgalitarianDivision:
    allocation: Allocation
    profile: tuple[Fraction, ...]  # original scale
    normalized: tuple[Fraction, ...]
    meta: tuple[tuple[str, str], ...] = (("allocation", "one-of-possibly-many"),)


def egalitarian_goods(problem: Problem) -> EgalitarianDivision:
    if problem.kind != GOODS:
        raise ValueError("egalitarian_goods needs a goods problem")
    norm = normalize(problem)
    norm_profile, alloc = leximin_max(norm)
    alloc = reduce_to_forest(norm, alloc)
    return EgalitarianDivision(
        allocation=alloc,
        profile=utility_profile(problem, alloc),
        normalized=norm_profile,
    )


def egalitarian_bads(problem: Problem) -> EgalitarianDivision:
    """Minimize the common normalized disutility level t over the polytope.

    At the minimal t every agent can be brought exactly to t (otherwise small
    load transfers toward the slack agents would push everyone strictly below
    t, contradicting minimality), and any Pareto improvement on the all-equal
    allocation would do the same.  We still check both claims at runtime.
    """
    if problem.kind != BADS:
        raise ValueError("egalitarian_bads needs a bads problem")
    n, p = problem.n, problem.p
    totals = [sum(problem.u[i]) for i in range(n)]

    lp = LinearProgram()
    add_allocation_polytope(lp, n, p)
    for i in range(n):
        row = {zvar(i, a): problem.u[i][a] for a in range(p)}
        row["t"] = -totals[i]
        lp.add_constraint(row, "<=", 0)
    lp.set_objective({"t": 1}, "min")
    t_star = solve_lp(lp).optimum

    # pin every agent exactly at t and take a vertex of that face
    eq = LinearProgram()
    add_allocation_polytope(eq, n, p)
    for i in range(n):
        eq.add_constraint(
            {zvar(i, a): problem.u[i][a] for a in range(p)}, "==", t_star * totals[i]
        )
    eq.set_objective({zvar(0, 0): 1}, "min")
    alloc = allocation_from_point(solve_lp(eq), n, p)

    res = is_efficient(problem, alloc)
    if not res.efficient:
        raise AssertionError("equal-disutility optimum unexpectedly dominated")
    alloc = reduce_to_forest(problem, alloc)
    profile = utility_profile(problem, alloc)
    assert all(profile[i] == t_star * totals[i] for i in range(n))
    return EgalitarianDivision(
        allocation=alloc,
        profile=profile,
        normalized=tuple(t_star for _ in range(n)),
    )


def egalitarian(problem: Problem) -> EgalitarianDivision:
    if problem.kind == GOODS:
        return egalitarian_goods(problem)
    return egalitarian_bads(problem)
