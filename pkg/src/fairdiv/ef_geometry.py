"""Geometry of efficient envy-free allocations for two bads.

With two bads and agents sorted by the disutility ratio r_i = u_ia / u_ib,
every efficient envy-free allocation is an i-split (one agent possibly eating
both bads, everyone below her only a, everyone above only b).  The set of
such allocations decomposes into connected components: runs of adjacent
envy-free cuts, plus isolated components interior to a single split
rectangle.  This module counts them, classifies allocations, clones the b
column to lift the structure to more items, and stages the discontinuity
demonstration for single-valued envy-free selections.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .competitive import CutSplitDescriptor, enumerate_competitive
from .efficiency import NotEfficientError
from .model import BADS, Allocation, Problem, allocation, validate_problem

ZERO = Fraction(0)
ONE = Fraction(1)


class SelectionNotEFError(RuntimeError):
    pass


@dataclass(frozen=True)
class Component:
    tag: str  # "interior" | "around-cut" | "merged-range"
    indices: tuple[int, ...]  # rectangle index, or the run of cut indices
    inequalities: tuple[str, ...]
    sample: Allocation


@dataclass(frozen=True)
class ComponentStructure:
    components: tuple[Component, ...]
    order: tuple[int, ...]  # agents sorted by ratio (original indices)
    blocks: tuple[tuple[int, ...], ...]  # equal-ratio agents, as sorted positions

    @property
    def count(self) -> int:
        return len(self.components)


def _require_two_bads(problem: Problem):
    if problem.kind != BADS or problem.p != 2:
        raise ValueError("this analysis needs a two-bad chore problem")


def _ratios(problem: Problem):
    return [Fraction(problem.u[i][0], problem.u[i][1]) for i in range(problem.n)]


def cut_allocation(n: int, i: int) -> Allocation:
    """The i/i+1 cut: first i agents share bad a, the rest share b."""
    rows = [[Fraction(1, i), ZERO]] * i + [[ZERO, Fraction(1, n - i)]] * (n - i)
    return allocation(rows)


def split_allocation(n: int, i: int, x: Fraction, y: Fraction) -> Allocation:
    """The i-split with agent i (1-based) eating the bundle (x, y)."""
    left = [[(1 - x) / (i - 1), ZERO]] * (i - 1) if i > 1 else []
    right = [[ZERO, (1 - y) / (n - i)]] * (n - i) if i < n else []
    return allocation(left + [[x, y]] + right)


def classify_m2(problem: Problem, alloc: Allocation) -> CutSplitDescriptor:
    """Tag an efficient allocation as an i/i+1-cut or an i-split.

    Assumes agents are already sorted by ratio.  An allocation where a
    higher-ratio agent eats a while a lower-ratio agent eats b cannot be
    efficient and is rejected.
    """
    _require_two_bads(problem)
    n = problem.n
    r = _ratios(problem)
    if any(r[i] > r[i + 1] for i in range(n - 1)):
        raise ValueError("agents must be sorted by ratio u_ia/u_ib")
    for i in range(n):
        for j in range(n):
            if alloc.z[i][0] > 0 and alloc.z[j][1] > 0 and i > j:
                raise NotEfficientError(
                    f"agent {i + 1} eats a while agent {j + 1} eats b"
                )
    both = [i for i in range(n) if alloc.z[i][0] > 0 and alloc.z[i][1] > 0]
    if len(both) > 1:
        raise ValueError("more than one agent eats both bads")
    if both:
        i = both[0] + 1
        x, y = alloc.z[both[0]]
        if alloc != split_allocation(n, i, x, y):
            raise ValueError("side agents do not share their bad equally")
        return CutSplitDescriptor("split", i, x=x, y=y)
    i = sum(1 for k in range(n) if alloc.z[k][0] > 0)
    if 1 <= i <= n - 1 and alloc == cut_allocation(n, i):
        return CutSplitDescriptor("cut", i)
    # boundary splits with x or y equal to zero but unequal side shares
    raise ValueError("allocation is neither a cut nor an i-split")


def _cut_is_ef(r, n: int, i: int) -> bool:
    return r[i - 1] <= Fraction(i, n - i) <= r[i]


def _interior_in(r, n: int, i: int) -> bool:
    """Eligibility of rectangle S^i for an isolated envy-free component."""
    left = i >= 2 and Fraction(i - 1, n - i + 1) < r[i - 2] < r[i - 1]
    right = i <= n - 1 and r[i - 1] < r[i] < Fraction(i, n - i)
    if i == 1:
        return right
    if i == n:
        return left
    return left and right


def _competitive_split_xy(problem: Problem, order, i: int):
    """Budget-exact bundle of the splitting agent at the competitive price."""
    n = problem.n
    ua = problem.u[order[i - 1]][0]
    ub = problem.u[order[i - 1]][1]
    x = ((n - i + 1) * ua - (i - 1) * ub) / (n * ua)
    y = (i * ub - (n - i) * ua) / (n * ub)
    return x, y


def count_ef_components(problem: Problem) -> ComponentStructure:
    """Connected components of the efficient envy-free set for two bads."""
    _require_two_bads(problem)
    n = problem.n
    raw = _ratios(problem)
    order = tuple(sorted(range(n), key=lambda i: raw[i]))
    r = [raw[i] for i in order]

    blocks = []
    start = 0
    for k in range(1, n + 1):
        if k == n or r[k] != r[start]:
            blocks.append(tuple(range(start, k)))
            start = k

    ef_cuts = [i for i in range(1, n) if _cut_is_ef(r, n, i)]
    interiors = [i for i in range(1, n + 1) if _interior_in(r, n, i)]

    components = []
    run: list[int] = []
    for i in ef_cuts + [None]:
        if run and (i is None or i != run[-1] + 1):
            tag = "around-cut" if len(run) == 1 else "merged-range"
            components.append(
                Component(
                    tag,
                    tuple(run),
                    tuple(
                        f"r_{j} <= {j}/{n - j} <= r_{j + 1}" for j in run
                    ),
                    cut_allocation(n, run[0]),
                )
            )
            run = []
        if i is not None:
            run.append(i)
    for i in interiors:
        x, y = _competitive_split_xy(problem, order, i)
        components.append(
            Component(
                "interior",
                (i,),
                (f"{i - 1}/{n - i + 1} < r_{i - 1} < r_{i} < r_{i + 1} < {i}/{n - i}",),
                split_allocation(n, i, x, y),
            )
        )
    components.sort(key=lambda c: (c.indices[0], c.tag))

    if not components:
        # fully degenerate ratios: the envy-free set is nonempty (competitive
        # divisions exist) and forms a single blob
        sorted_problem = validate_problem(
            [problem.u[i] for i in order], BADS
        )
        sample = enumerate_competitive(sorted_problem)[0].allocation
        components.append(
            Component("merged-range", tuple(range(1, n + 1)), (), sample)
        )
    return ComponentStructure(tuple(components), order, tuple(blocks))


def clone_bads(problem: Problem, target_m: int) -> Problem:
    """Replace bad b by target_m - 1 equal clones; component count carries over."""
    _require_two_bads(problem)
    if target_m < 2:
        raise ValueError("need at least two items")
    if target_m == 2:
        return problem
    k = target_m - 1
    rows = [
        [problem.u[i][0]] + [problem.u[i][1] / k] * k for i in range(problem.n)
    ]
    items = (problem.items[0],) + tuple(
        f"{problem.items[1]}{j + 1}" for j in range(k)
    )
    return validate_problem(rows, BADS, agents=problem.agents, items=items)


def aggregate_clones(alloc: Allocation) -> Allocation:
    """Map an allocation of the cloned problem back to the two-bad original.

    Each clone is a whole item worth 1/(m-1) of the original bad, so the
    aggregated share is the average of the clone shares.
    """
    k = len(alloc.z[0]) - 1
    rows = [
        (row[0], sum(row[1:], ZERO) / k) for row in alloc.z
    ]
    return Allocation(tuple(rows))


# --- discontinuity demonstration ---------------------------------------------


def _ratio_problem(ratios) -> Problem:
    return validate_problem(
        [[rr.numerator, rr.denominator] for rr in ratios], BADS
    )


DEMO_RATIOS = {
    4: (
        (Fraction(1, 5), Fraction(1, 4), Fraction(4), Fraction(5)),
        (Fraction(1, 5), Fraction(1, 4), Fraction(27, 100), Fraction(3, 10)),
    ),
    5: (
        (Fraction(1, 6), Fraction(1, 5), Fraction(2), Fraction(5, 2), Fraction(3)),
        (
            Fraction(1, 6),
            Fraction(1, 5),
            Fraction(21, 100),
            Fraction(11, 50),
            Fraction(23, 100),
        ),
    ),
}

EF_GUARANTEED = ("median-of-competitive", "max-nash")


def _select(strategy: str, problem: Problem):
    if strategy == "median-of-competitive":
        divs = enumerate_competitive(problem)
        return divs[len(divs) // 2].allocation
    if strategy == "max-nash":
        divs = enumerate_competitive(problem)
        best = max(divs, key=lambda d: _prod(d.profile))
        return best.allocation
    if strategy == "egalitarian":
        from .egalitarian import egalitarian_bads

        return egalitarian_bads(problem).allocation
    raise ValueError(f"unknown selection strategy {strategy!r}")


def _prod(profile):
    out = Fraction(1)
    for v in profile:
        out *= v
    return out


def discontinuity_demo(
    selection_strategy: str, n: int = 4, steps: int = 10_000
) -> dict:
    """Walk the ratio path from a 3-component instance to a 1-component one.

    The surviving component sits still along the whole path, so any
    single-valued envy-free selection that starts outside it must jump.
    Returns the endpoints and a path report with the largest step-to-step
    profile move against the typical per-step drift.
    """
    from .axioms import envy_report
    from .model import utility_profile

    start, end = DEMO_RATIOS[n]
    q1 = _ratio_problem(start)
    q2 = _ratio_problem(end)

    profiles = []
    envy_violations = []
    for k in range(steps + 1):
        t = Fraction(k, steps)
        ratios = [a + (b - a) * t for a, b in zip(start, end)]
        q = _ratio_problem(ratios)
        z = _select(selection_strategy, q)
        rep = envy_report(q, z)
        if rep.verdict != "holds":
            if selection_strategy in EF_GUARANTEED:
                raise SelectionNotEFError(
                    f"{selection_strategy} selected an envious allocation at step {k}"
                )
            envy_violations.append(k)
        raw = utility_profile(q, z)
        totals = q.row_totals()
        profiles.append(tuple(raw[i] / totals[i] for i in range(q.n)))

    dists = [
        max(abs(a - b) for a, b in zip(profiles[k], profiles[k + 1]))
        for k in range(steps)
    ]
    max_jump = max(dists)
    jump_step = dists.index(max_jump)
    # typical drift of the continuous stretches of the path
    per_step_bound = sorted(dists)[len(dists) // 2]
    return {
        "Q1": q1,
        "Q2": q2,
        "path_report": {
            "steps": steps,
            "max_jump": max_jump,
            "jump_step": jump_step,
            "per_step_bound": per_step_bound,
            "jump_detected": per_step_bound > 0
            and max_jump > 10 * per_step_bound,
            "envy_violations": envy_violations[:10],
            "envy_violation_count": len(envy_violations),
        },
    }
