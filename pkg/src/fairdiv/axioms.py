"""Executable axiom probes: fair share, envy, equal treatment, resource
monotonicity, independence of lost bids, and profitable-misreport demos.

Probes compare utility levels, never allocation identity, so rules that pick
different but welfare-equivalent allocations are treated as equal.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .competitive import (
    CompetitiveRejection,
    enumerate_competitive,
    verify_competitive,
)
from .efficiency import is_efficient
from .egalitarian import egalitarian
from .model import (
    BADS,
    GOODS,
    Allocation,
    ModelError,
    Problem,
    consumption_graph,
    utility_profile,
)

HOLDS = "holds"
VIOLATED = "violated"
NOT_APPLICABLE = "not-applicable"


class InvalidSubproblemError(ValueError):
    pass


class NotALostBidError(ValueError):
    pass


class WrongDirectionError(ValueError):
    pass


class GraphChangedError(RuntimeError):
    pass


@dataclass(frozen=True)
class AxiomReport:
    axiom: str
    verdict: str
    margins: tuple = ()
    witness: Optional[dict] = None

    def __post_init__(self):
        if self.verdict == VIOLATED and self.witness is None:
            raise ValueError("a violated verdict needs a witness")


@dataclass(frozen=True)
class RuleHandle:
    """A deterministic rule: problem in, list of (profile, allocation) out."""

    name: str
    solve: Callable[[Problem], tuple]


def rule_handle(name: str) -> RuleHandle:
    if name == "egalitarian":
        def _eg(q):
            d = egalitarian(q)
            return ((d.profile, d.allocation),)

        return RuleHandle(name, _eg)
    if name in ("competitive", "competitive-goods", "competitive-bads"):
        def _comp(q):
            return tuple(
                (d.profile, d.allocation) for d in enumerate_competitive(q)
            )

        return RuleHandle(name, _comp)
    raise ValueError(f"unknown rule handle {name!r}")


# --- fair share / envy / equal treatment ------------------------------------


def fair_share_report(problem: Problem, profile) -> AxiomReport:
    """FSG margins per agent, with an SFSG sub-verdict in the witness.

    Goods must sit at or above the equal-split utility, bads at or below.
    Strictness is required exactly when the equal split is inefficient.
    """
    shares = problem.fair_shares()
    sign = -1 if problem.kind == BADS else 1
    margins = tuple(sign * (profile[i] - shares[i]) for i in range(problem.n))
    fsg_ok = all(m >= 0 for m in margins)

    from .model import equal_split

    split_eff = is_efficient(problem, equal_split(problem)).efficient
    if split_eff:
        sfsg = HOLDS if all(m == 0 for m in margins) else (
            HOLDS if fsg_ok else VIOLATED
        )
    else:
        sfsg = HOLDS if all(m > 0 for m in margins) else VIOLATED
    detail = {"sfsg": sfsg, "equal_split_efficient": split_eff}
    if not fsg_ok or sfsg == VIOLATED:
        detail["profile"] = tuple(profile)
    return AxiomReport(
        "fair-share",
        HOLDS if fsg_ok else VIOLATED,
        margins,
        witness=detail,
    )


def envy_report(problem: Problem, alloc: Allocation) -> AxiomReport:
    """All ordered pairs: does i prefer j's bundle to her own?"""
    sign = -1 if problem.kind == BADS else 1
    envious = []
    margins = []
    for i in range(problem.n):
        own = sum(problem.u[i][a] * alloc.z[i][a] for a in range(problem.p))
        for j in range(problem.n):
            if i == j:
                continue
            other = sum(problem.u[i][a] * alloc.z[j][a] for a in range(problem.p))
            m = sign * (own - other)
            margins.append(((i, j), m))
            if m < 0:
                envious.append((i, j))
    if envious:
        return AxiomReport(
            "no-envy", VIOLATED, tuple(margins), witness={"envious_pairs": envious}
        )
    return AxiomReport("no-envy", HOLDS, tuple(margins))


def ete_check(problem: Problem, profile) -> AxiomReport:
    """Agents with identical utility rows must end at identical utility."""
    pairs = [
        (i, j)
        for i in range(problem.n)
        for j in range(i + 1, problem.n)
        if problem.u[i] == problem.u[j]
    ]
    if not pairs:
        return AxiomReport("equal-treatment", NOT_APPLICABLE)
    bad = [(i, j) for i, j in pairs if profile[i] != profile[j]]
    margins = tuple(((i, j), profile[i] - profile[j]) for i, j in pairs)
    if bad:
        return AxiomReport(
            "equal-treatment", VIOLATED, margins, witness={"unequal_pairs": bad}
        )
    return AxiomReport("equal-treatment", HOLDS, margins)


# --- resource monotonicity ---------------------------------------------------


def rm_probe(problem: Problem, removed_items, handle: RuleHandle) -> AxiomReport:
    """Remove items and compare every pair of selected profiles.

    Shrinking the manna must not raise anyone's utility level, for goods
    (less to share) and for bads alike (fewer chores, so weakly less
    disutility for everybody).
    """
    removed = set(removed_items)
    kept = [nm for nm in problem.items if nm not in removed]
    if len(kept) == len(problem.items):
        raise InvalidSubproblemError("nothing removed")
    try:
        sub = problem.restrict(kept)
    except (ModelError, ValueError) as exc:
        raise InvalidSubproblemError(str(exc)) from exc

    before = handle.solve(problem)
    after = handle.solve(sub)
    for u_profile, _ in before:
        for v_profile, _ in after:
            gains = [
                (i, v_profile[i] - u_profile[i])
                for i in range(problem.n)
                if v_profile[i] > u_profile[i]
            ]
            if gains:
                return AxiomReport(
                    "resource-monotonicity",
                    VIOLATED,
                    tuple(gains),
                    witness={
                        "removed": sorted(removed),
                        "profile_before": u_profile,
                        "profile_after": v_profile,
                    },
                )
    return AxiomReport("resource-monotonicity", HOLDS)


def rm_impossibility_witness(n: int) -> dict:
    """Two-bads instance pair on which no efficient FSG rule can be RM.

    One group barely minds bad a, the other barely minds b.  Shrinking a
    (treating the shrunk bad as a whole item) forces, by fair share alone,
    so much of b onto the a-tolerant group that their disutility must rise.
    """
    if n < 2:
        raise ValueError("need at least two agents")
    if n == 2:
        q_rows = [[Fraction(1), Fraction(4)], [Fraction(4), Fraction(1)]]
        shrink = Fraction(1, 9)
        n1, n2 = 1, 1
        high = Fraction(4)
    else:
        half = n // 2
        n2 = half
        n1 = n - half
        high = Fraction(5 * half)
        q_rows = [[Fraction(1), high]] * n1 + [[high, Fraction(1)]] * n2
        shrink = Fraction(1, 10 * half)

    from .model import validate_problem

    q = validate_problem(q_rows, BADS)
    q_prime = q.scale_column(0, shrink)

    # fair share of the shrunk manna for each b-averse agent
    share2 = (high * shrink + 1) / n
    # their total consumption of b is capped by that share, the rest lands
    # on the a-tolerant group at disutility `high` per unit
    b_left = 1 - n2 * share2
    lower_bound = high * b_left
    feasible_before = Fraction(1)  # group total when each eats its cheap bad
    argument = {
        "group_sizes": (n1, n2),
        "fair_share_cap": share2,
        "b_forced_on_group1": b_left,
        "group1_after_lower_bound": lower_bound,
        "group1_before_upper_bound": feasible_before,
    }
    assert lower_bound > feasible_before
    return {"Q": q, "Q_prime": q_prime, "argument": argument}


# --- independence of lost bids ------------------------------------------------


def ilb_probe(
    problem: Problem, handle: RuleHandle, agent: int, item: int, new_bid
) -> AxiomReport:
    """Perturb one bid the agent is not consuming; the output must not move."""
    old = problem.u[agent][item]
    new_bid = Fraction(new_bid)
    if problem.kind == GOODS and not new_bid < old:
        raise WrongDirectionError("goods: a lost bid may only be lowered")
    if problem.kind == BADS and not new_bid > old:
        raise WrongDirectionError("bads: a lost bid may only be raised")

    out = handle.solve(problem)
    lost = [(prof, z) for prof, z in out if z.z[agent][item] == 0]
    if not lost and handle.name == "egalitarian":
        # single-valued rule: any bid the agent does not fully win is "cheap
        # talk" she can shade in the slack direction, so hold the output to
        # the same invariance
        lost = [(prof, z) for prof, z in out if z.z[agent][item] < 1]
    if not lost:
        raise NotALostBidError(
            f"agent {agent} consumes item {item} in every selected allocation"
        )
    perturbed = problem.with_entry(agent, item, new_bid)

    if handle.name == "egalitarian":
        (new_prof, _), = handle.solve(perturbed)
        for prof, _ in lost:
            if new_prof != prof:
                return AxiomReport(
                    "independence-of-lost-bids",
                    VIOLATED,
                    witness={"profile_before": prof, "profile_after": new_prof},
                )
        return AxiomReport("independence-of-lost-bids", HOLDS)

    for prof, z in lost:
        try:
            verify_competitive(perturbed, z)
        except CompetitiveRejection as exc:
            return AxiomReport(
                "independence-of-lost-bids",
                VIOLATED,
                witness={"profile_before": prof, "rejection": str(exc)},
            )
    return AxiomReport("independence-of-lost-bids", HOLDS)


# --- profitable misreports -----------------------------------------------------


def misreport_demo(problem: Problem, agent: int, step=Fraction(1, 10)) -> dict:
    """Build a simple misreport for the egalitarian rule on bads and measure
    the reporter's true gain.

    Winning bids (whole item) are inflated, losing bids deflated, fractional
    bids left alone.  The step is halved until the consumption graph of the
    perturbed solution matches the original one (up to 20 times).
    """
    if problem.kind != BADS:
        raise ValueError("the demo covers bads; goods are probe-only")
    base = egalitarian(problem)
    z = base.allocation
    graph = consumption_graph(z)
    row = problem.u[agent]
    winning = [a for a in range(problem.p) if z.z[agent][a] == 1]
    losing = [a for a in range(problem.p) if z.z[agent][a] == 0 and row[a] > 0]
    if not winning and not losing:
        raise NotALostBidError("no whole or empty entry to misreport on")

    delta = Fraction(step)
    for _ in range(20):
        new_row = list(row)
        for a in winning:
            new_row[a] = row[a] * (1 + delta)
        for a in losing:
            new_row[a] = row[a] * (1 - delta)
        perturbed = problem.with_row(agent, new_row)
        d2 = egalitarian(perturbed)
        if consumption_graph(d2.allocation) == graph:
            true_before = sum(row[a] * z.z[agent][a] for a in range(problem.p))
            true_after = sum(
                row[a] * d2.allocation.z[agent][a] for a in range(problem.p)
            )
            return {
                "misreport": tuple(new_row),
                "gain": true_after - true_before,
                "step": delta,
            }
        delta /= 2
    raise GraphChangedError("consumption graph keeps moving; step exhausted")


def alpha_misreport_demo(alpha: float, tol: float = 1e-6) -> dict:
    """Middle agent of the three-agent two-good instance [(3,1), (alpha,1),
    (1,3)]: her best reported bid on good a is sqrt(alpha), found by ternary
    search on the true-utility response computed by the competitive engine.
    """
    from .competitive import competitive_goods
    from .model import validate_problem

    if not 0.5 < alpha < 2:
        raise ValueError("the instance needs 1/2 < alpha < 2")
    alpha_q = Fraction(alpha).limit_denominator(10**9)

    def response(report: Fraction) -> Fraction:
        q = validate_problem(
            [[3, 1], [report, 1], [1, 3]], GOODS
        )
        d = competitive_goods(q)
        za, zb = d.allocation.z[1]
        return alpha_q * za + zb

    lo, hi = Fraction(1, 2), Fraction(2)
    while hi - lo > Fraction(tol).limit_denominator(10**9) / 4:
        m1 = lo + (hi - lo) / 3
        m2 = hi - (hi - lo) / 3
        if response(m1) < response(m2):
            lo = m1
        else:
            hi = m2
    best = (lo + hi) / 2
    return {
        "best_report": best,
        "sqrt_alpha": alpha**0.5,
        "true_bid": alpha_q,
        "gain": response(best) - response(alpha_q),
    }


# --- characterization consistency ----------------------------------------------


def containment_probe(handle: RuleHandle, problems) -> AxiomReport:
    """Check that the handle's output contains a competitive profile on each
    instance (the characterization says efficiency + ILB + ETE forces that)."""
    missing = []
    for q in problems:
        targets = {d.profile for d in enumerate_competitive(q)}
        got = {prof for prof, _ in handle.solve(q)}
        if not targets & got:
            missing.append({"problem": q, "competitive": sorted(targets)})
    if missing:
        return AxiomReport(
            "contains-competitive", VIOLATED, witness={"missing": missing}
        )
    return AxiomReport("contains-competitive", HOLDS)
