"""Competitive (equal-income) divisions: verification, forest solving, and
full enumeration for bads, plus closed forms for two agents or two bads.

A division is certified by the ratio system: agent i consumes item a only if
u_ia / U_i is the best rate across agents (largest for goods, smallest for
bads), with zero prices on chores somebody does not mind.  Each consumption
forest pins down at most one utility profile, so enumeration walks spanning
forests of the bipartite agent-item graph.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .model import (
    BADS,
    GOODS,
    Allocation,
    Problem,
    TooLargeToEnumerateError,
    consumption_graph,
    is_forest,
    utility_profile,
)

FOREST_GUARD = 12
ZERO = Fraction(0)
ONE = Fraction(1)


class CompetitiveRejection(ValueError):
    """The allocation/price pair fails the competitive conditions."""

    rule = "competitive"


class ZeroUtilityAgentError(CompetitiveRejection):
    rule = "zero-utility-agent"


class PriceInconsistentError(CompetitiveRejection):
    rule = "price-inconsistent"


class InequalityViolatedError(CompetitiveRejection):
    def __init__(self, msg: str, rule: str):
        super().__init__(msg)
        self.rule = rule


class DisconnectedItemError(ValueError):
    pass


class EnumerationDeadlineError(Exception):
    """Enumeration ran past its deadline; carries what was found so far."""

    def __init__(self, partial):
        super().__init__("enumeration deadline exceeded")
        self.partial = partial


class NonTreeInputError(ValueError):
    pass


@dataclass(frozen=True)
class KKTRecord:
    agent: int
    item: int
    ratio: Fraction  # u_ia / U_i
    price: Fraction
    binding: bool  # z_ia > 0, so the ratio equals the price


@dataclass(frozen=True)
class KKTCertificate:
    kind: str
    price: tuple[Fraction, ...]
    profile: tuple[Fraction, ...]
    records: tuple[KKTRecord, ...]


@dataclass(frozen=True)
class CutSplitDescriptor:
    """Structure of a 2-agent or 2-item division: a cut between sorted
    positions, or a split of one position with interior fraction(s)."""

    kind: str  # "cut" | "split"
    index: int  # 1-based position in the sorted order
    x: Optional[Fraction] = None
    y: Optional[Fraction] = None


@dataclass(frozen=True)
class CompetitiveDivision:
    allocation: Allocation
    price: tuple[Fraction, ...]
    profile: tuple[Fraction, ...]
    certificate: KKTCertificate
    descriptor: Optional[CutSplitDescriptor] = None
    meta: tuple[tuple[str, str], ...] = field(default=())


def verify_competitive(
    problem: Problem, alloc: Allocation, price: Optional[Sequence[Fraction]] = None
) -> KKTCertificate:
    """Exact check of the competitive conditions; raises on the first failure.

    The supporting price is fully determined by the allocation (best utility
    per unit of spending across agents), so a supplied price must match the
    reconstructed one entry for entry.
    """
    n, p = problem.n, problem.p
    if alloc.n != n or alloc.p != p:
        raise CompetitiveRejection("allocation shape does not match problem")
    bads = problem.kind == BADS

    if price is not None:
        price = tuple(price)
        if len(price) != p or any(q < 0 for q in price):
            raise PriceInconsistentError("price must be a nonnegative item vector")
        if sum(price) != n:
            raise PriceInconsistentError(f"prices sum to {sum(price)}, expected {n}")
        if bads:
            for a in range(p):
                if price[a] != 0 and any(problem.u[i][a] == 0 for i in range(n)):
                    raise InequalityViolatedError(
                        f"item {problem.items[a]} is harmless to some agent "
                        f"but priced {price[a]}",
                        rule="zero-price-on-harmless",
                    )

    profile = utility_profile(problem, alloc)
    for i, v in enumerate(profile):
        if v == 0:
            raise ZeroUtilityAgentError(f"agent {problem.agents[i]} has utility 0")

    ratios = [[problem.u[i][a] / profile[i] for a in range(p)] for i in range(n)]
    implied = tuple(
        (min if bads else max)(ratios[i][a] for i in range(n)) for a in range(p)
    )
    if price is None:
        price = implied
    elif price != implied:
        a = next(a for a in range(p) if price[a] != implied[a])
        raise PriceInconsistentError(
            f"price {price[a]} on {problem.items[a]} differs from the "
            f"supported price {implied[a]}"
        )

    records = []
    for i in range(n):
        for a in range(p):
            binding = alloc.z[i][a] > 0
            if binding and ratios[i][a] != price[a]:
                j = min(
                    range(n), key=lambda k: ratios[k][a] if bads else -ratios[k][a]
                )
                raise InequalityViolatedError(
                    f"agent {problem.agents[i]} consumes {problem.items[a]} but "
                    f"agent {problem.agents[j]} offers a better rate",
                    rule="consumer-not-optimal",
                )
            records.append(KKTRecord(i, a, ratios[i][a], price[a], binding))
    return KKTCertificate(problem.kind, tuple(price), profile, tuple(records))


def _division(problem, z_rows, descriptor=None, meta=()) -> CompetitiveDivision:
    alloc = Allocation(tuple(tuple(r) for r in z_rows))
    cert = verify_competitive(problem, alloc)
    return CompetitiveDivision(
        allocation=alloc,
        price=cert.price,
        profile=cert.profile,
        certificate=cert,
        descriptor=descriptor,
        meta=tuple(meta),
    )


# --- forest solving ---------------------------------------------------------


def solve_forest(problem: Problem, forest: Iterable[tuple[int, int]]):
    """The unique candidate division whose consumption graph is the forest,
    or None when it is infeasible or fails the competitive inequalities.

    Within a tree, consumption edges pin all utility ratios; the scale comes
    from the budget identity (prices over the tree's items sum to its head
    count); the allocation itself falls out by stripping leaves.
    """
    n, p = problem.n, problem.p
    edges = sorted(set(forest))
    for i, a in edges:
        if problem.u[i][a] == 0:
            return None
    by_item: dict[int, list[int]] = {a: [] for a in range(p)}
    by_agent: dict[int, list[int]] = {i: [] for i in range(n)}
    for i, a in edges:
        by_item[a].append(i)
        by_agent[i].append(a)
    if any(not by_item[a] for a in range(p)):
        raise DisconnectedItemError("every item needs at least one consumer")
    if any(not by_agent[i] for i in range(n)):
        return None
    if not is_forest(edges, n, p):
        raise NonTreeInputError("consumption graph has a cycle")

    # relative utilities per tree: v_j / v_i = u_ja / u_ia across shared items
    v: list[Optional[Fraction]] = [None] * n
    price: list[Optional[Fraction]] = [None] * p
    for root in range(n):
        if v[root] is not None:
            continue
        v[root] = ONE
        tree_agents = [root]
        stack = [root]
        while stack:
            i = stack.pop()
            for a in by_agent[i]:
                for j in by_item[a]:
                    if v[j] is None:
                        v[j] = v[i] * problem.u[j][a] / problem.u[i][a]
                        tree_agents.append(j)
                        stack.append(j)
        tree_items = sorted({a for i in tree_agents for a in by_agent[i]})
        # budget identity: prices on the tree's items sum to its agent count
        total = sum(problem.u[by_item[a][0]][a] / v[by_item[a][0]] for a in tree_items)
        scale = total / len(tree_agents)
        for i in tree_agents:
            v[i] = v[i] * scale
        for a in tree_items:
            i = by_item[a][0]
            price[a] = problem.u[i][a] / v[i]

    # recover z by leaf stripping: leaf items take their remaining supply,
    # leaf agents spend their remaining budget
    z = [[ZERO] * p for _ in range(n)]
    supply = [ONE] * p
    budget = [ONE] * n
    live = {(i, a) for i, a in edges}
    deg_i = {i: len(by_agent[i]) for i in range(n)}
    deg_a = {a: len(by_item[a]) for a in range(p)}
    pending = list(edges)
    while pending:
        progressed = False
        for i, a in list(pending):
            if (i, a) not in live:
                continue
            if deg_a[a] == 1:
                z[i][a] += supply[a]
                budget[i] -= price[a] * supply[a]
                supply[a] = ZERO
            elif deg_i[i] == 1:
                share = budget[i] / price[a]
                z[i][a] += share
                supply[a] -= share
                budget[i] = ZERO
            else:
                continue
            live.discard((i, a))
            deg_a[a] -= 1
            deg_i[i] -= 1
            progressed = True
        pending = [e for e in pending if e in live]
        if not progressed and pending:
            raise NonTreeInputError("stripping stalled; input was not a forest")

    if any(x < 0 for row in z for x in row) or any(s != 0 for s in supply):
        return None
    try:
        return _division(problem, z)
    except CompetitiveRejection:
        return None


# --- harmless chores --------------------------------------------------------


def _split_harmless(problem: Problem):
    """Columns of a bads problem with a zero entry get price 0 and go to the
    agents who do not mind them; returns (kept columns, harmless assignment)."""
    n, p = problem.n, problem.p
    kept, harmless = [], {}
    for a in range(p):
        zero_agents = [i for i in range(n) if problem.u[i][a] == 0]
        if problem.kind == BADS and zero_agents:
            harmless[a] = zero_agents
        else:
            kept.append(a)
    return kept, harmless


def _lift(problem, kept, harmless, sub_rows, descriptor=None, meta=()):
    """Embed a division of the kept columns back into the full problem."""
    n, p = problem.n, problem.p
    z = [[ZERO] * p for _ in range(n)]
    for sub_a, a in enumerate(kept):
        for i in range(n):
            z[i][a] = sub_rows[i][sub_a]
    for a, zero_agents in harmless.items():
        share = ONE / len(zero_agents)
        for i in zero_agents:
            z[i][a] = share
    return _division(problem, z, descriptor=descriptor, meta=meta)


# --- enumeration ------------------------------------------------------------


def _forests(n: int, p: int, allowed: list[list[int]]):
    """Spanning forests of the bipartite graph: per item pick a nonempty
    consumer set whose members sit in pairwise distinct components so far."""
    parent = list(range(n + p))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    def rec(a, chosen):
        if a == p:
            if all(any(i in s for s in chosen) for i in range(n)):
                yield [(i, b) for b, s in enumerate(chosen) for i in s]
            return
        options = allowed[a]
        for r in range(1, len(options) + 1):
            for combo in itertools.combinations(options, r):
                roots = {find(i) for i in combo}
                if len(roots) < r:
                    continue
                saved = parent.copy()
                anchor = n + a
                for i in combo:
                    parent[find(i)] = anchor
                yield from rec(a + 1, chosen + [combo])
                parent[:] = saved

    yield from rec(0, [])


def _dedup(divisions):
    seen = set()
    out = []
    for d in divisions:
        if d is not None and d.profile not in seen:
            seen.add(d.profile)
            out.append(d)
    return out


def enumerate_competitive(
    problem: Problem,
    method: str = "auto",
    guard: int = FOREST_GUARD,
    deadline: Optional[float] = None,
) -> list[CompetitiveDivision]:
    """All competitive divisions, one representative per utility profile.

    Bads problems with two agents or two items use the sorted-ratio closed
    forms; everything else enumerates consumption forests (guarded by size).
    Results are sorted by profile for a deterministic order.  ``deadline`` is
    an absolute ``time.monotonic()`` stamp; past it the forest walk raises
    :class:`EnumerationDeadlineError` with the divisions found so far.
    """
    if method == "auto" and problem.kind == BADS:
        if problem.n == 2:
            return competitive_bads_n2(problem)
        if problem.p == 2:
            return competitive_bads_m2(problem)
    if problem.n + problem.p > guard:
        raise TooLargeToEnumerateError(
            f"forest enumeration needs n + p <= {guard}, got {problem.n + problem.p}"
        )

    def finish(divisions):
        return sorted(_dedup(divisions), key=lambda d: d.profile)

    def check_deadline(divisions):
        import time

        if deadline is not None and time.monotonic() > deadline:
            raise EnumerationDeadlineError(finish(divisions))

    if problem.kind == BADS:
        kept, harmless = _split_harmless(problem)
        divisions = []
        for sub in _enumerate_positive(problem, kept):
            check_deadline(divisions)
            try:
                divisions.append(_lift(problem, kept, harmless, sub))
            except CompetitiveRejection:
                continue
        return finish(divisions)

    allowed = [
        [i for i in range(problem.n) if problem.u[i][a] > 0] for a in range(problem.p)
    ]
    divisions = []
    for forest in _forests(problem.n, problem.p, allowed):
        check_deadline(divisions)
        divisions.append(solve_forest(problem, forest))
    return finish(divisions)


def _enumerate_positive(problem: Problem, kept: list[int]):
    """Sub-allocations (rows over kept columns) of every competitive division
    of the strictly positive restriction of a bads problem."""
    n = problem.n
    if not kept:
        return
    sub_u = [[problem.u[i][a] for a in kept] for i in range(n)]
    allowed = [list(range(n)) for _ in kept]
    for forest in _forests(n, len(kept), allowed):
        rows = _solve_forest_raw(sub_u, BADS, forest)
        if rows is not None:
            yield rows


def _solve_forest_raw(u, kind, forest):
    """solve_forest on a raw matrix (possibly a single column), returning the
    allocation rows without the final certificate (the caller re-verifies on
    the full problem)."""
    from .model import Problem as _P

    n, p = len(u), len(u[0])
    prob = _P(
        agents=tuple(f"agent{i + 1}" for i in range(n)),
        items=tuple(f"col{a + 1}" for a in range(p)),
        kind=kind,
        u=tuple(tuple(row) for row in u),
    )
    div = solve_forest(prob, forest)
    return None if div is None else div.allocation.z


# --- closed forms: two agents, any number of bads ---------------------------


def competitive_bads_n2(problem: Problem) -> list[CompetitiveDivision]:
    """All competitive divisions of a 2-agent bads problem.

    Equal-ratio items merge into composites; with strictly increasing ratios
    every division is a prefix cut or a one-item split, characterized by the
    sandwich inequalities on cumulative utilities.
    """
    assert problem.kind == BADS and problem.n == 2
    kept, harmless = _split_harmless(problem)
    u1 = [problem.u[0][a] for a in kept]
    u2 = [problem.u[1][a] for a in kept]

    # merge equal ratios; each composite remembers its member columns
    order = sorted(range(len(kept)), key=lambda a: (u1[a] / u2[a], a))
    groups: list[list[int]] = []
    for a in order:
        if groups and u1[a] / u2[a] == u1[groups[-1][0]] / u2[groups[-1][0]]:
            groups[-1].append(a)
        else:
            groups.append([a])
    g1 = [sum(u1[a] for a in g) for g in groups]
    g2 = [sum(u2[a] for a in g) for g in groups]
    m = len(groups)

    def cum1(k):  # agent 1's disutility for composites 1..k
        return sum(g1[:k], ZERO)

    def cum2(k):  # agent 2's disutility for composites k..m (1-based)
        return sum(g2[k - 1 :], ZERO)

    divisions = []

    def emit(shares1, descriptor, meta=()):
        # shares1[g] is agent 1's fraction of composite g, spread uniformly
        rows = [[ZERO] * len(kept) for _ in range(2)]
        for g, grp in enumerate(groups):
            for a in grp:
                rows[0][a] = shares1[g]
                rows[1][a] = 1 - shares1[g]
        try:
            divisions.append(
                _lift(problem, kept, harmless, rows, descriptor=descriptor, meta=meta)
            )
        except CompetitiveRejection:
            pass

    for k in range(1, m + 1):
        # k-split: both agents share composite k
        left = cum1(k - 1) / g1[k - 1]
        right = cum2(k + 1) / g2[k - 1] if k < m else ZERO
        gap = left - right
        if -1 < gap < 1:
            x = (1 - gap) / 2
            if 0 < x < 1:
                emit(
                    [ONE] * (k - 1) + [x] + [ZERO] * (m - k),
                    CutSplitDescriptor("split", k, x=x),
                )
        elif gap == 1 or gap == -1:
            # degenerate split collapsing onto a cut; the cut branch covers it
            pass
        # k/k+1-cut: agent 1 takes composites 1..k
        if k < m:
            ratio_k = g1[k - 1] / g2[k - 1]
            ratio_k1 = g1[k] / g2[k]
            mid = cum1(k) / cum2(k + 1)
            if ratio_k <= mid <= ratio_k1:
                meta = ()
                if ratio_k == mid or mid == ratio_k1:
                    meta = (("generic", "false"),)
                emit(
                    [ONE] * k + [ZERO] * (m - k),
                    CutSplitDescriptor("cut", k),
                    meta=meta,
                )

    return _dedup(divisions)


# --- closed forms: two bads, any number of agents ---------------------------


def competitive_bads_m2(problem: Problem) -> list[CompetitiveDivision]:
    """All competitive divisions of a bads problem with exactly two items."""
    assert problem.kind == BADS and problem.p == 2
    kept, harmless = _split_harmless(problem)
    if len(kept) < 2:
        return _single_column_divisions(problem, kept, harmless)

    n = problem.n
    ua = [problem.u[i][0] for i in range(n)]
    ub = [problem.u[i][1] for i in range(n)]
    order = sorted(range(n), key=lambda i: (ua[i] / ub[i], i))
    r = [ua[i] / ub[i] for i in order]

    divisions = []

    def emit(sorted_rows, descriptor, meta=()):
        rows = [None] * n
        for pos, i in enumerate(order):
            rows[i] = sorted_rows[pos]
        try:
            divisions.append(
                _division(problem, rows, descriptor=descriptor, meta=meta)
            )
        except CompetitiveRejection:
            pass

    for i in range(1, n + 1):  # 1-based position in ratio order
        lo = Fraction(i - 1, n - i + 1)
        hi = Fraction(i, n - i) if i < n else None
        if (r[i - 1] > lo) and (hi is None or r[i - 1] < hi):
            # strict i-split: agent at position i eats fractions of both bads
            uia, uib = ua[order[i - 1]], ub[order[i - 1]]
            x = ((n - i + 1) * uia - (i - 1) * uib) / (n * uia)
            y = (i * uib - (n - i) * uia) / (n * uib)
            left = [((1 - x) / (i - 1), ZERO)] * (i - 1) if i > 1 else []
            right = [(ZERO, (1 - y) / (n - i))] * (n - i) if i < n else []
            emit(left + [(x, y)] + right, CutSplitDescriptor("split", i, x=x, y=y))
        if i < n and r[i - 1] <= Fraction(i, n - i) <= r[i]:
            meta = ()
            if r[i - 1] == Fraction(i, n - i) or Fraction(i, n - i) == r[i]:
                meta = (("generic", "false"),)
            sorted_rows = [(Fraction(1, i), ZERO)] * i + [
                (ZERO, Fraction(1, n - i))
            ] * (n - i)
            emit(sorted_rows, CutSplitDescriptor("cut", i), meta=meta)

    return _dedup(divisions)


def _single_column_divisions(problem, kept, harmless):
    """Bads problem whose only harmful column is shared by everyone."""
    n = problem.n
    rows = [[Fraction(1, n)] for _ in range(n)]
    return [_lift(problem, kept, harmless, rows)]


# --- goods ------------------------------------------------------------------


def competitive_goods(
    problem: Problem, method: str = "auto", guard: int = FOREST_GUARD
) -> CompetitiveDivision:
    """The unique competitive division of a goods problem.

    `method="numeric"` runs a damped proportional-response iteration first and
    exactifies the answer through the implied demand graph; the default walks
    consumption forests directly, stopping at the first certified division.
    """
    assert problem.kind == GOODS
    if method == "numeric":
        div = _goods_numeric(problem)
        if div is not None:
            return div
    if problem.n + problem.p > guard:
        raise TooLargeToEnumerateError(
            f"forest enumeration needs n + p <= {guard}, "
            f"got {problem.n + problem.p}"
        )
    allowed = [
        [i for i in range(problem.n) if problem.u[i][a] > 0] for a in range(problem.p)
    ]
    for forest in _forests(problem.n, problem.p, allowed):
        div = solve_forest(problem, forest)
        if div is not None:
            return div
    raise CompetitiveRejection("no competitive division found (should not happen)")


def _goods_numeric(problem: Problem, tol: float = 1e-9, max_iter: int = 50000):
    """Proportional response on normalized floats, then exact repair.

    Returns None when the numeric phase fails to localize a certifiable
    demand graph, so the caller can fall back to exact enumeration.
    """
    n, p = problem.n, problem.p
    u = [[float(problem.u[i][a]) for a in range(p)] for i in range(n)]
    totals = [sum(row) for row in u]
    bids = [[u[i][a] / totals[i] for a in range(p)] for i in range(n)]
    for _ in range(max_iter):
        prices = [sum(bids[i][a] for i in range(n)) for a in range(p)]
        x = [[bids[i][a] / prices[a] for a in range(p)] for i in range(n)]
        new = []
        delta = 0.0
        for i in range(n):
            ui = sum(u[i][a] * x[i][a] for a in range(p))
            row = [u[i][a] * x[i][a] / ui for a in range(p)]
            # light damping keeps oscillations down on near-degenerate inputs
            row = [0.5 * row[a] + 0.5 * bids[i][a] for a in range(p)]
            delta = max(delta, max(abs(row[a] - bids[i][a]) for a in range(p)))
            new.append(row)
        bids = new
        if delta < tol:
            break
    prices = [sum(bids[i][a] for i in range(n)) for a in range(p)]
    # demand graph: edges within a relative whisker of the best rate
    allowed_edges = []
    for a in range(p):
        consumers = []
        for i in range(n):
            ui = sum(u[i][b] * bids[i][b] / prices[b] for b in range(p))
            rate = u[i][a] / ui if ui else 0.0
            consumers.append((rate, i))
        best = max(rate for rate, _ in consumers)
        allowed_edges.append(
            [i for rate, i in consumers if rate > best * (1 - 1e-6)]
        )
    for forest in _forests(n, p, allowed_edges):
        div = solve_forest(problem, forest)
        if div is not None:
            return div
    return None


def nash_product(profile: Sequence[Fraction]) -> Fraction:
    out = ONE
    for v in profile:
        out *= v
    return out
