"""Named instance corpus: deterministic builders for every fixture the tests
and demos rely on, with the exact values they are expected to produce.

Each fixture bundles a Problem with an ``expectations`` dict (profiles, prices,
division counts, component counts) that the engine must reproduce.  Builders
are pure; parameterized families (``canon_goods``, ``comp_count``, ...) accept
their size either as a keyword or baked into the name ("comp_count_4").
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .model import BADS, GOODS, Problem, problem_to_json, validate_problem

F = Fraction


class UnknownInstance(KeyError):
    """Requested corpus name does not match any fixture family."""


@dataclass(frozen=True)
class Fixture:
    name: str
    problem: Problem
    expectations: dict = field(default_factory=dict)


# --- builders -----------------------------------------------------------------


def _ex_a_goods() -> Fixture:
    q = validate_problem([[10, 6], [5, 1]], GOODS)
    return Fixture(
        "ex_a_goods",
        q,
        {
            "competitive_profile": (F(8), F(4)),
            "competitive_price": (F(5, 4), F(3, 4)),
            "egalitarian_profile": (F(64, 7), F(24, 7)),
            "division_count": 1,
        },
    )


def _ex_a_bads() -> Fixture:
    q = validate_problem([[10, 6], [5, 1]], BADS)
    return Fixture(
        "ex_a_bads",
        q,
        {
            "competitive_profile": (F(6), F(3)),
            "competitive_price": (F(5, 3), F(1, 3)),
            "egalitarian_profile": (F(48, 7), F(18, 7)),
            "division_count": 1,
        },
    )


def _goods_2x3() -> Fixture:
    """Mirror-symmetric two-agent, three-good instance; b is split in half."""
    q = validate_problem([[6, 3, 1], [1, 3, 6]], GOODS)
    return Fixture(
        "goods_2x3",
        q,
        {
            "competitive_profile": (F(15, 2), F(15, 2)),
            "competitive_price": (F(4, 5), F(2, 5), F(4, 5)),
            "egalitarian_normalized": (F(3, 4), F(3, 4)),
        },
    )


def _ex_b() -> Fixture:
    q = validate_problem([[2, 1], [0, 1]], BADS)
    return Fixture(
        "ex_b",
        q,
        {
            "competitive_price": (F(0), F(2)),
            "competitive_profile": (F(1, 2), F(1, 2)),
            "division_count": 1,
        },
    )


def _ex_c() -> Fixture:
    q = validate_problem([[1, 2], [3, 1]], BADS)
    return Fixture(
        "ex_c",
        q,
        {
            "competitive_profiles": [
                (F(2, 3), F(2)),
                (F(1), F(1)),
                (F(3, 2), F(3, 4)),
            ],
            "competitive_prices": [
                (F(3, 2), F(1, 2)),
                (F(1), F(1)),
                (F(2, 3), F(4, 3)),
            ],
            "division_count": 3,
            "egalitarian_profile": (F(12, 13), F(16, 13)),
        },
    )


def _qa() -> Fixture:
    q = validate_problem([[3, 1, 1, 0], [1, 3, 1, 4], [1, 1, 3, 4]], GOODS)
    return Fixture(
        "qa",
        q,
        {
            "egalitarian_normalized": (F(33, 59),) * 3,
            "egalitarian_row1": (F(55, 59), F(0), F(0), F(0)),
        },
    )


def _qb() -> Fixture:
    q = validate_problem([[3, 1, 1], [1, 3, 1], [1, 1, 3]], GOODS)
    return Fixture(
        "qb",
        q,
        {
            "egalitarian_profile": (F(3), F(3), F(3)),
            "egalitarian_normalized": (F(3, 5),) * 3,
        },
    )


def _canon_goods(n: int = 3) -> Fixture:
    """n - 1 single-minded agents plus one flexible agent valuing everything."""
    if n < 3:
        raise UnknownInstance("canon_goods needs n >= 3")
    rows = [[0] * (n - 1) for _ in range(n)]
    for i in range(n - 1):
        rows[i][i] = 1
    rows[n - 1] = [1] * (n - 1)
    q = validate_problem(rows, GOODS)
    return Fixture(
        f"canon_goods_{n}",
        q,
        {
            "competitive_price": (F(n, n - 1),) * (n - 1),
            "single_minded_share": F(n - 1, n),
            "flexible_share": F(1, n),
            "egalitarian_normalized_value": F(1, 2),
        },
    )


def _canon_bads(n: int = 3) -> Fixture:
    """Chore twin of canon_goods: 1 on the diagonal, 3 off, last row all ones.

    Every nonempty subset of the specialist agents supports a competitive
    division (the flexible agent picks up a sliver of each selected chore), so
    the count is at least 2^(n-1) - 1.
    """
    if n < 3:
        raise UnknownInstance("canon_bads needs n >= 3")
    rows = [[3] * (n - 1) for _ in range(n)]
    for i in range(n - 1):
        rows[i][i] = 1
    rows[n - 1] = [1] * (n - 1)
    q = validate_problem(rows, BADS)
    return Fixture(
        f"canon_bads_{n}",
        q,
        {"division_count_at_least": 2 ** (n - 1) - 1},
    )


def _t1_case2(n: int = 3) -> Fixture:
    """n agents, n + 1 chores: each owns a cheap chore, plus one all-ones chore.

    For any subset of agents sharing the extra chore equally (each keeping
    their own diagonal chore whole) the allocation is competitive, so the
    division count grows with 2^n.
    """
    if n < 2:
        raise UnknownInstance("t1_case2 needs n >= 2")
    rows = [[3] * n + [1] for _ in range(n)]
    for i in range(n):
        rows[i][i] = 1
    q = validate_problem(rows, BADS)
    return Fixture(f"t1_case2_{n}", q, {})


def _t1_max_n2(m: int = 4) -> Fixture:
    """Two agents, m chores, doubling bids; realizes the 2m - 1 division cap."""
    if m < 2:
        raise UnknownInstance("t1_max_n2 needs m >= 2")
    u1 = [F(2) ** max(k - 2, 0) for k in range(1, m)] + [F(2) ** (m - 2) + 1]
    u2 = [F(2) ** (m - 2) + 1] + [F(2) ** max(m - 1 - k, 0) for k in range(2, m + 1)]
    q = validate_problem([u1, u2], BADS)
    return Fixture(f"t1_max_n2_{m}", q, {"division_count": 2 * m - 1})


MAXSPLIT_RATIOS = {
    3: (F(1, 4), F(1), F(4)),
    4: (F(1, 4), F(1, 2), F(2), F(4)),
}

COMP_COUNT_RATIOS = {
    3: (F(1, 5), F(1, 4), F(4)),
    4: (F(1, 5), F(1, 4), F(4), F(5)),
    5: (F(1, 6), F(1, 5), F(2), F(5, 2), F(3)),
    7: (F(1, 10), F(1, 8), F(9, 10), F(1), F(5, 4), F(7), F(8)),
}


def _ratio_problem(ratios) -> Problem:
    return validate_problem(
        [[r.numerator, r.denominator] for r in ratios], BADS
    )


def _maxsplit_m2(n: int = 3) -> Fixture:
    """Two chores, ratios spread so every split window holds a division."""
    try:
        ratios = MAXSPLIT_RATIOS[n]
    except KeyError as exc:
        raise UnknownInstance(
            f"maxsplit_m2 is tabulated for n in {sorted(MAXSPLIT_RATIOS)}"
        ) from exc
    q = _ratio_problem(ratios)
    return Fixture(
        f"maxsplit_m2_{n}", q, {"ratios": ratios, "division_count": 2 * n - 1}
    )


def _comp_count(n: int = 4) -> Fixture:
    """Two chores, ratio schedule maximizing envy-free component count."""
    try:
        ratios = COMP_COUNT_RATIOS[n]
    except KeyError as exc:
        raise UnknownInstance(
            f"comp_count is tabulated for n in {sorted(COMP_COUNT_RATIOS)}"
        ) from exc
    q = _ratio_problem(ratios)
    return Fixture(
        f"comp_count_{n}",
        q,
        {"ratios": ratios, "component_count": (2 * n + 1) // 3},
    )


def _alpha(alpha=F(3, 2)) -> Fixture:
    """Three agents, two goods; the middle agent's report alpha is the lever."""
    a = F(alpha)
    if not F(1, 2) < a < 2:
        raise UnknownInstance("alpha must lie strictly between 1/2 and 2")
    q = validate_problem(
        [[3, 1], [a.numerator, a.denominator], [1, 3]], GOODS
    )
    # at report r the middle agent receives ((2 - 1/r)/3, (2 - r)/3) scaled by
    # her row; prices below are for the true report
    return Fixture(
        "alpha",
        q,
        {
            "alpha": a,
            "competitive_price": (3 * a / (1 + a), F(3) / (1 + a)),
            "z1": (F(1, 3) * (1 + 1 / a), F(0)),
            "z2": (F(1, 3) * (2 - 1 / a), F(1, 3) * (2 - a)),
            "z3": (F(0), F(1, 3) * (1 + a)),
        },
    )


def _q1(n: int = 4) -> Fixture:
    from .ef_geometry import DEMO_RATIOS

    try:
        ratios = DEMO_RATIOS[n][0]
    except KeyError as exc:
        raise UnknownInstance(f"q1 is tabulated for n in {sorted(DEMO_RATIOS)}") from exc
    return Fixture(
        f"q1_{n}",
        _ratio_problem(ratios),
        {"ratios": ratios, "component_count": (2 * n + 1) // 3},
    )


def _q2(n: int = 4) -> Fixture:
    from .ef_geometry import DEMO_RATIOS

    try:
        ratios = DEMO_RATIOS[n][1]
    except KeyError as exc:
        raise UnknownInstance(f"q2 is tabulated for n in {sorted(DEMO_RATIOS)}") from exc
    return Fixture(
        f"q2_{n}", _ratio_problem(ratios), {"ratios": ratios, "component_count": 1}
    )


def _rm_witness(n: int = 2) -> Fixture:
    """Chore instance whose shrunk variant defeats every fair-share rule."""
    from .axioms import rm_impossibility_witness

    w = rm_impossibility_witness(n)
    return Fixture(
        f"rm_witness_{n}",
        w["Q"],
        {
            "shrunk": w["Q_prime"],
            "argument": w["argument"],
        },
    )


_FAMILIES: dict[str, Callable[..., Fixture]] = {
    "ex_a_goods": _ex_a_goods,
    "ex_a_bads": _ex_a_bads,
    "goods_2x3": _goods_2x3,
    "ex_b": _ex_b,
    "ex_c": _ex_c,
    "qa": _qa,
    "qb": _qb,
    "canon_goods": _canon_goods,
    "canon_bads": _canon_bads,
    "t1_case2": _t1_case2,
    "t1_max_n2": _t1_max_n2,
    "maxsplit_m2": _maxsplit_m2,
    "comp_count": _comp_count,
    "alpha": _alpha,
    "q1": _q1,
    "q2": _q2,
    "rm_witness": _rm_witness,
}

# concrete ids shipped as JSON fixtures and listed by the corpus endpoint
DEFAULT_NAMES = (
    "ex_a_goods",
    "ex_a_bads",
    "goods_2x3",
    "ex_b",
    "ex_c",
    "qa",
    "qb",
    "canon_goods_3",
    "canon_bads_3",
    "t1_case2_3",
    "t1_max_n2_4",
    "maxsplit_m2_3",
    "comp_count_3",
    "comp_count_4",
    "comp_count_5",
    "comp_count_7",
    "alpha",
    "q1_4",
    "q2_4",
    "rm_witness_2",
)


def build(name: str, **params) -> Fixture:
    """Build a fixture by family name or concrete id ("comp_count_4")."""
    key = name.lower().replace("-", "_")
    if key in _FAMILIES:
        return _FAMILIES[key](**params)
    head, _, tail = key.rpartition("_")
    if head in _FAMILIES and tail.isdigit():
        if params:
            raise UnknownInstance(f"{name}: size is already baked into the id")
        return _FAMILIES[head](int(tail))
    raise UnknownInstance(name)


def default_corpus() -> dict[str, Fixture]:
    return {name: build(name) for name in DEFAULT_NAMES}


def export_fixtures(directory: str) -> list[str]:
    """Write every default fixture as a problem JSON file for CLI replay."""
    import json

    os.makedirs(directory, exist_ok=True)
    written = []
    for name, fx in default_corpus().items():
        path = os.path.join(directory, f"{name}.json")
        with open(path, "w") as fh:
            json.dump(problem_to_json(fx.problem), fh, indent=1)
            fh.write("\n")
        written.append(path)
    return written
