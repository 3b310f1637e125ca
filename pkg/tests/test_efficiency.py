import random
from fractions import Fraction

import pytest

from fairdiv.efficiency import (
    Cycle,
    NotEfficientError,
    _all_simple_cycles,
    cycle_product,
    is_efficient,
    is_generic,
    reduce_to_forest,
)
from fairdiv.model import (
    BADS,
    GOODS,
    TooLargeToEnumerateError,
    allocation,
    consumption_graph,
    equal_split,
    is_forest,
    utility_profile,
    validate_problem,
)

F = Fraction

EX_A = validate_problem([[10, 6], [5, 1]], GOODS)
EX_C = validate_problem([[1, 2], [3, 1]], BADS)


def test_competitive_allocation_is_efficient():
    z = allocation([["1/5", 1], ["4/5", 0]])
    assert is_efficient(EX_A, z).efficient


def test_equal_split_inefficient_with_witness():
    res = is_efficient(EX_A, equal_split(EX_A))
    assert not res.efficient
    w = utility_profile(EX_A, res.witness)
    base = utility_profile(EX_A, equal_split(EX_A))
    assert all(a >= b for a, b in zip(w, base)) and w != base


def test_bads_efficiency_sign():
    # giving the whole manna to the low-disutility split is efficient for EX_C
    zc1 = allocation([[1, "1/4"], [0, "3/4"]])
    assert is_efficient(EX_C, zc1).efficient
    # swapping specialities is wasteful
    bad = allocation([[0, 1], [1, 0]])
    res = is_efficient(EX_C, bad)
    assert not res.efficient
    w = utility_profile(EX_C, res.witness)
    assert all(a <= b for a, b in zip(w, utility_profile(EX_C, bad)))


def test_single_item_goes_to_max_ratio_agent():
    q = validate_problem([[5, 1], [2, 1]], GOODS)
    # item a wholly to agent 1 (who values it more relative to nothing else at stake)
    assert is_efficient(q, allocation([[1, 0], [0, 1]])).efficient


def test_cycle_product_ex_c():
    c = Cycle((0, 1), (0, 1))
    assert cycle_product(EX_C, c) == F(1, 6)
    # reversed direction gives the reciprocal
    rev = Cycle((1, 0), (0, 1))
    assert cycle_product(EX_C, rev) == 6


def test_cycle_product_rank_one():
    q = validate_problem([[2, 4], [1, 2]], GOODS)
    assert cycle_product(q, Cycle((0, 1), (0, 1))) == 1


def test_reduce_to_forest_noop_on_forest():
    z = allocation([["1/5", 1], ["4/5", 0]])
    assert reduce_to_forest(EX_A, z) == z


def test_reduce_to_forest_rank_one():
    q = validate_problem([[1, 1], [1, 1]], GOODS)
    z = equal_split(q)
    out = reduce_to_forest(q, z)
    assert utility_profile(q, out) == (1, 1)
    assert is_forest(consumption_graph(out), 2, 2)


def test_reduce_to_forest_rejects_inefficient_cycle():
    z = equal_split(EX_A)  # cycle with product != 1
    with pytest.raises(NotEfficientError):
        reduce_to_forest(EX_A, z)


def test_reduce_to_forest_3x3():
    # proportional rows 1 and 2 allow a profile-neutral cycle
    q = validate_problem([[2, 2, 1], [4, 4, 2], [1, 1, 5]], GOODS)
    z = allocation(
        [
            ["1/2", "1/4", 0],
            ["1/2", "3/4", 0],
            [0, 0, 1],
        ]
    )
    out = reduce_to_forest(q, z)
    assert utility_profile(q, out) == utility_profile(q, z)
    assert is_forest(consumption_graph(out), 3, 3)
    zeros = sum(1 for row in out.z for v in row if v == 0)
    assert zeros >= 4  # (n-1)(p-1)


def test_is_generic():
    assert is_generic(EX_C)
    assert not is_generic(validate_problem([[2, 4], [1, 2]], GOODS))  # rank 1
    assert not is_generic(validate_problem([[2, 1], [0, 1]], BADS))  # zero entry
    with pytest.raises(TooLargeToEnumerateError):
        is_generic(validate_problem([[1] * 7 for _ in range(6)], GOODS))


def test_simple_cycle_enumeration_counts():
    # K_{2,p}: one cycle per item pair
    assert sum(1 for _ in _all_simple_cycles(2, 4)) == 6
    # K_{3,3}: 9 four-cycles plus 6 six-cycles
    assert sum(1 for _ in _all_simple_cycles(3, 3)) == 15


def test_random_efficient_vertices_reduce_cleanly():
    rng = random.Random(7)
    for _ in range(20):
        n, p = rng.randint(2, 3), rng.randint(2, 3)
        u = [[F(rng.randint(1, 10)) for _ in range(p)] for _ in range(n)]
        q = validate_problem(u, GOODS)
        # a weighted utilitarian optimum is efficient; weights all 1
        from fairdiv.lp import LinearProgram, add_allocation_polytope, allocation_from_point, solve_lp, zvar

        lp = LinearProgram()
        add_allocation_polytope(lp, n, p)
        lp.set_objective(
            {zvar(i, a): q.u[i][a] for i in range(n) for a in range(p)}, "max"
        )
        sol = solve_lp(lp)
        z = allocation_from_point(sol, n, p)
        out = reduce_to_forest(q, z)
        assert utility_profile(q, out) == utility_profile(q, z)
        assert is_forest(consumption_graph(out), n, p)
