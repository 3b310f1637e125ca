from fractions import Fraction

import pytest

from fairdiv.lp import (
    InfeasibleError,
    LinearProgram,
    UnboundedError,
    add_allocation_polytope,
    allocation_from_point,
    leximin_max,
    solve_lp,
    zvar,
)
from fairdiv.model import GOODS, normalize, utility_profile, validate_problem

F = Fraction


def test_min_of_bounds():
    lp = LinearProgram()
    lp.add_constraint({"t": 1}, "<=", 8)
    lp.add_constraint({"t": 1}, "<=", 3)
    lp.set_objective({"t": 1}, "max")
    assert solve_lp(lp).optimum == 3


def test_agent_two_takes_everything():
    q = validate_problem([[10, 6], [5, 1]], GOODS)
    lp = LinearProgram()
    add_allocation_polytope(lp, 2, 2)
    lp.set_objective({zvar(1, a): q.u[1][a] for a in range(2)}, "max")
    sol = solve_lp(lp)
    assert sol.optimum == 6
    assert sol.value(zvar(1, 0)) == 1 and sol.value(zvar(1, 1)) == 1


def test_minimization_and_fractional_data():
    lp = LinearProgram()
    lp.add_constraint({"x": 1, "y": 1}, ">=", F(3, 2))
    lp.set_objective({"x": 2, "y": "1/2"}, "min")
    sol = solve_lp(lp)
    assert sol.optimum == F(3, 4)
    assert sol.point["y"] == F(3, 2)


def test_infeasible_and_unbounded():
    lp = LinearProgram()
    lp.add_constraint({"x": 1}, "<=", 1)
    lp.add_constraint({"x": 1}, ">=", 2)
    lp.set_objective({"x": 1}, "max")
    with pytest.raises(InfeasibleError):
        solve_lp(lp)

    lp2 = LinearProgram()
    lp2.add_constraint({"x": 1, "y": -1}, "<=", 0)
    lp2.set_objective({"x": 1}, "max")
    with pytest.raises(UnboundedError):
        solve_lp(lp2)


def test_solution_satisfies_constraints_exactly():
    lp = LinearProgram()
    lp.add_constraint({"x": "1/3", "y": "1/7"}, "<=", "22/21")
    lp.add_constraint({"x": 1, "y": 2}, "<=", 9)
    lp.set_objective({"x": 3, "y": 1}, "max")
    sol = solve_lp(lp)
    x, y = sol.point["x"], sol.point["y"]
    assert x / 3 + y / 7 <= F(22, 21)
    assert x + 2 * y <= 9
    assert sol.optimum == 3 * x + y


def test_determinism():
    def run():
        lp = LinearProgram()
        add_allocation_polytope(lp, 3, 3)
        lp.set_objective({zvar(i, a): (i + 1) * (a + 2) for i in range(3) for a in range(3)}, "max")
        return solve_lp(lp)

    a, b = run(), run()
    assert a.optimum == b.optimum and a.point == b.point


def test_leximin_ex_a():
    q = normalize(validate_problem([[10, 6], [5, 1]], GOODS))
    profile, alloc = leximin_max(q)
    assert profile == (F(4, 7), F(4, 7))
    assert utility_profile(q, alloc) == profile


def test_leximin_single_minded_three_agents():
    q = normalize(validate_problem([[1, 0], [0, 1], [0, 1]], GOODS))
    profile, alloc = leximin_max(q)
    assert profile == (1, F(1, 2), F(1, 2))
    assert utility_profile(q, alloc) == profile


def test_leximin_symmetric_qb():
    q = normalize(validate_problem([[3, 1, 1], [1, 3, 1], [1, 1, 3]], GOODS))
    profile, _ = leximin_max(q)
    assert profile == (F(3, 5), F(3, 5), F(3, 5))


def test_leximin_beats_frontier_grid():
    # brute force over the 1-d frontier of a 2x2 instance: allocations where
    # agent 1 eats a prefix of items sorted by ratio
    q = normalize(validate_problem([[10, 6], [5, 1]], GOODS))
    profile, _ = leximin_max(q)
    best_seen = None
    for k in range(201):
        t = F(k, 200)
        # agent 1 gets fraction t of a (her stronger ratio is item a)
        for za, zb in ((t, 1), (1, t)):
            z = ((za, zb), (1 - za, 1 - zb))
            u1 = q.u[0][0] * za + q.u[0][1] * zb
            u2 = q.u[1][0] * (1 - za) + q.u[1][1] * (1 - zb)
            key = tuple(sorted((u1, u2)))
            if best_seen is None or key > best_seen:
                best_seen = key
    assert tuple(sorted(profile)) >= best_seen
