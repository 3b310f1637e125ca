"""Exact-rational linear programming: a small two-phase simplex and leximin.

Everything runs over `fractions.Fraction` with Bland's rule on a canonical
variable order, so a given LP always returns the same optimal vertex.
Desk-scale problems only (tens of variables); no sparse machinery.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Mapping

from .model import Allocation, Problem, as_fraction

ZERO = Fraction(0)
ONE = Fraction(1)


class InfeasibleError(Exception):
    pass


class UnboundedError(Exception):
    pass


@dataclass
class LinearProgram:
    """Max/min of a linear form over {x >= 0 : constraints}.

    Variables are identified by arbitrary hashable names; their canonical
    order (used by Bland's rule) is insertion order.
    """

    sense: str = "max"
    _vars: list[Hashable] = field(default_factory=list)
    _index: dict[Hashable, int] = field(default_factory=dict)
    _constraints: list[tuple[dict[int, Fraction], str, Fraction]] = field(default_factory=list)
    _objective: dict[int, Fraction] = field(default_factory=dict)

    def variable(self, name: Hashable) -> Hashable:
        if name not in self._index:
            self._index[name] = len(self._vars)
            self._vars.append(name)
        return name

    def add_constraint(self, coeffs: Mapping[Hashable, object], op: str, rhs) -> None:
        if op not in ("<=", ">=", "=="):
            raise ValueError(f"bad constraint operator {op!r}")
        row = {}
        for name, c in coeffs.items():
            c = as_fraction(c)
            if c != 0:
                self.variable(name)
                row[self._index[name]] = c
        self._constraints.append((row, op, as_fraction(rhs)))

    def set_objective(self, coeffs: Mapping[Hashable, object], sense: str = "max") -> None:
        if sense not in ("max", "min"):
            raise ValueError(f"bad objective sense {sense!r}")
        self.sense = sense
        self._objective = {}
        for name, c in coeffs.items():
            c = as_fraction(c)
            if c != 0:
                self.variable(name)
                self._objective[self._index[name]] = c


@dataclass(frozen=True)
class LPSolution:
    optimum: Fraction
    point: dict[Hashable, Fraction]

    def value(self, name: Hashable) -> Fraction:
        return self.point.get(name, ZERO)


def solve_lp(lp: LinearProgram) -> LPSolution:
    """Exact optimum and one optimal vertex; raises Infeasible/Unbounded."""
    nvars = len(lp._vars)
    # objective as a maximization
    sign = ONE if lp.sense == "max" else -ONE
    obj = {j: sign * c for j, c in lp._objective.items()}

    # build equality rows with slack variables, rhs >= 0
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    nslack = sum(1 for _, op, _ in lp._constraints if op != "==")
    total = nvars + nslack
    snext = nvars
    for coeffs, op, b in lp._constraints:
        row = [ZERO] * total
        for j, c in coeffs.items():
            row[j] = c
        if op == "<=":
            row[snext] = ONE
            snext += 1
        elif op == ">=":
            row[snext] = -ONE
            snext += 1
        if b < 0:
            row = [-v for v in row]
            b = -b
        rows.append(row)
        rhs.append(b)

    m = len(rows)
    # phase 1: artificial variable per row
    width = total + m
    tableau = [rows[i] + [ONE if k == i else ZERO for k in range(m)] + [rhs[i]] for i in range(m)]
    basis = [total + i for i in range(m)]
    cost = [ZERO] * total + [-ONE] * m + [ZERO]
    for i in range(m):  # price out artificials
        cost = [c + t for c, t in zip(cost, tableau[i])]
    _simplex(tableau, basis, cost, width)
    if cost[-1] != 0:
        raise InfeasibleError("no feasible point")
    _drive_out_artificials(tableau, basis, total)
    # drop artificial columns
    for i in range(len(tableau)):
        tableau[i] = tableau[i][:total] + [tableau[i][-1]]

    # phase 2
    cost = [obj.get(j, ZERO) for j in range(total)] + [ZERO]
    for i, b in enumerate(basis):
        if cost[b] != 0:
            f = cost[b]
            cost = [c - f * t for c, t in zip(cost, tableau[i])]
    _simplex(tableau, basis, cost, total)

    point_by_index = {}
    for i, b in enumerate(basis):
        if b < nvars:
            point_by_index[b] = tableau[i][-1]
    point = {lp._vars[j]: point_by_index.get(j, ZERO) for j in range(nvars)}
    return LPSolution(optimum=sign * -cost[-1], point=point)


def _simplex(tableau, basis, cost, width) -> None:
    """Primal simplex on the reduced-cost row, Bland's rule; mutates in place."""
    m = len(tableau)
    while True:
        enter = next((j for j in range(width) if cost[j] > 0), None)
        if enter is None:
            return
        best = None
        for i in range(m):
            a = tableau[i][enter]
            if a > 0:
                ratio = tableau[i][-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            raise UnboundedError("objective unbounded above")
        _pivot(tableau, basis, cost, best[1], enter)


def _pivot(tableau, basis, cost, i, j) -> None:
    piv = tableau[i][j]
    tableau[i] = [v / piv for v in tableau[i]]
    for k in range(len(tableau)):
        if k != i and tableau[k][j] != 0:
            f = tableau[k][j]
            tableau[k] = [v - f * w for v, w in zip(tableau[k], tableau[i])]
    f = cost[j]
    if f != 0:
        cost[:] = [v - f * w for v, w in zip(cost, tableau[i])]
    basis[i] = j


def _drive_out_artificials(tableau, basis, total) -> None:
    """Pivot zero-level artificial variables out of the basis where possible."""
    for i in range(len(tableau) - 1, -1, -1):
        if basis[i] >= total:
            enter = next((j for j in range(total) if tableau[i][j] != 0), None)
            if enter is None:
                # redundant row
                del tableau[i]
                del basis[i]
            else:
                piv = tableau[i][enter]
                tableau[i] = [v / piv for v in tableau[i]]
                for k in range(len(tableau)):
                    if k != i and tableau[k][enter] != 0:
                        f = tableau[k][enter]
                        tableau[k] = [v - f * w for v, w in zip(tableau[k], tableau[i])]
                basis[i] = enter


# --- allocation polytope helpers -------------------------------------------


def zvar(i: int, a: int) -> tuple:
    return ("z", i, a)


def add_allocation_polytope(lp: LinearProgram, n: int, p: int) -> None:
    """Variables z_ia >= 0 with every item column summing to 1."""
    for i in range(n):
        for a in range(p):
            lp.variable(zvar(i, a))
    for a in range(p):
        lp.add_constraint({zvar(i, a): 1 for i in range(n)}, "==", 1)


def allocation_from_point(sol: LPSolution, n: int, p: int) -> Allocation:
    return Allocation(tuple(tuple(sol.value(zvar(i, a)) for a in range(p)) for i in range(n)))


def _utility_row(problem: Problem, i: int) -> dict:
    return {zvar(i, a): problem.u[i][a] for a in range(problem.p)}


def leximin_max(problem: Problem) -> tuple[tuple[Fraction, ...], Allocation]:
    """Leximin-maximal utility profile over the feasible allocations (goods).

    Iterative scheme: maximize the minimum over the active agents, then freeze
    every active agent whose utility cannot be pushed above that minimum (one
    probe LP each), and repeat on the rest.
    """
    n, p = problem.n, problem.p
    frozen: dict[int, Fraction] = {}
    active = set(range(n))
    while active:
        lp = LinearProgram()
        lp.variable("t")
        add_allocation_polytope(lp, n, p)
        for i in active:
            row = _utility_row(problem, i)
            row["t"] = -1
            lp.add_constraint(row, ">=", 0)
        for i, v in frozen.items():
            lp.add_constraint(_utility_row(problem, i), ">=", v)
        lp.set_objective({"t": 1}, "max")
        t_star = solve_lp(lp).optimum

        saturated = []
        for i in sorted(active):
            if len(active) == 1:
                saturated.append(i)
                break
            probe = LinearProgram()
            add_allocation_polytope(probe, n, p)
            for j in active:
                probe.add_constraint(_utility_row(problem, j), ">=", t_star)
            for j, v in frozen.items():
                probe.add_constraint(_utility_row(problem, j), ">=", v)
            probe.set_objective(_utility_row(problem, i), "max")
            if solve_lp(probe).optimum == t_star:
                saturated.append(i)
        if not saturated:
            raise RuntimeError("leximin round found no saturated agent")
        for i in saturated:
            frozen[i] = t_star
            active.discard(i)

    final = LinearProgram()
    add_allocation_polytope(final, n, p)
    for i, v in frozen.items():
        final.add_constraint(_utility_row(problem, i), ">=", v)
    final.set_objective({}, "max")
    sol = solve_lp(final)
    alloc = allocation_from_point(sol, n, p)
    profile = tuple(frozen[i] for i in range(n))
    return profile, alloc
