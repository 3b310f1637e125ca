"""JSON report builders shared by the CLI and the HTTP service.

Both front ends serialize through :func:`dumps`, so the same request always
produces byte-identical output.  All rationals render as "a/b" strings.
"""
from __future__ import annotations

import dataclasses
import json
import time
from fractions import Fraction
from typing import Optional

from .axioms import (
    AxiomReport,
    envy_report,
    ete_check,
    fair_share_report,
    misreport_demo,
    rm_impossibility_witness,
)
from .competitive import (
    CompetitiveDivision,
    EnumerationDeadlineError,
    FOREST_GUARD,
    enumerate_competitive,
    nash_product,
    verify_competitive,
)
from .corpus import DEFAULT_NAMES, build
from .ef_geometry import count_ef_components, discontinuity_demo
from .efficiency import is_efficient
from .egalitarian import EgalitarianDivision, egalitarian
from .model import (
    Allocation,
    Problem,
    allocation,
    format_fraction,
    problem_to_json,
    utility_profile,
)


def to_jsonable(value):
    """Recursive conversion to plain JSON types; fractions become strings."""
    if isinstance(value, Fraction):
        return format_fraction(value)
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, (int, str, float)):
        return value
    if isinstance(value, Problem):
        return problem_to_json(value)
    if isinstance(value, Allocation):
        return [[format_fraction(v) for v in row] for row in value.z]
    if dataclasses.is_dataclass(value):
        return {
            f.name: to_jsonable(getattr(value, f.name))
            for f in dataclasses.fields(value)
        }
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [to_jsonable(v) for v in items]
    raise TypeError(f"cannot serialize {type(value).__name__}")


def dumps(report: dict) -> str:
    return json.dumps(report, indent=1, sort_keys=False) + "\n"


def division_to_json(d: CompetitiveDivision) -> dict:
    out = {
        "allocation": to_jsonable(d.allocation),
        "price": to_jsonable(d.price),
        "profile": to_jsonable(d.profile),
        "nash_product": format_fraction(nash_product(d.profile)),
        "certificate": to_jsonable(d.certificate),
        "meta": dict(d.meta),
    }
    if d.descriptor is not None:
        out["descriptor"] = to_jsonable(d.descriptor)
    return out


def egalitarian_to_json(d: EgalitarianDivision) -> dict:
    return {
        "allocation": to_jsonable(d.allocation),
        "profile": to_jsonable(d.profile),
        "normalized": to_jsonable(d.normalized),
        "meta": dict(d.meta),
    }


def solve_report(
    problem: Problem,
    rule: str,
    enumerate_all: bool = False,
    guard: int = FOREST_GUARD,
    deadline_s: Optional[float] = None,
    verify: bool = False,
) -> dict:
    """One stop for both rules; competitive output is a division list."""
    report = {"rule": rule, "problem": problem_to_json(problem)}
    if rule == "egalitarian":
        report["division"] = egalitarian_to_json(egalitarian(problem))
        return report
    if rule != "competitive":
        raise ValueError(f"unknown rule {rule!r}")
    stamp = time.monotonic() + deadline_s if deadline_s else None
    incomplete = False
    try:
        divs = enumerate_competitive(problem, guard=guard, deadline=stamp)
    except EnumerationDeadlineError as exc:
        divs = exc.partial
        incomplete = True
    if verify:
        for d in divs:
            cert = verify_competitive(problem, d.allocation, d.price)
            if cert != d.certificate:
                raise AssertionError("certificate replay mismatch")
    if not enumerate_all and divs:
        divs = [max(divs, key=lambda d: nash_product(d.profile))]
    report["divisions"] = [division_to_json(d) for d in divs]
    report["division_count"] = len(divs)
    report["incomplete"] = incomplete
    return report


KNOWN_CHECKS = ("fair-share", "envy", "ete", "efficient", "competitive")


def axioms_report(
    problem: Problem,
    checks,
    alloc: Optional[Allocation] = None,
    profile=None,
) -> dict:
    """Run the requested axiom checks against one allocation.

    Without an explicit allocation the egalitarian division is used (it is
    single-valued, so the report stays deterministic).
    """
    checks = list(checks)
    unknown = [c for c in checks if c not in KNOWN_CHECKS]
    if unknown:
        raise ValueError(f"unknown checks: {', '.join(unknown)}")
    target = "given"
    if alloc is None:
        d = egalitarian(problem)
        alloc, profile = d.allocation, d.profile
        target = "egalitarian"
    elif profile is None:
        profile = utility_profile(problem, alloc)
    reports = {}
    for check in checks:
        if check == "fair-share":
            reports[check] = to_jsonable(fair_share_report(problem, profile))
        elif check == "envy":
            reports[check] = to_jsonable(envy_report(problem, alloc))
        elif check == "ete":
            reports[check] = to_jsonable(ete_check(problem, profile))
        elif check == "efficient":
            res = is_efficient(problem, alloc)
            reports[check] = {
                "verdict": "holds" if res.efficient else "violated",
                "witness": to_jsonable(res.witness),
            }
        elif check == "competitive":
            try:
                cert = verify_competitive(problem, alloc)
                reports[check] = {
                    "verdict": "holds",
                    "price": to_jsonable(cert.price),
                }
            except ValueError as exc:
                reports[check] = {
                    "verdict": "violated",
                    "rule": getattr(exc, "rule", "competitive"),
                    "detail": str(exc),
                }
    return {
        "target": target,
        "allocation": to_jsonable(alloc),
        "profile": to_jsonable(profile),
        "checks": reports,
    }


def components_report(problem: Problem) -> dict:
    cs = count_ef_components(problem)
    return {
        "count": cs.count,
        "order": list(cs.order),
        "blocks": [list(b) for b in cs.blocks],
        "components": [
            {
                "tag": c.tag,
                "indices": list(c.indices),
                "inequalities": list(c.inequalities),
                "sample": to_jsonable(c.sample),
            }
            for c in cs.components
        ],
    }


def corpus_listing() -> dict:
    return {"names": list(DEFAULT_NAMES)}


def corpus_report(name: str) -> dict:
    fx = build(name)
    return {
        "name": fx.name,
        "problem": problem_to_json(fx.problem),
        "expectations": to_jsonable(fx.expectations),
    }


def demo_report(which: str) -> dict:
    """Canned demonstrations: selection discontinuity, egalitarian misreport,
    and the no-monotonic-fair-rule witness."""
    if which == "discontinuity":
        out = discontinuity_demo("median-of-competitive", n=4, steps=400)
        return {
            "which": which,
            "Q1": problem_to_json(out["Q1"]),
            "Q2": problem_to_json(out["Q2"]),
            "component_counts": {
                "Q1": count_ef_components(out["Q1"]).count,
                "Q2": count_ef_components(out["Q2"]).count,
            },
            "path_report": to_jsonable(out["path_report"]),
        }
    if which == "misreport":
        fx = build("ex_a_bads")
        out = misreport_demo(fx.problem, 0)
        return {
            "which": which,
            "problem": problem_to_json(fx.problem),
            "agent": 0,
            "misreport": to_jsonable(out["misreport"]),
            "true_gain": to_jsonable(out["gain"]),
            "step": to_jsonable(out["step"]),
        }
    if which == "rm":
        w = rm_impossibility_witness(2)
        return {
            "which": which,
            "problem": problem_to_json(w["Q"]),
            "shrunk": problem_to_json(w["Q_prime"]),
            "argument": to_jsonable(w["argument"]),
        }
    raise ValueError(f"unknown demo {which!r}")


def parse_allocation(rows) -> Allocation:
    return allocation(rows)
