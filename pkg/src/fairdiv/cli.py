"""Command line front end.

Prints the JSON report on stdout (same bytes as the HTTP service) and a small
human-readable table on stderr.  Exit codes: 0 success, 2 validation error,
3 enumeration guard exceeded.
"""
from __future__ import annotations

import json
import os
import sys

import click

from . import reports
from .corpus import UnknownInstance
from .model import ModelError, TooLargeToEnumerateError, load_problem

EXIT_VALIDATION = 2
EXIT_GUARD = 3


def _guard() -> int:
    return int(os.environ.get("FAIRDIV_GUARD", "12"))


def _deadline() -> float:
    return float(os.environ.get("FAIRDIV_DEADLINE", "30"))


def _emit(report: dict, table_lines) -> None:
    sys.stdout.write(reports.dumps(report))
    for line in table_lines:
        click.echo(line, err=True)


def _fail(exc: Exception, code: int):
    payload = exc.payload() if hasattr(exc, "payload") else {
        "error": "validation",
        "detail": str(exc),
    }
    click.echo(json.dumps(payload), err=True)
    sys.exit(code)


def _load(path: str):
    try:
        return load_problem(path)
    except (ModelError, ValueError, OSError, KeyError) as exc:
        _fail(exc if isinstance(exc, ModelError) else ValueError(str(exc)),
              EXIT_VALIDATION)


@click.group()
def main():
    """Exact fair division of goods and chores."""


@main.command()
@click.option("--rule", type=click.Choice(["egalitarian", "competitive"]), required=True)
@click.option("--in", "path", required=True, type=click.Path(exists=True))
@click.option("--enumerate", "enumerate_all", is_flag=True, default=False)
@click.option("--verify", is_flag=True, default=False,
              help="replay every KKT certificate and fail on mismatch")
def solve(rule, path, enumerate_all, verify):
    """Solve a problem file with the chosen rule."""
    problem = _load(path)
    try:
        report = reports.solve_report(
            problem,
            rule,
            enumerate_all=enumerate_all,
            guard=_guard(),
            deadline_s=_deadline(),
            verify=verify,
        )
    except TooLargeToEnumerateError as exc:
        _fail(exc, EXIT_GUARD)
    except ModelError as exc:
        _fail(exc, EXIT_VALIDATION)
    table = []
    if rule == "egalitarian":
        d = report["division"]
        table.append("egalitarian profile: " + "  ".join(d["profile"]))
        for agent, row in zip(problem.agents, d["allocation"]):
            table.append(f"  {agent}: " + "  ".join(row))
    else:
        table.append(f"{report['division_count']} competitive division(s)")
        for k, d in enumerate(report["divisions"], 1):
            table.append(
                f"  [{k}] price=({', '.join(d['price'])})"
                f" profile=({', '.join(d['profile'])})"
            )
    _emit(report, table)


@main.command()
@click.option("--in", "path", required=True, type=click.Path(exists=True))
@click.option("--checks", default="fair-share,envy,ete",
              help="comma separated: " + ",".join(reports.KNOWN_CHECKS))
@click.option("--allocation", "alloc_path", type=click.Path(exists=True),
              help="JSON matrix to check instead of the egalitarian division")
def axioms(path, checks, alloc_path):
    """Run axiom checks against an allocation (egalitarian by default)."""
    problem = _load(path)
    alloc = None
    if alloc_path:
        with open(alloc_path) as fh:
            doc = json.load(fh)
        try:
            alloc = reports.parse_allocation(
                doc["allocation"] if isinstance(doc, dict) else doc
            )
        except (ModelError, KeyError, TypeError) as exc:
            _fail(ModelError(f"bad allocation file: {exc}"), EXIT_VALIDATION)
    try:
        report = reports.axioms_report(
            problem, [c.strip() for c in checks.split(",") if c.strip()], alloc
        )
    except (ModelError, ValueError) as exc:
        _fail(exc, EXIT_VALIDATION)
    table = [
        f"  {name}: {rep['verdict']}" for name, rep in report["checks"].items()
    ]
    _emit(report, [f"checks against the {report['target']} allocation:"] + table)


@main.command()
@click.option("--in", "path", required=True, type=click.Path(exists=True))
def components(path):
    """Count connected components of the efficient envy-free set (two bads)."""
    problem = _load(path)
    try:
        report = reports.components_report(problem)
    except (ModelError, ValueError) as exc:
        _fail(exc, EXIT_VALIDATION)
    table = [f"{report['count']} component(s)"] + [
        f"  {c['tag']} at {c['indices']}" for c in report["components"]
    ]
    _emit(report, table)


@main.command()
@click.option("--name", default=None, help="fixture id; omit to list all")
def corpus(name):
    """Show a named fixture, or the list of shipped fixture ids."""
    try:
        report = reports.corpus_report(name) if name else reports.corpus_listing()
    except UnknownInstance as exc:
        _fail(ModelError(f"unknown instance: {exc}"), EXIT_VALIDATION)
    table = [name] if name else report["names"]
    _emit(report, table)


@main.command()
@click.option("--which", type=click.Choice(["discontinuity", "misreport", "rm"]),
              required=True)
def demo(which):
    """Run a canned demonstration and print its report."""
    report = reports.demo_report(which)
    _emit(report, [f"demo: {which}"])


if __name__ == "__main__":
    main()
