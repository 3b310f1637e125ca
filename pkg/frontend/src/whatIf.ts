import { ratEquals } from "./rational";
import type { Division, Problem, SolveCompetitive } from "./types";

// What-if panel: edit one bid, re-solve through the API, and report which
// divisions persisted. A within-slack lost-bid edit leaves everything in
// place, which the panel surfaces as a "no change" banner.

export function applyEdit(
  problem: Problem,
  agent: number,
  item: number,
  value: string
): Problem {
  const u = problem.u.map((row, i) =>
    row.map((v, a) => (i === agent && a === item ? value : v))
  );
  return { ...problem, u };
}

function sameDivision(a: Division, b: Division): boolean {
  if (a.price.length !== b.price.length) return false;
  if (!a.price.every((v, k) => ratEquals(v, b.price[k]!))) return false;
  return a.allocation.every((row, i) =>
    row.every((v, k) => ratEquals(v, b.allocation[i]![k]!))
  );
}

export interface Diff {
  persisted: number[];
  dropped: number[];
  added: number[];
  noChange: boolean;
}

export function diffDivisions(
  before: SolveCompetitive,
  after: SolveCompetitive
): Diff {
  const persisted: number[] = [];
  const dropped: number[] = [];
  const matched = new Set<number>();
  before.divisions.forEach((d, i) => {
    const j = after.divisions.findIndex(
      (e, k) => !matched.has(k) && sameDivision(d, e)
    );
    if (j >= 0) {
      matched.add(j);
      persisted.push(i);
    } else {
      dropped.push(i);
    }
  });
  const added = after.divisions
    .map((_, k) => k)
    .filter((k) => !matched.has(k));
  return {
    persisted,
    dropped,
    added,
    noChange: dropped.length === 0 && added.length === 0,
  };
}

export function banner(diff: Diff): string {
  if (diff.noChange) return "no change";
  return `${diff.persisted.length} persisted, ${diff.dropped.length} changed, ${diff.added.length} new`;
}
