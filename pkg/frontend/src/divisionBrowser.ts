import { isZero, ratToNumber } from "./rational";
import type {
  AxiomsReport,
  Division,
  Problem,
  SolveCompetitive,
  SolveEgalitarian,
} from "./types";

// Cards for the division browser: one per competitive division, with badges
// computed from the axioms endpoint (never locally).

export interface Badge {
  agent: number;
  kind: "fair-share-exact" | "fair-share-strict";
}

export interface Card {
  index: number;
  division: Division;
  badges: Badge[];
  envyFree: boolean;
  /** per-agent utility normalized by the full-manna value, for the bars */
  bars: number[];
}

function rowTotal(problem: Problem, i: number): number {
  const row = problem.u[i];
  if (!row) throw new Error(`no agent row ${i}`);
  return row.reduce((s, v) => s + ratToNumber(v), 0);
}

/**
 * Cards are ordered the way the write-ups tabulate chore divisions: first
 * agent's disutility descending. Goods keep the API's ascending order.
 */
export function buildCards(
  solve: SolveCompetitive,
  axioms: AxiomsReport[]
): Card[] {
  if (axioms.length !== solve.divisions.length) {
    throw new Error("one axioms report per division required");
  }
  const cards = solve.divisions.map((division, index) => {
    const report = axioms[index]!;
    const fs = report.checks["fair-share"] as
      | { verdict: string; margins?: string[] }
      | undefined;
    const badges: Badge[] = [];
    if (fs?.verdict === "holds" && fs.margins) {
      fs.margins.forEach((m, agent) => {
        badges.push({
          agent,
          kind: isZero(m) ? "fair-share-exact" : "fair-share-strict",
        });
      });
    }
    const envyFree = report.checks["envy"]?.verdict === "holds";
    const bars = division.profile.map(
      (v, i) => ratToNumber(v) / rowTotal(solve.problem, i)
    );
    return { index, division, badges, envyFree, bars };
  });
  if (solve.problem.kind === "bads") {
    cards.sort(
      (a, b) =>
        ratToNumber(b.division.profile[0]!) - ratToNumber(a.division.profile[0]!)
    );
  }
  return cards;
}

export interface EgalitarianOverlay {
  bars: number[];
  profile: string[];
}

export function egalitarianOverlay(report: SolveEgalitarian): EgalitarianOverlay {
  return {
    bars: report.division.normalized.map(ratToNumber),
    profile: report.division.profile,
  };
}

export interface Selection {
  problem: Problem;
  cardIndex: number;
  division: Division;
}

export function exportSelection(problem: Problem, card: Card): string {
  const sel: Selection = {
    problem,
    cardIndex: card.index,
    division: card.division,
  };
  return JSON.stringify(sel, null, 1);
}

export function importSelection(text: string): Selection {
  const doc = JSON.parse(text) as Selection;
  if (!doc.problem || !doc.division || typeof doc.cardIndex !== "number") {
    throw new Error("not a selection export");
  }
  return doc;
}
