import type { Problem } from "./types";

// 1000-point bid entry. Each agent distributes exactly 1000 points over the
// items; the draft compiles to the engine's problem JSON (points are already
// integers, and the engine is scale invariant so no renormalization happens).

export const BUDGET = 1000;

export interface BidDraft {
  kind: "goods" | "bads";
  agents: string[];
  items: string[];
  points: number[][];
}

export function emptyDraft(
  kind: "goods" | "bads",
  agents: string[],
  items: string[]
): BidDraft {
  return {
    kind,
    agents,
    items,
    points: agents.map(() => items.map(() => 0)),
  };
}

export function remainingPoints(draft: BidDraft, agent: number): number {
  const row = draft.points[agent];
  if (!row) throw new Error(`no agent ${agent}`);
  return BUDGET - row.reduce((s, v) => s + v, 0);
}

export interface DraftError {
  code: string;
  message: string;
}

/** Mirrors the server-side admissibility rules so errors show inline. */
export function validateDraft(draft: BidDraft): DraftError[] {
  const errors: DraftError[] = [];
  const { points, agents, items } = draft;
  if (agents.length < 2 || items.length < 2) {
    errors.push({ code: "too-small", message: "need at least two agents and two items" });
    return errors;
  }
  points.forEach((row, i) => {
    if (row.some((v) => v < 0 || !Number.isInteger(v))) {
      errors.push({
        code: "bad-points",
        message: `${agents[i]}: points must be nonnegative integers`,
      });
    }
    const rem = remainingPoints(draft, i);
    if (rem !== 0) {
      errors.push({
        code: "budget",
        message: `${agents[i]} has ${rem} point(s) ${rem > 0 ? "left" : "too many"}`,
      });
    }
    if (row.every((v) => v === 0)) {
      errors.push({
        code: "null-row",
        message: `${agents[i]} values every item at zero`,
      });
    }
  });
  items.forEach((item, a) => {
    if (points.every((row) => row[a] === 0)) {
      errors.push({ code: "null-column", message: `${item} gets zero from everyone` });
    }
  });
  if (draft.kind === "bads") {
    const someFullColumn = items.some((_, a) =>
      points.every((row) => (row[a] ?? 0) > 0)
    );
    if (!someFullColumn) {
      errors.push({
        code: "bads-all-harmless",
        message:
          "every chore is harmless to someone; at least one chore must bother every agent",
      });
    }
  }
  return errors;
}

export function toProblem(draft: BidDraft): Problem {
  const errors = validateDraft(draft);
  if (errors.length) {
    throw new Error(errors.map((e) => e.message).join("; "));
  }
  return {
    kind: draft.kind,
    agents: [...draft.agents],
    items: [...draft.items],
    u: draft.points.map((row) => row.map((v) => String(v))),
  };
}

/**
 * Largest-remainder rounding of arbitrary weights onto the 1000-point budget,
 * used to prefill the grid from an imported problem.
 */
export function suggestPoints(weights: number[]): number[] {
  const total = weights.reduce((s, v) => s + v, 0);
  if (total <= 0) return weights.map(() => 0);
  const exact = weights.map((v) => (v * BUDGET) / total);
  const floors = exact.map(Math.floor);
  let leftover = BUDGET - floors.reduce((s, v) => s + v, 0);
  const order = exact
    .map((v, idx) => ({ idx, frac: v - Math.floor(v) }))
    .sort((a, b) => b.frac - a.frac);
  for (const { idx } of order) {
    if (leftover <= 0) break;
    floors[idx] = (floors[idx] ?? 0) + 1;
    leftover -= 1;
  }
  return floors;
}

export function draftFromProblem(doc: Problem): BidDraft {
  const points = doc.u.map((row) =>
    suggestPoints(
      row.map((s) => {
        const [num, den] = s.split("/");
        return Number(num) / (den ? Number(den) : 1);
      })
    )
  );
  return { kind: doc.kind, agents: [...doc.agents], items: [...doc.items], points };
}
