import { describe, expect, it } from "vitest";
import {
  draftFromProblem,
  emptyDraft,
  remainingPoints,
  suggestPoints,
  toProblem,
  validateDraft,
} from "../src/bidEntry";

describe("1000-point bid entry", () => {
  it("round-trips the two-agent goods example within rounding", () => {
    // rows (10, 6) and (5, 1) normalized onto 1000 points
    expect(suggestPoints([10, 6])).toEqual([625, 375]);
    const second = suggestPoints([5, 1]);
    expect(second[0]! + second[1]!).toBe(1000);
    expect(Math.abs(second[0]! - 5000 / 6)).toBeLessThanOrEqual(1);

    const draft = draftFromProblem({
      kind: "goods",
      agents: ["agent1", "agent2"],
      items: ["a", "b"],
      u: [
        ["10", "6"],
        ["5", "1"],
      ],
    });
    expect(validateDraft(draft)).toEqual([]);
    const doc = toProblem(draft);
    expect(doc.u[0]).toEqual(["625", "375"]);
  });

  it("accepts the hand-rounded entries from the examples", () => {
    const draft = emptyDraft("goods", ["p", "q"], ["a", "b"]);
    draft.points = [
      [625, 375],
      [834, 166],
    ];
    expect(validateDraft(draft)).toEqual([]);
  });

  it("tracks the remaining-points counter", () => {
    const draft = emptyDraft("goods", ["p", "q"], ["a", "b"]);
    draft.points[0] = [600, 100];
    expect(remainingPoints(draft, 0)).toBe(300);
    expect(validateDraft(draft).some((e) => e.code === "budget")).toBe(true);
  });

  it("blocks an all-zero agent with a null-row message", () => {
    const draft = emptyDraft("goods", ["p", "q"], ["a", "b"]);
    draft.points = [
      [0, 0],
      [500, 500],
    ];
    const errors = validateDraft(draft);
    expect(errors.map((e) => e.code)).toContain("null-row");
  });

  it("blocks a chores draft where every item has some zero", () => {
    const draft = emptyDraft("bads", ["p", "q"], ["a", "b"]);
    draft.points = [
      [0, 1000],
      [1000, 0],
    ];
    const errors = validateDraft(draft);
    expect(errors.map((e) => e.code)).toContain("bads-all-harmless");
  });

  it("allows a chores draft once one item bothers everyone", () => {
    const draft = emptyDraft("bads", ["p", "q"], ["a", "b"]);
    draft.points = [
      [0, 1000],
      [500, 500],
    ];
    expect(validateDraft(draft)).toEqual([]);
    expect(() => toProblem(draft)).not.toThrow();
  });
});
