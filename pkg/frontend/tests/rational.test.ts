import { describe, expect, it } from "vitest";
import {
  formatSig4,
  isZero,
  parseRat,
  ratEquals,
  ratToNumber,
} from "../src/rational";

describe("rational strings", () => {
  it("parses integers and fractions", () => {
    expect(parseRat("3/4")).toEqual({ num: 3n, den: 4n });
    expect(parseRat("7")).toEqual({ num: 7n, den: 1n });
    expect(() => parseRat("1.5")).toThrow();
  });

  it("compares exactly", () => {
    expect(ratEquals("2/4", "1/2")).toBe(true);
    expect(ratEquals("2/3", "3/2")).toBe(false);
    expect(isZero("0")).toBe(true);
    expect(isZero("0/5")).toBe(true);
  });

  it("renders 4 significant digits with exact hover text untouched", () => {
    expect(ratToNumber("3/2")).toBe(1.5);
    expect(formatSig4("1/3")).toBe("0.3333");
    expect(formatSig4("55/59")).toBe("0.9322");
    expect(formatSig4("2")).toBe("2");
    expect(formatSig4("0")).toBe("0");
  });
});
