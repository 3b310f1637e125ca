// Exact rationals arrive from the API as "a/b" strings (or plain integers).
// The UI never does arithmetic on them beyond display and comparison.

export interface Rat {
  num: bigint;
  den: bigint;
}

export function parseRat(s: string): Rat {
  const m = /^(-?\d+)(?:\/(\d+))?$/.exec(s.trim());
  if (!m) throw new Error(`not a rational: ${s}`);
  const den = m[2] ? BigInt(m[2]) : 1n;
  if (den === 0n) throw new Error(`zero denominator: ${s}`);
  return { num: BigInt(m[1]!), den };
}

export function ratToNumber(s: string): number {
  const r = parseRat(s);
  return Number(r.num) / Number(r.den);
}

export function ratEquals(a: string, b: string): boolean {
  const x = parseRat(a);
  const y = parseRat(b);
  return x.num * y.den === y.num * x.den;
}

export function isZero(s: string): boolean {
  return parseRat(s).num === 0n;
}

/** Decimal display at 4 significant digits; the exact string goes in a tooltip. */
export function formatSig4(s: string): string {
  const v = ratToNumber(s);
  if (v === 0) return "0";
  if (Number.isInteger(v) && Math.abs(v) < 1e4) return String(v);
  return v.toPrecision(4).replace(/\.?0+$/, "").replace(/\.?0+e/, "e");
}
