import { z } from "zod";

// Wire formats of the /v1 service. Rationals are "a/b" strings.

export const RationalStr = z.string().regex(/^-?\d+(\/\d+)?$/);

export const ProblemSchema = z.object({
  kind: z.enum(["goods", "bads"]),
  agents: z.array(z.string()).min(2),
  items: z.array(z.string()).min(2),
  u: z.array(z.array(RationalStr)),
});
export type Problem = z.infer<typeof ProblemSchema>;

export const DivisionSchema = z.object({
  allocation: z.array(z.array(RationalStr)),
  price: z.array(RationalStr),
  profile: z.array(RationalStr),
  nash_product: RationalStr.optional(),
  certificate: z.unknown(),
  meta: z.record(z.string()).optional(),
  descriptor: z.unknown().optional(),
});
export type Division = z.infer<typeof DivisionSchema>;

export const SolveCompetitiveSchema = z.object({
  rule: z.literal("competitive"),
  problem: ProblemSchema,
  divisions: z.array(DivisionSchema),
  division_count: z.number().int(),
  incomplete: z.boolean(),
});
export type SolveCompetitive = z.infer<typeof SolveCompetitiveSchema>;

export const SolveEgalitarianSchema = z.object({
  rule: z.literal("egalitarian"),
  problem: ProblemSchema,
  division: z.object({
    allocation: z.array(z.array(RationalStr)),
    profile: z.array(RationalStr),
    normalized: z.array(RationalStr),
    meta: z.record(z.string()).optional(),
  }),
});
export type SolveEgalitarian = z.infer<typeof SolveEgalitarianSchema>;

const CheckSchema = z
  .object({ verdict: z.enum(["holds", "violated", "not-applicable"]) })
  .passthrough();

export const AxiomsReportSchema = z.object({
  target: z.enum(["given", "egalitarian"]),
  allocation: z.array(z.array(RationalStr)),
  profile: z.array(RationalStr),
  checks: z.record(CheckSchema),
});
export type AxiomsReport = z.infer<typeof AxiomsReportSchema>;

export const ApiErrorSchema = z
  .object({ error: z.string(), detail: z.string().optional() })
  .passthrough();
export type ApiError = z.infer<typeof ApiErrorSchema>;
