import {
  ApiErrorSchema,
  AxiomsReportSchema,
  ProblemSchema,
  SolveCompetitiveSchema,
  SolveEgalitarianSchema,
  type AxiomsReport,
  type Problem,
  type SolveCompetitive,
  type SolveEgalitarian,
} from "./types";

// Thin client over the /v1 endpoints. Concurrent calls carry a sequence
// number; a response that is no longer the latest for its channel resolves to
// null so the view can drop it (debounce happens at the call sites).

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiRequestError extends Error {
  constructor(
    public status: number,
    public code: string,
    detail?: string
  ) {
    super(detail ?? code);
  }
}

export class ApiClient {
  private seq: Record<string, number> = {};

  constructor(
    private baseUrl: string = "",
    private fetchImpl: FetchLike = (...args) => fetch(...args)
  ) {}

  private nextSeq(channel: string): number {
    this.seq[channel] = (this.seq[channel] ?? 0) + 1;
    return this.seq[channel]!;
  }

  private isStale(channel: string, seq: number): boolean {
    return this.seq[channel] !== seq;
  }

  private async post(channel: string, path: string, body: unknown): Promise<unknown | null> {
    const seq = this.nextSeq(channel);
    const res = await this.fetchImpl(this.baseUrl + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    if (this.isStale(channel, seq)) return null;
    return this.unwrap(res);
  }

  private async unwrap(res: Response): Promise<unknown> {
    const doc = await res.json();
    if (!res.ok) {
      const err = ApiErrorSchema.safeParse(doc);
      throw new ApiRequestError(
        res.status,
        err.success ? err.data.error : "internal",
        err.success ? err.data.detail : undefined
      );
    }
    return doc;
  }

  async solve(
    problem: Problem,
    opts: { enumerate?: boolean } = {}
  ): Promise<SolveCompetitive | null> {
    const doc = await this.post("solve", "/v1/solve", {
      problem,
      rule: "competitive",
      enumerate: opts.enumerate ?? true,
    });
    return doc === null ? null : SolveCompetitiveSchema.parse(doc);
  }

  async solveEgalitarian(problem: Problem): Promise<SolveEgalitarian | null> {
    const doc = await this.post("egalitarian", "/v1/solve", {
      problem,
      rule: "egalitarian",
    });
    return doc === null ? null : SolveEgalitarianSchema.parse(doc);
  }

  async axioms(
    problem: Problem,
    allocation: string[][],
    checks: string[] = ["fair-share", "envy"]
  ): Promise<AxiomsReport | null> {
    const doc = await this.post("axioms", "/v1/axioms", {
      problem,
      allocation,
      checks,
    });
    return doc === null ? null : AxiomsReportSchema.parse(doc);
  }

  async corpusNames(): Promise<string[]> {
    const res = await this.fetchImpl(this.baseUrl + "/v1/corpus");
    const doc = (await this.unwrap(res)) as { names: string[] };
    return doc.names;
  }

  async corpusProblem(name: string): Promise<Problem> {
    const res = await this.fetchImpl(this.baseUrl + `/v1/corpus/${name}`);
    const doc = (await this.unwrap(res)) as { problem: unknown };
    return ProblemSchema.parse(doc.problem);
  }
}
