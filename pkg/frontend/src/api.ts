import type { ConstraintSet, FilterResponse, Meta, SolutionSample } from "./types.js";

/** Error carrying the HTTP status so contradictions (409) can be surfaced
 * inline without discarding session state. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

export interface ApiClient {
  meta(): Promise<Meta>;
  filter(constraints: ConstraintSet, sampleN: number, seed: number): Promise<FilterResponse>;
  solution(index: number): Promise<SolutionSample>;
}

async function parseOrThrow<T>(response: Response): Promise<T> {
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    const detail = (body as { error?: string }).error ?? response.statusText;
    throw new ApiError(response.status, detail);
  }
  return body as T;
}

/** fetch-backed client for the camuv-merge result service. */
export function httpClient(baseUrl: string): ApiClient {
  const root = baseUrl.replace(/\/$/, "");
  return {
    async meta(): Promise<Meta> {
      return parseOrThrow<Meta>(await fetch(`${root}/api/meta`));
    },
    async filter(constraints, sampleN, seed): Promise<FilterResponse> {
      const response = await fetch(`${root}/api/filter`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ constraints, sample_n: sampleN, seed }),
      });
      return parseOrThrow<FilterResponse>(response);
    },
    async solution(index): Promise<SolutionSample> {
      return parseOrThrow<SolutionSample>(await fetch(`${root}/api/solution/${index}`));
    },
  };
}
