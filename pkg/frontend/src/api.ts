/** Typed client for the session service. All numbers pass through verbatim. */

export interface ObjectiveValues {
  profit: number;
  waste: number;
  unmet: number;
}

export interface FarmerArea {
  farmer: string;
  area: number;
}

export interface VarietyArea {
  variety: string;
  area: number;
}

export interface PlantedSummary {
  by_farmer: FarmerArea[];
  by_variety: VarietyArea[];
  total: number;
}

export interface AlternativeCard {
  id: string;
  objectives: ObjectiveValues;
  planted_summary: PlantedSummary | null;
}

export interface VoterRow {
  voter_id: string;
  weight: number;
}

export interface RankingEntry {
  alternative: string;
  points: number;
  rank: number;
}

export interface RankingDocument {
  schema_version: number;
  kind: string;
  entries: RankingEntry[];
}

export type SessionState = "draft" | "voting" | "closed";

export interface SessionSummary {
  id: string;
  state: SessionState;
  alternatives: AlternativeCard[];
  voters: VoterRow[];
  ballot_count: number;
  missing_voters: string[];
  result: RankingDocument | null;
}

export interface TokenGrant {
  voter_id: string;
  token: string;
}

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(code: string, message: string, status: number) {
    super(message);
    this.name = "ApiError";
    this.code = code;
    this.status = status;
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ServiceClient {
  private readonly baseUrl: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl: string, fetchFn?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(`${this.baseUrl}${path}`, {
        method,
        headers: body === undefined ? undefined : { "content-type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (cause) {
      throw new ApiError("UNREACHABLE", `service unreachable: ${String(cause)}`, 0);
    }
    const text = await response.text();
    let parsed: unknown = null;
    if (text.length > 0) {
      try {
        parsed = JSON.parse(text);
      } catch {
        parsed = null;
      }
    }
    if (!response.ok) {
      const error = (parsed as { error?: { code?: string; message?: string } } | null)?.error;
      throw new ApiError(
        error?.code ?? "UNKNOWN",
        error?.message ?? `request failed with status ${response.status}`,
        response.status,
      );
    }
    return parsed as T;
  }

  createSession(): Promise<SessionSummary> {
    return this.request<SessionSummary>("POST", "/sessions");
  }

  listSessions(): Promise<{ sessions: string[] }> {
    return this.request<{ sessions: string[] }>("GET", "/sessions");
  }

  getSession(id: string): Promise<SessionSummary> {
    return this.request<SessionSummary>("GET", `/sessions/${encodeURIComponent(id)}`);
  }

  importAlternatives(id: string, document: unknown): Promise<SessionSummary> {
    return this.request<SessionSummary>(
      "POST",
      `/sessions/${encodeURIComponent(id)}/alternatives`,
      document,
    );
  }

  registerVoter(id: string, voterId: string, weight: number): Promise<TokenGrant> {
    return this.request<TokenGrant>("POST", `/sessions/${encodeURIComponent(id)}/voters`, {
      voter_id: voterId,
      weight,
    });
  }

  openVoting(id: string): Promise<SessionSummary> {
    return this.request<SessionSummary>("POST", `/sessions/${encodeURIComponent(id)}/open`);
  }

  submitBallot(id: string, token: string, ranking: string[]): Promise<{ ballot_count: number }> {
    return this.request<{ ballot_count: number }>(
      "POST",
      `/sessions/${encodeURIComponent(id)}/ballots`,
      { token, ranking },
    );
  }

  closeSession(id: string, allowMissing = false): Promise<SessionSummary> {
    return this.request<SessionSummary>("POST", `/sessions/${encodeURIComponent(id)}/close`, {
      allow_missing: allowMissing,
    });
  }

  getResult(id: string): Promise<RankingDocument> {
    return this.request<RankingDocument>("GET", `/sessions/${encodeURIComponent(id)}/result`);
  }

  exportUrl(id: string): string {
    return `${this.baseUrl}/sessions/${encodeURIComponent(id)}/export`;
  }
}
