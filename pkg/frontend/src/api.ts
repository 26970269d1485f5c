/**
 * Typed client for the review service HTTP API.
 *
 * The server is the single validation authority: the UI never ships its own
 * idiom list, it calls /api/lexicon/check. Stale writes surface as
 * ConflictError carrying the server's current pair so callers can render
 * both versions; validation failures surface as ValidationError carrying
 * the offending idioms.
 */

export interface IdiomSpan {
  idiom: string;
  start: number;
  end: number;
}

export interface Revision {
  timestamp: string;
  annotator: string;
  old_target: string;
  new_target: string;
}

export type PairStatus = "machine" | "revised" | "approved" | "flagged";

export interface Pair {
  id: string;
  source: string;
  target: string;
  idioms: IdiomSpan[];
  status: PairStatus;
  revisions: Revision[];
  version: number;
}

export interface PairPage {
  pairs: Pair[];
  total: number;
}

export interface StatusCounts {
  machine: number;
  revised: number;
  approved: number;
  flagged: number;
  total: number;
}

export class ApiError extends Error {
  constructor(message: string, readonly status?: number) {
    super(message);
    this.name = "ApiError";
  }
}

export class ConflictError extends ApiError {
  constructor(message: string, readonly current: Pair) {
    super(message, 409);
    this.name = "ConflictError";
  }
}

export class ValidationError extends ApiError {
  constructor(message: string, readonly idioms: string[]) {
    super(message, 422);
    this.name = "ValidationError";
  }
}

export interface ListQuery {
  status?: PairStatus;
  offset?: number;
  limit?: number;
}

export interface RevisionRequest {
  target: string;
  annotator: string;
  version: number;
  force?: boolean;
}

async function parseBody(response: Response): Promise<any> {
  try {
    return await response.json();
  } catch {
    return {};
  }
}

async function throwForStatus(response: Response): Promise<void> {
  if (response.ok) return;
  const body = await parseBody(response);
  const message = typeof body.error === "string" ? body.error : `HTTP ${response.status}`;
  if (response.status === 409 && body.current) {
    throw new ConflictError(message, body.current as Pair);
  }
  if (response.status === 422) {
    throw new ValidationError(message, Array.isArray(body.idioms) ? body.idioms : []);
  }
  throw new ApiError(message, response.status);
}

export class ReviewApi {
  constructor(private readonly base: string = "") {}

  private async request(path: string, init?: RequestInit): Promise<any> {
    let response: Response;
    try {
      response = await fetch(this.base + path, init);
    } catch (cause) {
      throw new ApiError(`network failure: ${String(cause)}`);
    }
    await throwForStatus(response);
    return parseBody(response);
  }

  listPairs(query: ListQuery = {}): Promise<PairPage> {
    const params = new URLSearchParams();
    if (query.status) params.set("status", query.status);
    if (query.offset !== undefined) params.set("offset", String(query.offset));
    if (query.limit !== undefined) params.set("limit", String(query.limit));
    const suffix = params.toString() ? `?${params}` : "";
    return this.request(`/api/pairs${suffix}`);
  }

  getPair(id: string): Promise<Pair> {
    return this.request(`/api/pairs/${encodeURIComponent(id)}`);
  }

  submitRevision(id: string, body: RevisionRequest): Promise<Pair> {
    return this.request(`/api/pairs/${encodeURIComponent(id)}/revision`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  approve(id: string, annotator: string, version: number): Promise<Pair> {
    return this.request(`/api/pairs/${encodeURIComponent(id)}/approve`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ annotator, version }),
    });
  }

  stats(): Promise<StatusCounts> {
    return this.request("/api/stats");
  }

  async checkText(text: string): Promise<IdiomSpan[]> {
    const params = new URLSearchParams({ text });
    const body = await this.request(`/api/lexicon/check?${params}`);
    return body.idioms ?? [];
  }
}
