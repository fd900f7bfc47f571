/** Typed client for the landscape gateway JSON API.
 *
 * The console never computes rewards or Q-values; every number shown in
 * the UI comes verbatim from these payloads.
 */

export interface AspectPayload {
  label: string;
  entries: [string, number][];
  source_ids?: string[];
}

export interface SessionSummary {
  id: string;
  status: string;
  corpus_ref: string;
  iteration_count: number;
  topic_labels: string[];
  ctp1: string;
  ctp2: string | null;
  q: Record<string, number>;
  staged_aspect: AspectPayload | null;
  config: unknown;
}

export interface TopicDetail {
  label: string;
  keywords: [string, number][];
  q_before: number;
  q_after: number;
  approx_reward: number;
  base_reward: number;
  modified_reward: number;
}

export interface IterationRecord {
  index: number;
  aspect_label: string;
  aspect_entries: [string, number][];
  selected_topics: string[];
  approx_rewards: Record<string, number>;
  provisional_q: Record<string, number>;
  base_rewards: Record<string, number>;
  modified_rewards: Record<string, number>;
  max_future_q: number;
  q_before: Record<string, number>;
  q_after: Record<string, number>;
  model_old_id: string;
  model_new_id: string;
  validation_ref: string;
  novelty_flag: boolean;
  expert_notes: string;
  selected_topic_details: TopicDetail[];
}

export interface BundlePayload {
  topic_labels: string[];
  similarity_matrix: number[][];
  corresponding_similarity: number[];
  magnitude: number[];
  adns: number[];
  entropy_old: number[];
  entropy_new: number[];
  entropy_delta: number[];
  degenerate: boolean[];
  entropy_base: string;
}

export interface DocsimPayload {
  doc_ids: string[];
  topic_labels: string[];
  sims: number[][];
  empty_docs: string[];
}

export interface SweepPayload {
  columns: string[];
  rows: (string | number)[][];
  pairs: [number, number][];
  selections: string[][];
  top_n: number;
}

export interface CreateSessionRequest {
  corpus: string;
  k?: number;
  subtopics?: number | null;
  iterations?: number;
  seed?: number;
  config?: Record<string, unknown>;
}

export interface DecisionRequest {
  continue: boolean;
  notes?: string;
  edited_aspect?: { label: string; entries: [string, number][] };
}

export class GatewayError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

async function parseError(response: Response): Promise<GatewayError> {
  let code = "unknown";
  let message = `${response.status} ${response.statusText}`;
  try {
    const body = await response.json();
    if (body && typeof body === "object") {
      code = body.code ?? code;
      message = body.message ?? JSON.stringify(body);
    }
  } catch {
    // non-JSON error body; keep the status line
  }
  return new GatewayError(response.status, code, message);
}

export class GatewayClient {
  constructor(readonly baseUrl: string) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: {} };
    if (body !== undefined) {
      (init.headers as Record<string, string>)["Content-Type"] = "application/json";
      init.body = JSON.stringify(body);
    }
    const response = await fetch(this.baseUrl + path, init);
    if (!response.ok) {
      throw await parseError(response);
    }
    return (await response.json()) as T;
  }

  health(): Promise<{ status: string }> {
    return this.request("GET", "/health");
  }

  listCorpora(): Promise<{ corpora: Record<string, string> }> {
    return this.request("GET", "/corpora");
  }

  registerCorpus(name: string, path: string): Promise<{ corpora: Record<string, string> }> {
    return this.request("POST", "/corpora", { name, path });
  }

  createSession(body: CreateSessionRequest): Promise<SessionSummary> {
    return this.request("POST", "/sessions", body);
  }

  session(id: string): Promise<SessionSummary> {
    return this.request("GET", `/sessions/${id}`);
  }

  submitAspect(
    id: string,
    body: { label: string; entries?: [string, number][]; texts?: string[]; corpus?: string },
  ): Promise<{ staged_aspect: AspectPayload }> {
    return this.request("POST", `/sessions/${id}/aspects`, body);
  }

  runIteration(id: string, validation: string): Promise<IterationRecord> {
    return this.request("POST", `/sessions/${id}/iterations`, { validation });
  }

  iteration(id: string, index: number): Promise<IterationRecord> {
    return this.request("GET", `/sessions/${id}/iterations/${index}`);
  }

  heatmap(id: string, index: number): Promise<BundlePayload> {
    return this.request("GET", `/sessions/${id}/iterations/${index}/heatmap`);
  }

  docsim(id: string, index: number): Promise<DocsimPayload> {
    return this.request("GET", `/sessions/${id}/iterations/${index}/docsim`);
  }

  decide(id: string, body: DecisionRequest): Promise<SessionSummary> {
    return this.request("POST", `/sessions/${id}/decision`, body);
  }

  sweep(id: string, alphas: number[], lambdas: number[], iteration?: number): Promise<SweepPayload> {
    return this.request("POST", `/sessions/${id}/sweep`, {
      alphas,
      lambdas,
      iteration: iteration ?? null,
    });
  }
}
