/**
 * Typed client for the slotforge session API.
 *
 * Every mutation quotes the revision the UI last saw; the server answers 409
 * with the current revision when that is stale, and the app reacts by
 * refetching (never by mutating local state optimistically).
 */

export interface QuestionPayload {
  id: string;
  doc_id: string;
  text: string;
  answer: string;
  cluster_id: number;
  representative: boolean;
  slot?: string;
}

export interface ClusterPayload {
  id: number;
  slot: string;
  score: number;
  size: number;
  representative: QuestionPayload[];
  non_representative: QuestionPayload[];
  global_representatives: string[];
}

export interface ClustersView {
  session_id: string;
  revision: number;
  k: number;
  clusters: ClusterPayload[];
}

export interface Highlight {
  start: number;
  end: number;
  surface: string;
  question_id: string;
  cluster_id: number;
  slot: string;
  representative: boolean;
}

export interface DocumentViewData {
  session_id: string;
  revision: number;
  doc_id: string;
  text: string;
  gold: { slot: string; answers: string[] }[];
  highlights: Highlight[];
  questions: QuestionPayload[];
}

export interface SlotScore {
  tp: number;
  fp: number;
  fn: number;
  precision: number;
  recall: number;
  f1: number;
}

export interface EvaluationView {
  session_id: string;
  revision: number;
  report: {
    per_slot: Record<string, SlotScore>;
    micro: SlotScore;
    macro: { precision: number; recall: number; f1: number };
    action_count: number;
  };
  action_count: number;
}

export type Operation =
  | { type: "upweight_words"; words: string[]; factor: number }
  | { type: "merge_clusters"; ids: number[] }
  | { type: "move_question"; qid: string; to_cluster: number }
  | { type: "delete_question"; qid: string }
  | { type: "demote_question"; qid: string }
  | { type: "promote_question"; qid: string }
  | { type: "edit_question"; qid: string; new_text: string }
  | { type: "add_question"; text: string; target_cluster?: number | null };

export interface OperationResult {
  session_id: string;
  revision: number;
  digest: Record<string, unknown>;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public details: Record<string, unknown> = {},
  ) {
    super(message);
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let code = "http_error";
  let message = `${response.status}`;
  let details: Record<string, unknown> = {};
  try {
    const body = await response.json();
    code = body.code ?? code;
    message = body.message ?? message;
    details = body.details ?? {};
  } catch {
    // non-JSON error body; keep the status text
  }
  return new ApiError(response.status, code, message, details);
}

export class ApiClient {
  constructor(private baseUrl: string = "") {}

  private async getJson<T>(path: string): Promise<T> {
    const response = await fetch(`${this.baseUrl}${path}`);
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as T;
  }

  getClusters(sessionId: string): Promise<ClustersView> {
    return this.getJson(`/sessions/${sessionId}/clusters`);
  }

  getDocument(sessionId: string, docId: string): Promise<DocumentViewData> {
    return this.getJson(`/sessions/${sessionId}/documents/${docId}`);
  }

  getEvaluation(sessionId: string): Promise<EvaluationView> {
    return this.getJson(`/sessions/${sessionId}/evaluation`);
  }

  async postOperation(
    sessionId: string,
    revision: number,
    op: Operation,
  ): Promise<OperationResult> {
    const response = await fetch(`/sessions/${sessionId}/operations`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ revision, op }),
    });
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as OperationResult;
  }
}
