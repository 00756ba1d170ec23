// Wire types for the /api/v1 JSON contract. The console renders these
// verbatim; it never derives numbers of its own.

export interface RecordEnvelope {
  kind: string;
  body: Record<string, unknown> & {
    name?: string;
    version?: string;
    task?: string;
    modality?: string;
    tags?: string[];
    architecture?: { family: string; parameter_count: number };
    source?: Provenance;
    provenance?: Provenance;
  };
}

export interface Provenance {
  origin: "manual" | "external_zoo" | "evaluation_harness";
  source_name?: string;
  source_url?: string;
}

export interface QueryResponse {
  count: number;
  offset: number;
  limit: number;
  results: RecordEnvelope[];
  plan: string;
  elapsed_ms: number;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  detail?: {
    line?: number;
    column?: number;
    expected?: string[];
    path?: string;
    binding?: string[];
    [key: string]: unknown;
  };
}

export interface CompareRow {
  metric: string;
  dataset: string;
  hardware: string;
  slice: string | null;
  higher_is_better: boolean | null;
  values: (number | null)[];
}

export interface CompareMatrix {
  models: string[];
  rows: CompareRow[];
}

export interface ModelAssignment {
  name: string;
  version: string;
}

export interface ComposeResponse {
  feasible: boolean;
  mode: string;
  assignment?: Record<string, ModelAssignment>;
  aggregate?: { score: number; latency_ms: number; memory_mb: number };
  excluded?: { node: string; model: string; reason: string }[];
  binding?: string[];
}

export interface ComposeRequest {
  nodes: { id: string; task: string; input_type?: string; output_type?: string; filter?: string }[];
  edges: [string, string][];
  budgets: { latency_ms: number; memory_mb: number };
  hardware: string;
  weights?: Record<string, number>;
}

export type ApiResult<T> =
  | { ok: true; data: T }
  | { ok: false; error: ApiErrorBody; status: number };
