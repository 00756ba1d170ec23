// DOM-free view state. The browser glue in app.ts only wires events to these
// classes and injects the rendered HTML.

import type { ApiClient } from "./api.js";
import type {
  ApiErrorBody, ComposeRequest, ComposeResponse, QueryResponse,
} from "./types.js";

/** One console session: submit queries, keep an append-only history. */
export class QuerySession {
  readonly history: string[] = [];
  lastResult: QueryResponse | null = null;
  lastError: ApiErrorBody | null = null;
  lastQuery = "";

  constructor(private readonly api: ApiClient) {}

  async submit(text: string): Promise<void> {
    this.history.push(text);
    this.lastQuery = text;
    const result = await this.api.query(text);
    if (result.ok) {
      this.lastResult = result.data;
      this.lastError = null;
    } else {
      this.lastResult = null;
      this.lastError = result.error;
    }
  }
}

/** Budget sliders and weights over a task-graph draft. Every change issues a
 * fresh /compose call; responses arriving out of order are discarded so the
 * panel always shows the latest request's plan (latest wins). */
export class WhatIfPanel {
  lastPlan: ComposeResponse | null = null;
  lastError: ApiErrorBody | null = null;
  composeCalls = 0;
  private requestSeq = 0;

  constructor(private readonly api: ApiClient, readonly draft: ComposeRequest) {}

  async setLatencyBudget(value: number): Promise<void> {
    this.draft.budgets.latency_ms = value;
    await this.resolve();
  }

  async setMemoryBudget(value: number): Promise<void> {
    this.draft.budgets.memory_mb = value;
    await this.resolve();
  }

  async setWeight(node: string, weight: number): Promise<void> {
    this.draft.weights = { ...(this.draft.weights ?? {}), [node]: weight };
    await this.resolve();
  }

  async resolve(): Promise<void> {
    const seq = ++this.requestSeq;
    this.composeCalls += 1;
    const request: ComposeRequest = JSON.parse(JSON.stringify(this.draft));
    const result = await this.api.compose(request);
    if (seq !== this.requestSeq) {
      return; // a newer slider state is already in flight or rendered
    }
    if (result.ok) {
      this.lastPlan = result.data;
      this.lastError = null;
    } else if (result.error.code === "INFEASIBLE") {
      // infeasibility is a first-class outcome carrying the binding set
      this.lastPlan = (result.error.detail ?? { feasible: false }) as unknown as ComposeResponse;
      this.lastError = null;
    } else {
      this.lastPlan = null;
      this.lastError = result.error;
    }
  }
}
