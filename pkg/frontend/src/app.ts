// Browser glue: binds the static page to the controllers and renderers.
// Served by `mz serve --webui-root frontend/public`; the API is same-origin
// by default, override with ?api=http://host:port.

import { ApiClient } from "./api.js";
import { QuerySession, WhatIfPanel } from "./controller.js";
import {
  renderCompareMatrix, renderModelDetail, renderPlan, renderQueryError,
  renderResultsTable,
} from "./render.js";
import type { ComposeRequest } from "./types.js";

const params = new URLSearchParams(window.location.search);
const api = new ApiClient(params.get("api") ?? "");

const $ = <T extends HTMLElement>(id: string): T => {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
};

// --- query console ----------------------------------------------------------

const session = new QuerySession(api);

async function runQuery(): Promise<void> {
  const text = $<HTMLTextAreaElement>("query-text").value;
  await session.submit(text);
  const out = $("query-output");
  if (session.lastError) {
    out.innerHTML = renderQueryError(session.lastQuery, session.lastError);
  } else if (session.lastResult) {
    out.innerHTML = renderResultsTable(session.lastResult);
  }
  $("query-history").innerHTML = session.history
    .map((q) => `<li><code>${q.replace(/</g, "&lt;")}</code></li>`)
    .join("");
}

// --- model detail -----------------------------------------------------------

async function showDetail(): Promise<void> {
  const id = $<HTMLInputElement>("detail-id").value.trim();
  const out = $("detail-output");
  const record = await api.record("ModelRecord", id);
  if (!record.ok) {
    out.textContent = `${record.error.code}: ${record.error.message}`;
    return;
  }
  const runs = await api.compare([id]);
  out.innerHTML = renderModelDetail(record.data, runs.ok ? runs.data : undefined);
}

// --- compare ----------------------------------------------------------------

async function runCompare(): Promise<void> {
  const ids = $<HTMLInputElement>("compare-ids").value
    .split(",").map((s) => s.trim()).filter(Boolean);
  const out = $("compare-output");
  const result = await api.compare(ids);
  out.innerHTML = result.ok
    ? renderCompareMatrix(result.data)
    : `<p class="error">${result.error.code}: ${result.error.message}</p>`;
}

// --- what-if panel ----------------------------------------------------------

const defaultDraft: ComposeRequest = {
  nodes: [
    { id: "sentiment", task: "text-classification", input_type: "text", output_type: "text" },
    { id: "pos", task: "pos-tagging", input_type: "text", output_type: "pos-tags" },
  ],
  edges: [["sentiment", "pos"]],
  budgets: { latency_ms: 40, memory_mb: 800 },
  hardware: "mobile-pixel8",
  weights: { sentiment: 0.5, pos: 0.5 },
};

const panel = new WhatIfPanel(api, defaultDraft);

function renderWhatIf(): void {
  $("latency-value").textContent = String(panel.draft.budgets.latency_ms);
  $("memory-value").textContent = String(panel.draft.budgets.memory_mb);
  const out = $("whatif-output");
  if (panel.lastError) {
    out.innerHTML = `<p class="error">${panel.lastError.code}: ${panel.lastError.message}</p>`;
  } else if (panel.lastPlan) {
    out.innerHTML = renderPlan(panel.lastPlan);
  }
}

function bind(): void {
  $("query-run").addEventListener("click", () => void runQuery());
  $("detail-show").addEventListener("click", () => void showDetail());
  $("compare-run").addEventListener("click", () => void runCompare());
  const latency = $<HTMLInputElement>("latency-slider");
  latency.addEventListener("input", () =>
    void panel.setLatencyBudget(Number(latency.value)).then(renderWhatIf));
  const memory = $<HTMLInputElement>("memory-slider");
  memory.addEventListener("input", () =>
    void panel.setMemoryBudget(Number(memory.value)).then(renderWhatIf));
  const graphBox = $<HTMLTextAreaElement>("whatif-graph");
  graphBox.value = JSON.stringify(defaultDraft, null, 2);
  graphBox.addEventListener("change", () => {
    try {
      const doc = JSON.parse(graphBox.value) as ComposeRequest;
      panel.draft.nodes = doc.nodes;
      panel.draft.edges = doc.edges;
      panel.draft.hardware = doc.hardware;
      panel.draft.weights = doc.weights;
      void panel.resolve().then(renderWhatIf);
    } catch {
      $("whatif-output").innerHTML = `<p class="error">graph draft is not valid JSON</p>`;
    }
  });
  void panel.resolve().then(renderWhatIf);
}

document.addEventListener("DOMContentLoaded", bind);
