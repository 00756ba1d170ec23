// Pure renderers: API documents in, HTML strings out. Everything shown comes
// straight from a response field; the console computes nothing itself. These
// are what the snapshot tests pin.

import type {
  ApiErrorBody, CompareMatrix, ComposeResponse, QueryResponse, RecordEnvelope,
} from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function cell(value: unknown): string {
  if (value === null || value === undefined) {
    return "<td class=\"empty\"></td>";
  }
  return `<td>${escapeHtml(String(value))}</td>`;
}

// ---------------------------------------------------------------------------
// query console

export function renderResultsTable(response: QueryResponse): string {
  if (response.count === 0) {
    return `<p class="empty-results">0 results</p>`;
  }
  const rows = response.results.map((envelope) => {
    const body = envelope.body;
    const arch = body.architecture;
    return [
      "<tr>",
      cell(body.name),
      cell(body.version),
      cell(body.task ?? body.modality ?? ""),
      cell(arch ? arch.family : ""),
      cell(arch ? arch.parameter_count : ""),
      "</tr>",
    ].join("");
  });
  return [
    `<table class="results">`,
    "<thead><tr><th>name</th><th>version</th><th>task</th>" +
      "<th>architecture</th><th>parameters</th></tr></thead>",
    `<tbody>${rows.join("")}</tbody>`,
    "</table>",
    `<p class="result-count">${response.count} result(s)</p>`,
  ].join("\n");
}

/** Inline annotation for a 400: the query line with a caret under the
 * reported column, plus the message. */
export function renderQueryError(queryText: string, error: ApiErrorBody): string {
  const line = error.detail?.line ?? 1;
  const column = error.detail?.column ?? 1;
  const sourceLine = queryText.split("\n")[line - 1] ?? "";
  const caret = " ".repeat(Math.max(column - 1, 0)) + "^";
  const expected = error.detail?.expected?.length
    ? `\nexpected: ${error.detail.expected.join(", ")}`
    : "";
  return [
    `<pre class="query-error" data-line="${line}" data-column="${column}">`,
    escapeHtml(sourceLine),
    "\n",
    caret,
    "\n",
    escapeHtml(`${error.code}: ${error.message}${expected}`),
    "</pre>",
  ].join("");
}

// ---------------------------------------------------------------------------
// model detail

const PROVENANCE_LABELS: Record<string, string> = {
  manual: "entered manually",
  external_zoo: "imported from external zoo",
  evaluation_harness: "measured by evaluation harness",
};

export function renderModelDetail(envelope: RecordEnvelope, runs?: CompareMatrix): string {
  const body = envelope.body;
  const provenance = body.source ?? body.provenance;
  const badge = provenance
    ? `<span class="badge badge-${provenance.origin}">` +
      escapeHtml(PROVENANCE_LABELS[provenance.origin] ?? provenance.origin) +
      (provenance.source_name ? ` (${escapeHtml(provenance.source_name)})` : "") +
      "</span>"
    : "";
  const skip = new Set(["name", "version", "task", "source", "provenance"]);
  const fields = Object.entries(body)
    .filter(([key]) => !skip.has(key))
    .sort(([a], [b]) => (a < b ? -1 : 1))
    .map(([key, value]) =>
      `<dt>${escapeHtml(key)}</dt><dd>${escapeHtml(JSON.stringify(value))}</dd>`)
    .join("");
  const parts = [
    `<article class="model-detail">`,
    `<h2>${escapeHtml(String(body.name))} <small>@${escapeHtml(String(body.version))}</small></h2>`,
    `<p class="task">${escapeHtml(String(body.task ?? ""))} ${badge}</p>`,
    `<dl>${fields}</dl>`,
  ];
  if (runs && runs.rows.length > 0) {
    parts.push(renderRunsByHardware(runs));
  }
  parts.push("</article>");
  return parts.join("\n");
}

function renderRunsByHardware(matrix: CompareMatrix): string {
  const byHardware = new Map<string, typeof matrix.rows>();
  for (const row of matrix.rows) {
    const group = byHardware.get(row.hardware) ?? [];
    group.push(row);
    byHardware.set(row.hardware, group);
  }
  const sections = [...byHardware.keys()].sort().map((hardware) => {
    const rows = byHardware.get(hardware)!;
    const items = rows.map((row) => {
      const scope = [row.dataset, row.slice].filter(Boolean).join(", ");
      return `<li>${escapeHtml(row.metric)} = ${row.values[0]} <small>(${escapeHtml(scope)})</small></li>`;
    });
    return `<section class="hardware-group"><h3>${escapeHtml(hardware)}</h3>` +
      `<ul>${items.join("")}</ul></section>`;
  });
  return `<div class="runs">${sections.join("\n")}</div>`;
}

// ---------------------------------------------------------------------------
// compare view

/** Matrix with the best value per row highlighted according to the metric's
 * own polarity (ties all highlighted). */
export function renderCompareMatrix(matrix: CompareMatrix): string {
  const heads = matrix.models.map((m) => `<th>${escapeHtml(m)}</th>`).join("");
  const rows = matrix.rows.map((row) => {
    const present = row.values.filter((v): v is number => v !== null);
    let best: number | null = null;
    if (present.length > 0 && row.higher_is_better !== null) {
      best = row.higher_is_better ? Math.max(...present) : Math.min(...present);
    }
    const cells = row.values.map((value) => {
      if (value === null) {
        return `<td class="empty"></td>`;
      }
      const klass = best !== null && value === best ? ` class="best"` : "";
      return `<td${klass}>${value}</td>`;
    });
    const scope = [row.dataset, row.hardware, row.slice].filter(Boolean).join(" / ");
    return `<tr><th scope="row">${escapeHtml(row.metric)} <small>${escapeHtml(scope)}</small></th>` +
      cells.join("") + "</tr>";
  });
  return [
    `<table class="compare">`,
    `<thead><tr><th>metric</th>${heads}</tr></thead>`,
    `<tbody>${rows.join("\n")}</tbody>`,
    "</table>",
  ].join("\n");
}

// ---------------------------------------------------------------------------
// what-if panel

export function renderPlan(plan: ComposeResponse): string {
  if (!plan.feasible) {
    const binding = (plan.binding ?? []).map((b) => `<li>${escapeHtml(b)}</li>`).join("");
    return `<div class="plan infeasible"><strong>INFEASIBLE</strong>` +
      `<p>binding constraint(s):</p><ul>${binding}</ul></div>`;
  }
  const assignment = Object.entries(plan.assignment ?? {})
    .sort(([a], [b]) => (a < b ? -1 : 1))
    .map(([node, ref]) =>
      `<li><code>${escapeHtml(node)}</code> → ${escapeHtml(ref.name)}@${escapeHtml(ref.version)}</li>`)
    .join("");
  const agg = plan.aggregate!;
  const excluded = (plan.excluded ?? [])
    .map((e) => `<li>${escapeHtml(e.model)} (${escapeHtml(e.node)}): ${escapeHtml(e.reason)}</li>`)
    .join("");
  return [
    `<div class="plan feasible" data-mode="${escapeHtml(plan.mode)}">`,
    `<ul class="assignment">${assignment}</ul>`,
    `<p class="aggregate">score ${agg.score} · latency ${agg.latency_ms} ms · ` +
      `memory ${agg.memory_mb} MB</p>`,
    excluded ? `<details><summary>excluded models</summary><ul>${excluded}</ul></details>` : "",
    "</div>",
  ].filter(Boolean).join("\n");
}
