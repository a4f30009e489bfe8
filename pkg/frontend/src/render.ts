// Pure HTML renderers. Every number shown is formatted directly from the
// event payloads; nothing is recomputed client-side.

import type {
  GenerationEvent,
  PredictResponse,
  SummaryEvent,
} from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const f4 = (x: number) => x.toFixed(4);

export function describeChromosome(c: {
  hidden_layers: number[];
  activation: string;
  learning_rate: number;
  solver: string;
}): string {
  return `(${c.hidden_layers.join(", ")}) / ${c.activation} / lr ${c.learning_rate} / ${c.solver}`;
}

export function generationLine(e: GenerationEvent): string {
  return `gen ${e.generation} best=${f4(e.best_in_generation)} (min=${f4(e.min)}, max=${f4(e.max)})  best_so_far=${f4(e.best_so_far)} ${describeChromosome(e.best_chromosome_so_far)}`;
}

export function renderConfusionMatrix(
  matrix: number[][],
  classNames: string[]
): string {
  const head = classNames
    .map((n) => `<th>pred ${escapeHtml(n)}</th>`)
    .join("");
  const rows = matrix
    .map((row, i) => {
      const cells = row.map((v) => `<td>${v}</td>`).join("");
      return `<tr><th>true ${escapeHtml(classNames[i])}</th>${cells}</tr>`;
    })
    .join("");
  return `<table class="confusion"><thead><tr><th></th>${head}</tr></thead><tbody>${rows}</tbody></table>`;
}

export function renderReport(
  report: Record<string, { precision: number; recall: number; f1: number; support: number }>
): string {
  const rows = Object.entries(report)
    .map(
      ([name, r]) =>
        `<tr><th>${escapeHtml(name)}</th><td>${f4(r.precision)}</td>` +
        `<td>${f4(r.recall)}</td><td>${f4(r.f1)}</td><td>${r.support}</td></tr>`
    )
    .join("");
  return (
    `<table class="report"><thead><tr><th></th><th>precision</th><th>recall</th>` +
    `<th>f1</th><th>support</th></tr></thead><tbody>${rows}</tbody></table>`
  );
}

export function renderSummary(s: SummaryEvent): string {
  if (s.error && s.test_accuracy === undefined) {
    return `<div class="error-banner">job failed: ${escapeHtml(s.error)}</div>`;
  }
  const parts: string[] = [];
  if (s.best_chromosome) {
    parts.push(
      `<p><strong>Optimal configuration:</strong> ${escapeHtml(describeChromosome(s.best_chromosome))}</p>`
    );
  }
  if (s.best_fitness !== undefined) {
    parts.push(`<p>Best fitness: <strong>${f4(s.best_fitness)}</strong></p>`);
  }
  if (s.tuning_time_s !== undefined && s.training_time_s !== undefined) {
    parts.push(
      `<p>Tuning time: ${s.tuning_time_s.toFixed(2)} s (${escapeHtml(s.mode ?? "")}), ` +
        `final training: ${s.training_time_s.toFixed(2)} s</p>`
    );
  }
  if (s.test_accuracy !== undefined) {
    parts.push(`<p>Test accuracy: <strong>${f4(s.test_accuracy)}</strong></p>`);
  }
  if (s.confusion_matrix && s.class_names) {
    parts.push(renderConfusionMatrix(s.confusion_matrix, s.class_names));
  }
  if (s.classification_report) {
    parts.push(renderReport(s.classification_report));
  }
  return `<div class="summary">${parts.join("\n")}</div>`;
}

/** Result table with one probability bar per class; bar widths are the
 * probabilities as percentages, so each row's bars sum to full width. */
export function renderPredictions(
  response: PredictResponse,
  classNames: string[]
): string {
  const rows = response.predictions
    .map((label, i) => {
      const bars = response.probabilities[i]
        .map((p, k) => {
          const pct = (p * 100).toFixed(1);
          return (
            `<div class="bar" style="width: ${pct}%" title="${escapeHtml(classNames[k])}: ${pct}%">` +
            `${escapeHtml(classNames[k])} ${pct}%</div>`
          );
        })
        .join("");
      return `<tr><td>${i + 1}</td><td class="prediction">${escapeHtml(label)}</td><td><div class="bars">${bars}</div></td></tr>`;
    })
    .join("");
  return (
    `<table class="predictions"><thead><tr><th>row</th><th>class</th><th>probabilities</th></tr></thead>` +
    `<tbody>${rows}</tbody></table>`
  );
}
