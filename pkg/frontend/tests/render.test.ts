import { describe, expect, it } from "vitest";

import {
  describeChromosome,
  escapeHtml,
  generationLine,
  renderConfusionMatrix,
  renderPredictions,
  renderReport,
  renderSummary,
} from "../src/render.js";
import type { GenerationEvent, SummaryEvent } from "../src/types.js";

const event: GenerationEvent = {
  type: "generation",
  generation: 3,
  fitnesses: [0.7436, 0.9487],
  min: 0.7436,
  max: 0.9487,
  best_in_generation: 0.9487,
  best_so_far: 0.9487,
  best_chromosome_so_far: {
    hidden_layers: [100, 100],
    activation: "logistic",
    learning_rate: 0.001,
    solver: "adam",
  },
  wall_time_s: 3.2,
};

describe("generationLine", () => {
  it("formats the generation console line", () => {
    const line = generationLine(event);
    expect(line).toContain("gen 3 best=0.9487");
    expect(line).toContain("(min=0.7436, max=0.9487)");
    expect(line).toContain("best_so_far=0.9487");
    expect(line).toContain("(100, 100) / logistic / lr 0.001 / adam");
  });
});

describe("renderConfusionMatrix", () => {
  it("emits every cell verbatim", () => {
    const html = renderConfusionMatrix([[8, 2], [0, 29]], ["healthy", "sick"]);
    for (const cell of ["<td>8</td>", "<td>2</td>", "<td>0</td>", "<td>29</td>"]) {
      expect(html).toContain(cell);
    }
    expect(html).toContain("pred healthy");
    expect(html).toContain("true sick");
  });
});

describe("renderReport", () => {
  it("renders one row per class with 4-decimal metrics", () => {
    const html = renderReport({
      sick: { precision: 1, recall: 0.5, f1: 2 / 3, support: 2 },
      "macro avg": { precision: 0.75, recall: 0.75, f1: 0.6667, support: 3 },
    });
    expect(html).toContain("<th>sick</th>");
    expect(html).toContain("<td>0.5000</td>");
    expect(html).toContain("<td>0.6667</td>");
    expect(html).toContain("<th>macro avg</th>");
  });
});

describe("renderSummary", () => {
  const summary: SummaryEvent = {
    type: "summary",
    best_chromosome: {
      hidden_layers: [100],
      activation: "tanh",
      learning_rate: 0.1,
      solver: "sgd",
    },
    best_fitness: 1.0,
    mode: "parallel",
    tuning_time_s: 11.46,
    training_time_s: 0.61,
    test_accuracy: 1.0,
    confusion_matrix: [[50, 0], [0, 30]],
    class_names: ["ckd", "notckd"],
    classification_report: {
      ckd: { precision: 1, recall: 1, f1: 1, support: 50 },
    },
  };

  it("shows config, times, accuracy, matrix, and report", () => {
    const html = renderSummary(summary);
    expect(html).toContain("(100) / tanh / lr 0.1 / sgd");
    expect(html).toContain("1.0000");
    expect(html).toContain("11.46 s (parallel)");
    expect(html).toContain("<td>50</td>");
    expect(html).toContain("precision");
  });

  it("renders failures as an error banner", () => {
    const html = renderSummary({ type: "summary", error: "training diverged" });
    expect(html).toContain("error-banner");
    expect(html).toContain("training diverged");
  });
});

describe("renderPredictions", () => {
  it("bar widths are the probabilities as percentages", () => {
    const html = renderPredictions(
      { predictions: ["sick"], probabilities: [[0.25, 0.75]] },
      ["healthy", "sick"]
    );
    expect(html).toContain('width: 25.0%');
    expect(html).toContain('width: 75.0%');
    expect(html).toContain('class="prediction">sick');
  });
});

describe("escapeHtml", () => {
  it("neutralizes markup in class names", () => {
    expect(escapeHtml('<img src="x">')).toBe("&lt;img src=&quot;x&quot;&gt;");
  });
});
