// DOM wiring for the single-page operator UI: top form panel, bottom
// console/summary/prediction panel. All rendering goes through the pure
// helpers in render.ts; all state rules live in state.ts.

import { ApiClient, ApiError } from "./api.js";
import { EventConsole } from "./events.js";
import {
  generationLine,
  renderPredictions,
  renderSummary,
} from "./render.js";
import { buildJobRequest, canStart, DEFAULT_SETTINGS, TuneFormState } from "./state.js";
import {
  DEFAULT_ACTIVATIONS,
  DEFAULT_HIDDEN,
  DEFAULT_LEARNING_RATES,
  DEFAULT_SOLVERS,
} from "./space.js";
import type { SummaryEvent } from "./types.js";

const api = new ApiClient("");

const el = <T extends HTMLElement>(id: string): T => {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
};

const fileInput = el<HTMLInputElement>("file-input");
const uploadStatus = el<HTMLElement>("upload-status");
const targetSelect = el<HTMLSelectElement>("target-select");
const hiddenInput = el<HTMLInputElement>("hidden-input");
const activationInput = el<HTMLInputElement>("activation-input");
const lrInput = el<HTMLInputElement>("lr-input");
const solverInput = el<HTMLInputElement>("solver-input");
const populationInput = el<HTMLInputElement>("population-input");
const generationsInput = el<HTMLInputElement>("generations-input");
const mutationInput = el<HTMLInputElement>("mutation-input");
const seedInput = el<HTMLInputElement>("seed-input");
const workersInput = el<HTMLInputElement>("workers-input");
const kpcaCheckbox = el<HTMLInputElement>("kpca-checkbox");
const startButton = el<HTMLButtonElement>("start-btn");
const consoleBox = el<HTMLElement>("console");
const summaryBox = el<HTMLElement>("summary");
const saveLink = el<HTMLAnchorElement>("save-model");
const predictInput = el<HTMLTextAreaElement>("predict-input");
const predictButton = el<HTMLButtonElement>("predict-btn");
const predictResult = el<HTMLElement>("predict-result");

hiddenInput.value = DEFAULT_HIDDEN;
activationInput.value = DEFAULT_ACTIVATIONS;
lrInput.value = DEFAULT_LEARNING_RATES;
solverInput.value = DEFAULT_SOLVERS;

const state: TuneFormState = {
  dataset: null,
  target: null,
  spaceFields: {
    hidden: DEFAULT_HIDDEN,
    activations: DEFAULT_ACTIVATIONS,
    learningRates: DEFAULT_LEARNING_RATES,
    solvers: DEFAULT_SOLVERS,
  },
  settings: { ...DEFAULT_SETTINGS },
  useKpca: true,
};

let finishedJobId: string | null = null;
let lastSummary: SummaryEvent | null = null;

function syncFormState(): void {
  state.spaceFields = {
    hidden: hiddenInput.value,
    activations: activationInput.value,
    learningRates: lrInput.value,
    solvers: solverInput.value,
  };
  state.settings = {
    population_size: Number(populationInput.value),
    generations: Number(generationsInput.value),
    mutation_rate: Number(mutationInput.value),
    workers: Number(workersInput.value),
    master_seed: Number(seedInput.value),
  };
  state.useKpca = kpcaCheckbox.checked;
  state.target = targetSelect.value || null;
  startButton.disabled = !canStart(state);
  predictButton.disabled = finishedJobId === null || predictInput.value.trim() === "";
}

async function onUpload(): Promise<void> {
  const file = fileInput.files?.[0];
  if (!file) return;
  uploadStatus.textContent = "uploading...";
  uploadStatus.className = "";
  try {
    const meta = await api.uploadDataset(file, file.name);
    state.dataset = meta;
    targetSelect.innerHTML = "";
    const placeholder = document.createElement("option");
    placeholder.value = "";
    placeholder.textContent = "choose target column...";
    targetSelect.appendChild(placeholder);
    for (const column of meta.columns) {
      const option = document.createElement("option");
      option.value = column.name;
      option.textContent = `${column.name} (${column.kind}, ${column.missing_count} missing)`;
      targetSelect.appendChild(option);
    }
    targetSelect.disabled = false;
    uploadStatus.textContent = `${meta.n_rows} rows, ${meta.columns.length} columns`;
  } catch (err) {
    state.dataset = null;
    targetSelect.disabled = true;
    uploadStatus.textContent = err instanceof ApiError ? String(err.message) : String(err);
    uploadStatus.className = "error";
  }
  syncFormState();
}

function appendConsoleLine(text: string): void {
  const line = document.createElement("div");
  line.className = "console-line";
  line.textContent = text;
  consoleBox.appendChild(line);
  consoleBox.scrollTop = consoleBox.scrollHeight;
}

async function followJob(jobId: string): Promise<void> {
  const view = new EventConsole();
  consoleBox.innerHTML = "";
  summaryBox.innerHTML = "";
  saveLink.hidden = true;
  finishedJobId = null;
  appendConsoleLine(`job ${jobId} started`);
  while (!view.finished) {
    try {
      for await (const event of api.events(jobId)) {
        if (!view.add(event)) continue; // replayed duplicate after reconnect
        if (event.type === "generation") {
          appendConsoleLine(generationLine(event));
        } else {
          lastSummary = event;
          summaryBox.innerHTML = renderSummary(event);
          if (event.test_accuracy !== undefined) {
            finishedJobId = jobId;
            saveLink.href = api.modelUrl(jobId);
            saveLink.hidden = false;
          }
        }
      }
    } catch (err) {
      appendConsoleLine(`stream dropped (${String(err)}), reconnecting...`);
      await new Promise((resolve) => setTimeout(resolve, 1000));
    }
  }
  syncFormState();
}

async function onStart(): Promise<void> {
  syncFormState();
  if (startButton.disabled) return;
  startButton.disabled = true;
  try {
    const jobId = await api.createJob(buildJobRequest(state));
    await followJob(jobId);
  } catch (err) {
    summaryBox.innerHTML = `<div class="error-banner">${String(
      err instanceof ApiError ? err.message : err
    )}</div>`;
  }
  syncFormState();
}

async function onPredict(): Promise<void> {
  if (finishedJobId === null) return;
  predictResult.innerHTML = "";
  let rows: Record<string, unknown>[];
  try {
    rows = JSON.parse(predictInput.value);
    if (!Array.isArray(rows)) throw new Error("expected a JSON array of row objects");
  } catch (err) {
    predictResult.innerHTML = `<div class="error-banner">${String(err)}</div>`;
    return;
  }
  try {
    const response = await api.predict(finishedJobId, rows);
    predictResult.innerHTML = renderPredictions(
      response,
      lastSummary?.class_names ?? response.predictions
    );
  } catch (err) {
    if (err instanceof ApiError && typeof err.detail === "object" && err.detail) {
      const detail = err.detail as {
        message?: string;
        missing_columns?: string[];
        unknown_columns?: string[];
      };
      const hints: string[] = [];
      if (detail.missing_columns?.length) {
        hints.push(`missing columns: ${detail.missing_columns.join(", ")}`);
      }
      if (detail.unknown_columns?.length) {
        hints.push(`unknown columns: ${detail.unknown_columns.join(", ")}`);
      }
      predictResult.innerHTML = `<div class="error-banner">${hints.join("<br>") || String(err.message)}</div>`;
    } else {
      predictResult.innerHTML = `<div class="error-banner">${String(err)}</div>`;
    }
  }
}

fileInput.addEventListener("change", () => void onUpload());
targetSelect.addEventListener("change", syncFormState);
for (const input of [
  hiddenInput, activationInput, lrInput, solverInput,
  populationInput, generationsInput, mutationInput, seedInput, workersInput,
]) {
  input.addEventListener("input", syncFormState);
}
kpcaCheckbox.addEventListener("change", syncFormState);
startButton.addEventListener("click", () => void onStart());
predictButton.addEventListener("click", () => void onPredict());
predictInput.addEventListener("input", syncFormState);

syncFormState();
