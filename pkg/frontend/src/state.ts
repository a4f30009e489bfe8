// Form-state rules: what must be filled in before tuning can start.

import { parseSpace, SpaceFields } from "./space.js";
import type { DatasetMeta, GaSettingsConfig, JobRequest } from "./types.js";

export interface TuneFormState {
  dataset: DatasetMeta | null;
  target: string | null;
  spaceFields: SpaceFields;
  settings: GaSettingsConfig;
  useKpca: boolean;
}

export const DEFAULT_SETTINGS: GaSettingsConfig = {
  population_size: 10,
  generations: 10,
  mutation_rate: 0.1,
  workers: 0,
  master_seed: 0,
};

/** Start stays disabled until a dataset is loaded, a target chosen, and
 * every option list parses to something non-empty. */
export function canStart(state: TuneFormState): boolean {
  if (!state.dataset || !state.target) return false;
  if (!state.dataset.columns.some((c) => c.name === state.target)) return false;
  try {
    parseSpace(state.spaceFields);
  } catch {
    return false;
  }
  return state.settings.population_size >= 2 && state.settings.generations >= 1;
}

export function buildJobRequest(state: TuneFormState): JobRequest {
  if (!state.dataset || !state.target) {
    throw new Error("dataset and target must be chosen first");
  }
  return {
    dataset_id: state.dataset.dataset_id,
    target: state.target,
    space: parseSpace(state.spaceFields),
    settings: state.settings,
    use_kpca: state.useKpca,
  };
}
