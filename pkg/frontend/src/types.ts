// Wire types of the tuning service API.

export interface ColumnMeta {
  name: string;
  kind: "numeric" | "categorical";
  missing_count: number;
}

export interface DatasetMeta {
  dataset_id: string;
  filename?: string;
  n_rows: number;
  columns: ColumnMeta[];
}

export interface SpaceConfig {
  hidden_layer_options: number[][];
  activation_options: string[];
  learning_rate_options: number[];
  solver_options: string[];
}

export interface GaSettingsConfig {
  population_size: number;
  generations: number;
  mutation_rate: number;
  workers: number;
  master_seed: number;
  max_iter?: number;
}

export interface JobRequest {
  dataset_id: string;
  target: string;
  space: SpaceConfig;
  settings: GaSettingsConfig;
  use_kpca: boolean;
  holdout_fitness?: boolean;
}

export interface BestChromosome {
  hidden_layers: number[];
  activation: string;
  learning_rate: number;
  solver: string;
}

export interface GenerationEvent {
  type: "generation";
  generation: number;
  fitnesses: number[];
  min: number;
  max: number;
  best_in_generation: number;
  best_so_far: number;
  best_chromosome_so_far: BestChromosome;
  wall_time_s: number;
}

export interface ClassMetrics {
  precision: number;
  recall: number;
  f1: number;
  support: number;
}

export interface SummaryEvent {
  type: "summary";
  best_chromosome?: BestChromosome;
  best_fitness?: number;
  mode?: string;
  tuning_time_s?: number;
  training_time_s?: number;
  generations?: number;
  test_accuracy?: number;
  confusion_matrix?: number[][];
  class_names?: string[];
  classification_report?: Record<string, ClassMetrics>;
  error?: string;
}

export type StreamEvent = GenerationEvent | SummaryEvent;

export interface JobStatus {
  job_id: string;
  dataset_id: string;
  target: string;
  state: "pending" | "running" | "done" | "failed";
  generations_completed: number;
  error: string | null;
}

export interface PredictResponse {
  predictions: string[];
  probabilities: number[][];
}
