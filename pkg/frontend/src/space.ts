// Search-space text-field parsing. The form pre-fills these defaults so a
// zero-edit run uses the standard option lists.

import type { SpaceConfig } from "./types.js";

export const DEFAULT_HIDDEN = "50; 100; 150; 50,50; 100,100";
export const DEFAULT_ACTIVATIONS = "relu, tanh, logistic";
export const DEFAULT_LEARNING_RATES = "0.001, 0.01, 0.1";
export const DEFAULT_SOLVERS = "adam, sgd";

export class SpaceParseError extends Error {}

/** "50; 100; 50,50" -> [[50], [100], [50, 50]] */
export function parseHiddenLayers(text: string): number[][] {
  const groups = text
    .split(";")
    .map((g) => g.trim())
    .filter((g) => g.length > 0);
  const out: number[][] = [];
  for (const group of groups) {
    const sizes = group
      .split(",")
      .map((s) => s.trim())
      .filter((s) => s.length > 0)
      .map((s) => {
        const n = Number(s);
        if (!Number.isInteger(n) || n < 1) {
          throw new SpaceParseError(`hidden layer size must be a positive integer: "${s}"`);
        }
        return n;
      });
    if (sizes.length > 0) out.push(sizes);
  }
  if (out.length === 0) throw new SpaceParseError("at least one hidden-layer option is required");
  return out;
}

export function parseTokens(text: string, what: string, allowed?: string[]): string[] {
  const tokens = text
    .split(",")
    .map((t) => t.trim().toLowerCase())
    .filter((t) => t.length > 0);
  if (tokens.length === 0) throw new SpaceParseError(`at least one ${what} is required`);
  if (allowed) {
    for (const token of tokens) {
      if (!allowed.includes(token)) {
        throw new SpaceParseError(`unknown ${what} "${token}" (expected one of ${allowed.join(", ")})`);
      }
    }
  }
  return tokens;
}

export function parseRates(text: string): number[] {
  const rates = text
    .split(",")
    .map((t) => t.trim())
    .filter((t) => t.length > 0)
    .map((t) => {
      const x = Number(t);
      if (!Number.isFinite(x) || x <= 0) {
        throw new SpaceParseError(`learning rate must be a positive number: "${t}"`);
      }
      return x;
    });
  if (rates.length === 0) throw new SpaceParseError("at least one learning rate is required");
  return rates;
}

export interface SpaceFields {
  hidden: string;
  activations: string;
  learningRates: string;
  solvers: string;
}

export function parseSpace(fields: SpaceFields): SpaceConfig {
  return {
    hidden_layer_options: parseHiddenLayers(fields.hidden),
    activation_options: parseTokens(fields.activations, "activation", [
      "relu",
      "tanh",
      "logistic",
    ]),
    learning_rate_options: parseRates(fields.learningRates),
    solver_options: parseTokens(fields.solvers, "solver", ["adam", "sgd"]),
  };
}
