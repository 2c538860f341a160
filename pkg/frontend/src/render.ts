/** Pure view models: everything the DOM layer shows is computed here, so
 *  it can be unit-tested against captured API responses. Tokens are never
 *  reordered or relabeled relative to the response. */

import type { TranslateResponse } from "./api.js";

export interface HeatmapCell {
  value: number;
  /** CSS color; darker means more attention. */
  color: string;
  /** Hover text: source token, target token, weight to 3 decimals. */
  hover: string;
}

export interface HeatmapModel {
  /** Column labels: the response's source tokens, in order. */
  columnTokens: string[];
  /** Row labels: the response's target tokens, in order. */
  rowTokens: string[];
  /** cells[row][col], row per target token, column per source token. */
  cells: HeatmapCell[][];
}

export interface UiTranslation {
  id: number;
  text: string;
  response: TranslateResponse;
  timestamp: number;
}

export function grayscale(value: number): string {
  const clamped = Math.min(1, Math.max(0, value));
  const channel = Math.round(255 * (1 - clamped));
  return `rgb(${channel}, ${channel}, ${channel})`;
}

export function hoverLabel(
  sourceToken: string,
  targetToken: string,
  value: number,
): string {
  return `${sourceToken} → ${targetToken}: ${value.toFixed(3)}`;
}

/** Attention grid view model, or null for attention-free baseline models
 *  (the panel then shows an "attention disabled" note instead). */
export function buildHeatmap(response: TranslateResponse): HeatmapModel | null {
  const { attention, source_tokens, target_tokens } = response;
  if (attention === null) return null;
  if (attention.length !== target_tokens.length) {
    throw new Error(
      `attention has ${attention.length} rows for ${target_tokens.length} target tokens`,
    );
  }
  const cells = attention.map((row, i) => {
    if (row.length !== source_tokens.length) {
      throw new Error(
        `attention row ${i} has ${row.length} entries for ${source_tokens.length} source tokens`,
      );
    }
    return row.map((value, j) => ({
      value,
      color: grayscale(value),
      hover: hoverLabel(source_tokens[j]!, target_tokens[i]!, value),
    }));
  });
  return {
    columnTokens: [...source_tokens],
    rowTokens: [...target_tokens],
    cells,
  };
}

export interface PanelModel {
  translation: string;
  truncated: boolean;
  heatmap: HeatmapModel | null;
  /** Shown when heatmap is null. */
  attentionNote: string | null;
}

export function buildPanel(response: TranslateResponse): PanelModel {
  const heatmap = buildHeatmap(response);
  return {
    translation: response.translation,
    truncated: response.truncated,
    heatmap,
    attentionNote: heatmap === null ? "attention disabled in this model" : null,
  };
}

export function appendHistory(
  history: UiTranslation[],
  entry: UiTranslation,
): UiTranslation[] {
  return [entry, ...history];
}
