/** DOM wiring for the single-page translator: input box, translate
 *  button, result panel with attention heatmap, error banner, and a
 *  session history whose entries replay their stored response. */

import { ApiError, canSubmit, translate } from "./api.js";
import type { TranslateResponse } from "./api.js";
import {
  appendHistory,
  buildPanel,
  type PanelModel,
  type UiTranslation,
} from "./render.js";

const BASE_URL = "";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const input = el<HTMLInputElement>("source-input");
const button = el<HTMLButtonElement>("translate-button");
const banner = el<HTMLDivElement>("error-banner");
const panel = el<HTMLDivElement>("result-panel");
const historyList = el<HTMLUListElement>("history-list");

let history: UiTranslation[] = [];
let nextId = 1;
let inFlight: AbortController | null = null;

function renderBanner(message: string | null, retry: (() => void) | null = null): void {
  banner.textContent = "";
  banner.hidden = message === null;
  if (message === null) return;
  banner.append(message);
  if (retry) {
    const again = document.createElement("button");
    again.type = "button";
    again.textContent = "retry";
    again.addEventListener("click", retry);
    banner.append(" ", again);
  }
}

function renderHeatmap(model: PanelModel): HTMLElement {
  if (model.heatmap === null) {
    const note = document.createElement("p");
    note.className = "attention-note";
    note.textContent = model.attentionNote ?? "";
    return note;
  }
  const table = document.createElement("table");
  table.className = "heatmap";
  const head = table.createTHead().insertRow();
  head.insertCell();
  for (const token of model.heatmap.columnTokens) {
    const th = document.createElement("th");
    th.textContent = token;
    head.append(th);
  }
  const body = table.createTBody();
  model.heatmap.cells.forEach((row, i) => {
    const tr = body.insertRow();
    const th = document.createElement("th");
    th.textContent = model.heatmap!.rowTokens[i]!;
    tr.append(th);
    for (const cell of row) {
      const td = tr.insertCell();
      td.className = "cell";
      td.style.backgroundColor = cell.color;
      td.title = cell.hover;
    }
  });
  return table;
}

function renderPanel(response: TranslateResponse): void {
  const model = buildPanel(response);
  panel.textContent = "";
  const translation = document.createElement("p");
  translation.className = "translation";
  translation.textContent = model.translation;
  panel.append(translation);
  if (model.truncated) {
    const warning = document.createElement("p");
    warning.className = "truncation-warning";
    warning.textContent = "output was cut off at the length limit";
    panel.append(warning);
  }
  panel.append(renderHeatmap(model));
}

function renderHistory(): void {
  historyList.textContent = "";
  for (const entry of history) {
    const item = document.createElement("li");
    const link = document.createElement("button");
    link.type = "button";
    link.className = "history-entry";
    link.textContent = `${entry.text} → ${entry.response.translation}`;
    link.addEventListener("click", () => {
      renderBanner(null);
      renderPanel(entry.response);
    });
    item.append(link);
    historyList.append(item);
  }
}

async function submit(): Promise<void> {
  const text = input.value;
  if (!canSubmit(text)) return;
  inFlight?.abort();
  const controller = new AbortController();
  inFlight = controller;
  renderBanner(null);
  button.disabled = true;
  try {
    const response = await translate(BASE_URL, text, controller.signal);
    history = appendHistory(history, {
      id: nextId++,
      text,
      response,
      timestamp: Date.now(),
    });
    renderPanel(response);
    renderHistory();
  } catch (err) {
    if (err instanceof DOMException && err.name === "AbortError") return;
    if (err instanceof ApiError) {
      renderBanner(err.message, err.kind === "network" ? () => void submit() : null);
    } else {
      renderBanner("something went wrong");
    }
  } finally {
    if (inFlight === controller) inFlight = null;
    button.disabled = !canSubmit(input.value);
  }
}

input.addEventListener("input", () => {
  button.disabled = !canSubmit(input.value);
});
input.addEventListener("keydown", (event) => {
  if (event.key === "Enter") void submit();
});
button.addEventListener("click", () => void submit());
button.disabled = true;
