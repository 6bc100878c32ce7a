/** Detail microenvironment view: the current query as chips, the Selected
 * raincloud, and the ordered Remaining refinements. Dragging a Remaining
 * plot onto the chip area applies its one-step refinement: a type label adds
 * to the environment, the None entry turns on exclusivity.
 */

import { renderRaincloud } from "./raincloud.js";
import type { SelectionState } from "./state.js";
import type { QueryResponse, QueryWire, RemainingEntryWire } from "./types.js";

export interface QueryBuilderCallbacks {
  onDragStart(entry: RemainingEntryWire): void;
  onDrop(): void;
  onTickClick(sampleId: string): void;
}

export function renderQueryBuilder(
  query: QueryWire,
  response: QueryResponse,
  selection: SelectionState,
  callbacks: QueryBuilderCallbacks,
): HTMLElement {
  const root = document.createElement("div");
  root.className = "query-builder";

  const drop = document.createElement("div");
  drop.className = "query-drop";
  drop.append(queryChips(query));
  const hint = document.createElement("span");
  hint.className = "drop-hint";
  hint.textContent = "drag a plot here to refine";
  drop.append(hint);
  drop.addEventListener("dragover", (event) => event.preventDefault());
  drop.addEventListener("drop", (event) => {
    event.preventDefault();
    callbacks.onDrop();
  });
  root.append(drop);

  const selected = document.createElement("div");
  selected.className = "selected-plot";
  const selectedTitle = document.createElement("h4");
  selectedTitle.textContent = "Selected";
  selected.append(selectedTitle);
  selected.append(
    renderRaincloud(response.distribution, {
      fadedCohort: selection.fadedCohort,
      selectedSamples: selection.selectedSamples,
      onTickClick: callbacks.onTickClick,
    }),
  );
  root.append(selected);

  const remainingTitle = document.createElement("h4");
  remainingTitle.textContent = "Remaining";
  root.append(remainingTitle);

  const list = document.createElement("div");
  list.className = "remaining-list";
  for (const entry of response.remaining) {
    list.append(remainingRow(entry, selection, callbacks));
  }
  root.append(list);
  return root;
}

export function queryChips(query: QueryWire): HTMLElement {
  const chips = document.createElement("div");
  chips.className = "query-chips";
  chips.dataset.query = JSON.stringify(query);
  for (const label of query.center) {
    chips.append(chip(label, "chip chip-center"));
  }
  const sep = document.createElement("span");
  sep.className = "chip-separator";
  sep.textContent = "|";
  chips.append(sep);
  for (const label of query.env) {
    chips.append(chip(label, "chip chip-env"));
  }
  if (query.exclusive) {
    chips.append(chip("nothing else", "chip chip-exclusive"));
  }
  return chips;
}

function chip(text: string, className: string): HTMLElement {
  const el = document.createElement("span");
  el.className = className;
  el.textContent = text;
  return el;
}

function remainingRow(
  entry: RemainingEntryWire,
  selection: SelectionState,
  callbacks: QueryBuilderCallbacks,
): HTMLElement {
  const row = document.createElement("div");
  row.className = "remaining-entry";
  row.draggable = true;
  row.dataset.extension = entry.extension ?? "";
  row.dataset.distribution = JSON.stringify(entry.distribution);
  row.addEventListener("dragstart", () => callbacks.onDragStart(entry));

  const header = document.createElement("div");
  header.className = "remaining-header";
  const label = document.createElement("span");
  label.className = "extension-label";
  label.textContent = entry.extension === null ? "None" : `+ ${entry.extension}`;
  const score = document.createElement("span");
  score.className = "score-badge";
  score.textContent = entry.sentinel ? "inf" : entry.score.toPrecision(3);
  header.append(label, score);
  row.append(header);
  row.append(
    renderRaincloud(entry.distribution, {
      width: 260,
      height: 72,
      fadedCohort: selection.fadedCohort,
      selectedSamples: selection.selectedSamples,
      showFences: false,
    }),
  );
  return row;
}

/** One refinement step: None sets exclusivity, a label extends the env. */
export function applyExtension(query: QueryWire, extension: string | null): QueryWire {
  if (extension === null) {
    return { ...query, exclusive: true };
  }
  if (query.env.includes(extension)) return query;
  return { ...query, env: [...query.env, extension] };
}
