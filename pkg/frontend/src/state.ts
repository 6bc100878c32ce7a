/** Client-side linking state: selections live entirely in the browser and
 * every view renders as a pure function of this object. */

import type { SubjectWire } from "./types.js";

export interface SelectionState {
  selectedSamples: Set<string>;
  activeSubject: SubjectWire | null;
  fadedCohort: "A" | "B" | null;
  colorAssignments: Map<string, number>;
}

export function emptySelection(): SelectionState {
  return {
    selectedSamples: new Set(),
    activeSubject: null,
    fadedCohort: null,
    colorAssignments: new Map(),
  };
}

export function cloneSelection(state: SelectionState): SelectionState {
  return {
    selectedSamples: new Set(state.selectedSamples),
    activeSubject: state.activeSubject,
    fadedCohort: state.fadedCohort,
    colorAssignments: new Map(state.colorAssignments),
  };
}

export type SelectionListener = (state: SelectionState) => void;

export class SelectionStore {
  private state = emptySelection();
  private listeners: SelectionListener[] = [];

  get(): SelectionState {
    return this.state;
  }

  subscribe(listener: SelectionListener): void {
    this.listeners.push(listener);
  }

  /** Replace the state wholesale; replaying a state reproduces the views. */
  replace(state: SelectionState): void {
    this.state = state;
    for (const listener of this.listeners) listener(state);
  }

  update(change: Partial<SelectionState>): void {
    this.replace({ ...cloneSelection(this.state), ...change });
  }

  toggleSample(sampleId: string, subject: SubjectWire): void {
    const next = cloneSelection(this.state);
    if (next.selectedSamples.has(sampleId)) {
      next.selectedSamples.delete(sampleId);
    } else {
      next.selectedSamples.add(sampleId);
    }
    next.activeSubject = subject;
    this.replace(next);
  }
}
