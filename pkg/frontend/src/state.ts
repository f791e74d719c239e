/**
 * Inspector state and its transitions.
 *
 * All transitions are pure: they take a state and return a new one,
 * never mutating. The invariant maintained throughout:
 * `selected_candidate_index` is always a valid index into the
 * selected element's `candidate_ids` (and 0 when nothing is
 * selected).
 */

import { hitTest } from "./hit.js";
import type { AnalysisReport, TappableElement } from "./types.js";

export interface InspectorState {
  report: AnalysisReport;
  /** element_id of the clicked element, or null for no selection. */
  selected_element: string | null;
  /** Index into the selected element's candidate_ids. */
  selected_candidate_index: number;
  overlay_visible: boolean;
}

export function initialState(report: AnalysisReport): InspectorState {
  return {
    report,
    selected_element: null,
    selected_candidate_index: 0,
    overlay_visible: true,
  };
}

export function elementById(
  report: AnalysisReport,
  elementId: string,
): TappableElement {
  const element = report.elements.find((e) => e.element_id === elementId);
  if (!element) {
    throw new Error(`report has no element ${elementId}`);
  }
  return element;
}

/** The clicked element: owner of the candidate list the panel shows. */
export function selectedElement(state: InspectorState): TappableElement | null {
  return state.selected_element === null
    ? null
    : elementById(state.report, state.selected_element);
}

/**
 * The element whose stored values the panel currently shows: the
 * candidate chosen within the clicked element's list (initially the
 * topmost, i.e. the one a tap would actually hit).
 */
export function displayedElement(state: InspectorState): TappableElement | null {
  const selected = selectedElement(state);
  if (!selected) {
    return null;
  }
  const candidateId = selected.candidate_ids[state.selected_candidate_index];
  if (candidateId === undefined) {
    throw new Error(
      `candidate index ${state.selected_candidate_index} out of range for ` +
        `${selected.element_id}`,
    );
  }
  return elementById(state.report, candidateId);
}

/**
 * Select whatever is under the point (page CSS px). Clicking empty
 * background clears the selection. Selecting always resets to
 * candidate 0, whose values the panel then shows.
 */
export function selectAt(
  state: InspectorState,
  x: number,
  y: number,
): InspectorState {
  const hit = hitTest(state.report, x, y);
  return {
    ...state,
    selected_element: hit ? hit.element_id : null,
    selected_candidate_index: 0,
  };
}

/**
 * Switch the panel to another candidate of the current selection.
 * Out-of-range or non-integer indexes (and calls with no selection)
 * leave the state unchanged.
 */
export function switchCandidate(
  state: InspectorState,
  index: number,
): InspectorState {
  const selected = selectedElement(state);
  if (
    !selected ||
    !Number.isInteger(index) ||
    index < 0 ||
    index >= selected.candidate_ids.length
  ) {
    return state;
  }
  return { ...state, selected_candidate_index: index };
}

export function toggleOverlay(state: InspectorState): InspectorState {
  return { ...state, overlay_visible: !state.overlay_visible };
}
