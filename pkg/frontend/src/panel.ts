/**
 * Detail-panel view derivation.
 *
 * The panel shows the four stored facts about the displayed element —
 * success rate, pixel size, physical size, candidate list — formatted
 * for display and nothing else. Every value is read from the report;
 * the client never recomputes a rate or a size.
 */

import {
  candidateLabel,
  formatPhysicalSize,
  formatPixelSize,
  formatRate,
} from "./format.js";
import {
  displayedElement,
  elementById,
  selectedElement,
  type InspectorState,
} from "./state.js";

export interface CandidateView {
  label: string;
  element_id: string;
  tag: string;
  /** True for the candidate whose values the panel currently shows. */
  active: boolean;
}

export interface PanelView {
  element_id: string;
  tag: string;
  node_path: string;
  sources: string[];
  success_rate: string;
  pixel_size: string;
  physical_size: string;
  candidates: CandidateView[];
}

/** Null when nothing is selected (panel hidden). */
export function panelView(state: InspectorState): PanelView | null {
  const selected = selectedElement(state);
  const displayed = displayedElement(state);
  if (!selected || !displayed) {
    return null;
  }
  return {
    element_id: displayed.element_id,
    tag: displayed.tag,
    node_path: displayed.node_path,
    sources: displayed.sources,
    success_rate: formatRate(displayed.success_rate),
    pixel_size: formatPixelSize(displayed.page_rect),
    physical_size: formatPhysicalSize(displayed.size_mm),
    candidates: selected.candidate_ids.map((candidateId, index) => ({
      label: candidateLabel(index),
      element_id: candidateId,
      tag: elementById(state.report, candidateId).tag,
      active: index === state.selected_candidate_index,
    })),
  };
}
