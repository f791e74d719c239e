/**
 * Hit-testing clicks against report geometry.
 *
 * Elements are reported bottom-most first, so scanning in reverse
 * finds the topmost element under a point — the same element the
 * report's candidate grouping puts first in `candidate_ids`, since
 * both orders derive from paint order.
 */

import type { AnalysisReport, PixelRect, TappableElement } from "./types.js";

/**
 * Half-open containment: a rect owns [x, x+w) × [y, y+h). A point on
 * the shared edge of two touching rects belongs to at most one of
 * them, matching the report's rule that touching edges don't compete.
 */
export function rectContains(rect: PixelRect, x: number, y: number): boolean {
  return (
    x >= rect.x &&
    x < rect.x + rect.width &&
    y >= rect.y &&
    y < rect.y + rect.height
  );
}

/** The topmost element whose page rect contains the point, if any. */
export function hitTest(
  report: AnalysisReport,
  x: number,
  y: number,
): TappableElement | null {
  for (let i = report.elements.length - 1; i >= 0; i--) {
    const element = report.elements[i]!;
    if (rectContains(element.page_rect, x, y)) {
      return element;
    }
  }
  return null;
}
