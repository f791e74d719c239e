/**
 * Client-drawn overlay: one outline per tappable element on top of
 * the *raw* screenshot, coloured by stored success rate, with the
 * displayed element highlighted.
 *
 * Report rects are CSS pixels; the screenshot is device pixels. The
 * only geometry the client does is that scaling — multiply by the
 * report's device_pixel_ratio, exactly the rule the server's own
 * annotator uses.
 */

import { rateCss } from "./color.js";
import { displayedElement, type InspectorState } from "./state.js";
import type { PixelRect } from "./types.js";

export interface OverlayRect {
  element_id: string;
  /** Screenshot (device-pixel) coordinates. */
  rect: PixelRect;
  color: string;
  highlighted: boolean;
}

/**
 * All outlines to draw, in paint order with the highlighted one moved
 * last so it is never buried under its own overlap partners. Empty
 * when the overlay is toggled off.
 */
export function overlayRects(state: InspectorState): OverlayRect[] {
  if (!state.overlay_visible) {
    return [];
  }
  const scale = state.report.device.device_pixel_ratio;
  const displayed = displayedElement(state);
  const rects = state.report.elements.map((element) => ({
    element_id: element.element_id,
    rect: {
      x: element.page_rect.x * scale,
      y: element.page_rect.y * scale,
      width: element.page_rect.width * scale,
      height: element.page_rect.height * scale,
    },
    color: rateCss(element.success_rate),
    highlighted: displayed !== null && element.element_id === displayed.element_id,
  }));
  const highlighted = rects.filter((r) => r.highlighted);
  return rects.filter((r) => !r.highlighted).concat(highlighted);
}

/**
 * The subset of CanvasRenderingContext2D the overlay needs; tests
 * supply a recording fake.
 */
export interface OverlayContext {
  lineWidth: number;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  clearRect(x: number, y: number, width: number, height: number): void;
  strokeRect(x: number, y: number, width: number, height: number): void;
}

export const STROKE_WIDTH = 3;
export const HIGHLIGHT_STROKE_WIDTH = 6;
export const HIGHLIGHT_HALO = "rgb(255, 255, 255)";

export function drawOverlay(
  ctx: OverlayContext,
  state: InspectorState,
  canvasWidth: number,
  canvasHeight: number,
): void {
  ctx.clearRect(0, 0, canvasWidth, canvasHeight);
  for (const { rect, color, highlighted } of overlayRects(state)) {
    if (highlighted) {
      ctx.lineWidth = HIGHLIGHT_STROKE_WIDTH + 4;
      ctx.strokeStyle = HIGHLIGHT_HALO;
      ctx.strokeRect(rect.x, rect.y, rect.width, rect.height);
      ctx.lineWidth = HIGHLIGHT_STROKE_WIDTH;
    } else {
      ctx.lineWidth = STROKE_WIDTH;
    }
    ctx.strokeStyle = color;
    ctx.strokeRect(rect.x, rect.y, rect.width, rect.height);
  }
}
