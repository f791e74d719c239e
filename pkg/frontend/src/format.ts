/**
 * Display formatting for stored report values.
 *
 * These functions only format; every number they receive comes
 * verbatim from the report. Nothing here recomputes a rate or a
 * physical size.
 */

import type { PhysicalSizeMm, PixelRect } from "./types.js";

/** "0.8166" -> "81.66%"; always two decimals. */
export function formatRate(rate: number): string {
  if (!Number.isFinite(rate)) {
    throw new Error(`success rate must be finite, got ${rate}`);
  }
  return `${(rate * 100).toFixed(2)}%`;
}

/** Drop noise digits: integers stay bare, fractions keep two decimals. */
function trimmed(value: number): string {
  const rounded = Math.round(value * 100) / 100;
  return Number.isInteger(rounded) ? String(rounded) : rounded.toFixed(2);
}

/** "350 × 44 px" from the element's page rect. */
export function formatPixelSize(rect: PixelRect): string {
  return `${trimmed(rect.width)} × ${trimmed(rect.height)} px`;
}

/** "57.97 × 7.29 mm" from the element's stored physical size. */
export function formatPhysicalSize(size: PhysicalSizeMm): string {
  return `${size.width_mm.toFixed(2)} × ${size.height_mm.toFixed(2)} mm`;
}

/** Candidate labels are positional: "#1" is the topmost. */
export function candidateLabel(index: number): string {
  return `#${index + 1}`;
}
