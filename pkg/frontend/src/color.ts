/**
 * Success-rate colour ramp: red (0) through yellow (0.5) to green (1),
 * the same scale the server uses on its annotated screenshots, so the
 * client-drawn overlay reads identically.
 */

export interface Rgb {
  r: number;
  g: number;
  b: number;
}

export function rateColor(rate: number): Rgb {
  if (!Number.isFinite(rate)) {
    throw new Error(`success rate must be finite, got ${rate}`);
  }
  const t = Math.min(1, Math.max(0, rate));
  if (t <= 0.5) {
    return { r: 255, g: Math.round(510 * t), b: 0 };
  }
  return { r: Math.round(510 * (1 - t)), g: 255, b: 0 };
}

export function rateCss(rate: number): string {
  const { r, g, b } = rateColor(rate);
  return `rgb(${r}, ${g}, ${b})`;
}
