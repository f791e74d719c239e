/**
 * TypeScript mirrors of the tapaudit HTTP API documents.
 *
 * Field names are the wire names (snake_case): these types describe
 * what the server sends, not a client-side remodel of it.
 */

export interface PixelRect {
  x: number;
  y: number;
  width: number;
  height: number;
}

export interface PhysicalSizeMm {
  width_mm: number;
  height_mm: number;
}

export interface TappableElement {
  element_id: string;
  frame_id: string;
  node_path: string;
  tag: string;
  sources: string[];
  /** Page coordinates in CSS pixels. */
  page_rect: PixelRect;
  size_mm: PhysicalSizeMm;
  /** Predicted tap success probability in [0, 1). */
  success_rate: number;
  /** Overlapping element ids, topmost first, including this element. */
  candidate_ids: string[];
}

export interface DeviceProfile {
  name: string;
  viewport_css_px: [number, number];
  device_pixel_ratio: number;
  ppi: number;
  user_agent: string;
}

export interface AppliedOptions {
  device: string;
  waiting_time_ms: number;
  execute_js: boolean;
  cookies_supplied: boolean;
  list_success_rates: boolean;
}

export interface AnalysisReport {
  schema_version: number;
  url: string;
  device: DeviceProfile;
  options: AppliedOptions;
  page_size_css_px: [number, number];
  elements: TappableElement[];
  exclusions: Record<string, number>;
  warnings: string[];
}

/** GET /api/reports/{id}: the report plus storage metadata. */
export interface StoredReport extends AnalysisReport {
  report_id: string;
  created_at: number;
  transient: boolean;
}

export interface CookiePair {
  name: string;
  value: string;
}

/** POST /api/analyze request body. */
export interface AnalyzeRequest {
  url: string;
  device: string;
  waiting_time_ms?: number;
  execute_js?: boolean;
  cookies?: CookiePair[];
  list_success_rates?: boolean;
}

export interface AnalyzeResponse {
  report_id: string;
  transient: boolean;
}
