import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { AnalysisReport } from "../src/types.js";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

/** A committed report fixture, parsed fresh so tests can't share mutations. */
export function loadReport(name: string): AnalysisReport {
  return JSON.parse(readFileSync(join(FIXTURES, `${name}.json`), "utf-8"));
}
