/**
 * DOM wiring: the one impure module. Everything it renders comes from
 * the pure view/state modules, so this file is only event plumbing.
 */

import { ApiClient, ApiError } from "./api.js";
import { panelView } from "./panel.js";
import { drawOverlay } from "./overlay.js";
import {
  initialState,
  selectAt,
  switchCandidate,
  toggleOverlay,
  type InspectorState,
} from "./state.js";
import type { CookiePair, StoredReport } from "./types.js";

const api = new ApiClient("");

function byId<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing #${id}`);
  }
  return node as T;
}

const form = byId<HTMLFormElement>("analyze-form");
const urlInput = byId<HTMLInputElement>("url");
const deviceSelect = byId<HTMLSelectElement>("device");
const waitInput = byId<HTMLInputElement>("wait-ms");
const jsCheckbox = byId<HTMLInputElement>("execute-js");
const ratesCheckbox = byId<HTMLInputElement>("list-rates");
const cookiesInput = byId<HTMLTextAreaElement>("cookies");
const cookieWarning = byId<HTMLElement>("cookie-warning");
const submitButton = byId<HTMLButtonElement>("submit");
const errorBox = byId<HTMLElement>("error");
const statusBox = byId<HTMLElement>("status");
const viewer = byId<HTMLElement>("viewer");
const screenshot = byId<HTMLImageElement>("screenshot");
const canvas = byId<HTMLCanvasElement>("overlay");
const overlayToggle = byId<HTMLInputElement>("overlay-visible");
const panel = byId<HTMLElement>("panel");
const exportLink = byId<HTMLAnchorElement>("export-link");

let state: InspectorState | null = null;

function parseCookies(text: string): CookiePair[] {
  const pairs: CookiePair[] = [];
  for (const line of text.split("\n")) {
    const entry = line.trim();
    if (!entry) {
      continue;
    }
    const eq = entry.indexOf("=");
    if (eq <= 0) {
      throw new Error(`cookie line must be NAME=VALUE, got "${entry}"`);
    }
    pairs.push({ name: entry.slice(0, eq).trim(), value: entry.slice(eq + 1) });
  }
  return pairs;
}

function showError(message: string): void {
  errorBox.textContent = message;
  errorBox.hidden = !message;
}

function render(): void {
  if (!state) {
    return;
  }
  const ctx = canvas.getContext("2d");
  if (ctx) {
    drawOverlay(ctx, state, canvas.width, canvas.height);
  }
  renderPanel();
}

function renderPanel(): void {
  if (!state) {
    return;
  }
  const view = panelView(state);
  panel.innerHTML = "";
  if (!view) {
    panel.hidden = true;
    return;
  }
  panel.hidden = false;

  const title = document.createElement("h2");
  title.textContent = `<${view.tag}> ${view.element_id}`;
  panel.appendChild(title);

  const path = document.createElement("p");
  path.className = "node-path";
  path.textContent = view.node_path;
  panel.appendChild(path);

  const facts = document.createElement("dl");
  const rows: Array<[string, string]> = [
    ["Success rate", view.success_rate],
    ["Pixel size", view.pixel_size],
    ["Physical size", view.physical_size],
    ["Tappable via", view.sources.join(", ")],
  ];
  for (const [label, value] of rows) {
    const dt = document.createElement("dt");
    dt.textContent = label;
    const dd = document.createElement("dd");
    dd.textContent = value;
    facts.appendChild(dt);
    facts.appendChild(dd);
  }
  panel.appendChild(facts);

  const heading = document.createElement("h3");
  heading.textContent =
    view.candidates.length > 1 ? "Candidates on this spot" : "Candidates";
  panel.appendChild(heading);

  const list = document.createElement("div");
  list.className = "candidates";
  view.candidates.forEach((candidate, index) => {
    const button = document.createElement("button");
    button.type = "button";
    button.textContent = `${candidate.label} <${candidate.tag}> ${candidate.element_id}`;
    button.classList.toggle("active", candidate.active);
    button.addEventListener("click", () => {
      if (state) {
        state = switchCandidate(state, index);
        render();
      }
    });
    list.appendChild(button);
  });
  panel.appendChild(list);
}

async function loadDevices(): Promise<void> {
  const devices = await api.devices();
  deviceSelect.innerHTML = "";
  for (const device of devices) {
    const option = document.createElement("option");
    option.value = device.name;
    option.textContent = `${device.name} (${device.viewport_css_px[0]}×${device.viewport_css_px[1]})`;
    if (device.name === "iPhone 13") {
      option.selected = true;
    }
    deviceSelect.appendChild(option);
  }
}

function showReport(report: StoredReport): void {
  state = initialState(report);
  screenshot.src = api.rawScreenshotUrl(report.report_id);
  exportLink.href = api.annotatedScreenshotUrl(report.report_id);
  screenshot.onload = () => {
    canvas.width = screenshot.naturalWidth;
    canvas.height = screenshot.naturalHeight;
    viewer.hidden = false;
    statusBox.textContent = report.transient
      ? `${report.elements.length} tappable elements — transient report (cookies supplied), in memory only`
      : `${report.elements.length} tappable elements`;
    render();
  };
}

form.addEventListener("submit", async (event) => {
  event.preventDefault();
  showError("");
  submitButton.disabled = true;
  statusBox.textContent = "analyzing…";
  try {
    const report = await api.submitAnalysis({
      url: urlInput.value,
      device: deviceSelect.value,
      waiting_time_ms: Number(waitInput.value),
      execute_js: jsCheckbox.checked,
      list_success_rates: ratesCheckbox.checked,
      cookies: parseCookies(cookiesInput.value),
    });
    showReport(report);
  } catch (error) {
    statusBox.textContent = "";
    if (error instanceof ApiError) {
      showError(error.stage ? `${error.message} (stage: ${error.stage})` : error.message);
    } else {
      showError(String(error));
    }
  } finally {
    submitButton.disabled = false;
  }
});

cookiesInput.addEventListener("input", () => {
  cookieWarning.hidden = cookiesInput.value.trim() === "";
});

canvas.addEventListener("click", (event) => {
  if (!state) {
    return;
  }
  // displayed CSS px -> screenshot device px -> page CSS px
  const bounds = canvas.getBoundingClientRect();
  const devicePerDisplayed = canvas.width / bounds.width;
  const scale = state.report.device.device_pixel_ratio;
  const pageX = ((event.clientX - bounds.left) * devicePerDisplayed) / scale;
  const pageY = ((event.clientY - bounds.top) * devicePerDisplayed) / scale;
  state = selectAt(state, pageX, pageY);
  render();
});

overlayToggle.addEventListener("change", () => {
  if (state) {
    state = toggleOverlay(state);
    render();
  }
});

loadDevices().catch((error) => showError(`could not load devices: ${error}`));
