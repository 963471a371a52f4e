/**
 * Browser entry point. Wires the DOM in index.html to the service client.
 *
 * Every displayed pixel comes from a service response: frames are captured
 * locally (webcam or file), posted to /v1/process, and the returned
 * composite is what gets shown, with detection outlines drawn over it from
 * the detections in the same response.
 */

import { ApiClient, ApiError, Detection, SceneDoc } from "./api.js";
import { drawDetections } from "./overlay.js";
import {
  DebugLog,
  RequestGate,
  ViewerState,
  clampSeparation,
  initialViewerState,
  withAnaglyphEnabled,
  withBindingScale,
  withBindingTranslation,
  withSeparation,
} from "./state.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const serviceUrl =
  new URLSearchParams(location.search).get("service") ?? "http://localhost:8000";

const client = new ApiClient(serviceUrl);
const state: ViewerState = initialViewerState();
const gate = new RequestGate();
const log = new DebugLog();

const video = el<HTMLVideoElement>("webcam");
const captureCanvas = el<HTMLCanvasElement>("capture");
const outputImg = el<HTMLImageElement>("output");
const overlayCanvas = el<HTMLCanvasElement>("overlay");
const banner = el<HTMLDivElement>("banner");
const timingsBox = el<HTMLPreElement>("timings");
const logBox = el<HTMLPreElement>("debug-log");
const controlsBox = el<HTMLDivElement>("controls");
const sourceSelect = el<HTMLSelectElement>("source");
const fileInput = el<HTMLInputElement>("file-input");
const intervalInput = el<HTMLInputElement>("interval");
const droppedBox = el<HTMLSpanElement>("dropped");

let fileFrame: ImageBitmap | null = null;
let pollTimer: number | null = null;

function setStatus(status: ViewerState["status"], detail = ""): void {
  state.status = status;
  if (status === "ok") {
    banner.textContent = "";
    banner.hidden = true;
  } else {
    banner.hidden = false;
    banner.textContent =
      status === "unreachable"
        ? `Service unreachable at ${serviceUrl}${detail ? `: ${detail}` : ""}`
        : "Connecting...";
  }
}

log.onChange(() => {
  logBox.textContent = log.entries
    .slice(-30)
    .map((e) => `${new Date(e.at).toISOString().slice(11, 23)} ${e.method} ${e.path} ${e.outcome}`)
    .join("\n");
});

async function logged<T>(method: string, path: string, call: () => Promise<T>): Promise<T> {
  try {
    const out = await call();
    log.record(method, path, "ok");
    return out;
  } catch (err) {
    const outcome = err instanceof ApiError ? `${err.status} ${err.code}` : "network-error";
    log.record(method, path, outcome);
    throw err;
  }
}

function renderTimings(timings: Record<string, number> | null): void {
  if (!timings) {
    timingsBox.textContent = "";
    return;
  }
  timingsBox.textContent = Object.entries(timings)
    .map(([k, v]) => `${k.padEnd(12)} ${v.toFixed(1)} ms`)
    .join("\n");
}

function renderResult(b64: string, detections: Detection[]): void {
  outputImg.onload = () => {
    overlayCanvas.width = outputImg.naturalWidth;
    overlayCanvas.height = outputImg.naturalHeight;
    const ctx = overlayCanvas.getContext("2d");
    if (ctx) drawDetections(ctx, detections, overlayCanvas.width, overlayCanvas.height);
  };
  outputImg.src = `data:image/png;base64,${b64}`;
}

function captureBlob(): Promise<Blob | null> {
  const ctx = captureCanvas.getContext("2d");
  if (!ctx) return Promise.resolve(null);
  if (state.source === "webcam") {
    if (video.videoWidth === 0) return Promise.resolve(null);
    captureCanvas.width = video.videoWidth;
    captureCanvas.height = video.videoHeight;
    ctx.drawImage(video, 0, 0);
  } else {
    if (!fileFrame) return Promise.resolve(null);
    captureCanvas.width = fileFrame.width;
    captureCanvas.height = fileFrame.height;
    ctx.drawImage(fileFrame, 0, 0);
  }
  return new Promise((resolve) => captureCanvas.toBlob(resolve, "image/png"));
}

async function tick(): Promise<void> {
  if (!gate.tryAcquire()) {
    state.droppedCaptures += 1;
    droppedBox.textContent = String(state.droppedCaptures);
    return;
  }
  try {
    const blob = await captureBlob();
    if (!blob) return;
    const result = await logged("POST", "/v1/process", () => client.processPng(blob));
    setStatus("ok");
    state.lastTimings = result.timings_ms;
    renderTimings(state.lastTimings);
    renderResult(result.image_png_b64, result.detections);
  } catch (err) {
    if (!(err instanceof ApiError)) setStatus("unreachable", String(err));
  } finally {
    gate.release();
  }
}

function restartPolling(): void {
  if (pollTimer !== null) clearInterval(pollTimer);
  pollTimer = window.setInterval(() => void tick(), state.pollIntervalMs);
}

/** Sends the edited document and re-syncs controls from the acknowledgment. */
async function pushScene(doc: SceneDoc): Promise<void> {
  try {
    const acked = await logged("PUT", "/v1/scene", () => client.putScene(doc));
    state.scene = acked;
    setStatus("ok");
  } catch (err) {
    if (!(err instanceof ApiError)) setStatus("unreachable", String(err));
  }
  renderControls();
}

function renderControls(): void {
  controlsBox.textContent = "";
  const doc = state.scene;
  if (!doc) return;

  const ana = doc.anaglyph ?? {};

  const enabledLabel = document.createElement("label");
  const enabledBox = document.createElement("input");
  enabledBox.type = "checkbox";
  enabledBox.checked = ana.enabled ?? true;
  enabledBox.onchange = () => void pushScene(withAnaglyphEnabled(doc, enabledBox.checked));
  enabledLabel.append(enabledBox, " anaglyph enabled");
  controlsBox.append(enabledLabel);

  const sepLabel = document.createElement("label");
  const sep = document.createElement("input");
  sep.type = "range";
  sep.min = "0";
  sep.max = "0.2";
  sep.step = "0.005";
  sep.value = String(clampSeparation(ana.separation_m ?? 0.06));
  const sepValue = document.createElement("span");
  sepValue.textContent = `${Number(sep.value).toFixed(3)} m`;
  sep.oninput = () => {
    sepValue.textContent = `${clampSeparation(Number(sep.value)).toFixed(3)} m`;
  };
  sep.onchange = () => void pushScene(withSeparation(doc, Number(sep.value)));
  sepLabel.append("separation ", sep, sepValue);
  controlsBox.append(sepLabel);

  for (const binding of doc.bindings ?? []) {
    const row = document.createElement("fieldset");
    const legend = document.createElement("legend");
    legend.textContent = `marker ${binding.marker_id} (${binding.mesh})`;
    row.append(legend);

    const scaleInput = document.createElement("input");
    scaleInput.type = "number";
    scaleInput.step = "0.1";
    scaleInput.value = String(binding.scale ?? 1.0);
    const scaleNote = document.createElement("span");
    scaleInput.onchange = () => {
      const next = withBindingScale(doc, binding.marker_id, Number(scaleInput.value));
      if (next === null) {
        scaleNote.textContent = " scale must be > 0; not sent";
        scaleInput.value = String(binding.scale ?? 1.0);
        return;
      }
      scaleNote.textContent = "";
      void pushScene(next);
    };
    const scaleLabel = document.createElement("label");
    scaleLabel.append("scale ", scaleInput, scaleNote);
    row.append(scaleLabel);

    const t = binding.translation_m ?? [0, 0, 0];
    const axisInputs: HTMLInputElement[] = [];
    const transLabel = document.createElement("label");
    transLabel.append("translation (m) ");
    for (let axis = 0; axis < 3; axis++) {
      const input = document.createElement("input");
      input.type = "number";
      input.step = "0.01";
      input.value = String(t[axis] ?? 0);
      input.onchange = () => {
        const xyz = axisInputs.map((a) => Number(a.value)) as [number, number, number];
        const next = withBindingTranslation(doc, binding.marker_id, xyz);
        if (next !== null) void pushScene(next);
      };
      axisInputs.push(input);
      transLabel.append(input);
    }
    row.append(transLabel);
    controlsBox.append(row);
  }
}

async function syncScene(): Promise<void> {
  try {
    state.scene = await logged("GET", "/v1/scene", () => client.getScene());
    setStatus("ok");
  } catch (err) {
    if (!(err instanceof ApiError)) setStatus("unreachable", String(err));
  }
  renderControls();
}

async function startWebcam(): Promise<void> {
  try {
    const stream = await navigator.mediaDevices.getUserMedia({ video: true });
    video.srcObject = stream;
    await video.play();
  } catch {
    banner.hidden = false;
    banner.textContent = "Webcam unavailable; switch the source to file upload.";
  }
}

sourceSelect.onchange = () => {
  state.source = sourceSelect.value === "file" ? "file" : "webcam";
  fileInput.hidden = state.source !== "file";
  video.hidden = state.source !== "webcam";
  if (state.source === "webcam") void startWebcam();
};

fileInput.onchange = async () => {
  const file = fileInput.files?.[0];
  if (!file) return;
  fileFrame = await createImageBitmap(file);
  void tick();
};

intervalInput.onchange = () => {
  const ms = Number(intervalInput.value);
  if (Number.isFinite(ms) && ms >= 50) {
    state.pollIntervalMs = ms;
    restartPolling();
  } else {
    intervalInput.value = String(state.pollIntervalMs);
  }
};

async function boot(): Promise<void> {
  intervalInput.value = String(state.pollIntervalMs);
  try {
    await logged("GET", "/v1/health", () => client.health());
    setStatus("ok");
  } catch (err) {
    setStatus("unreachable", err instanceof Error ? err.message : String(err));
  }
  await syncScene();
  await startWebcam();
  restartPolling();
}

void boot();
