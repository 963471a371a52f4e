/**
 * Viewer state and the invariants the UI enforces client-side:
 *
 * - the separation slider is clamped to [0, 0.2] meters;
 * - binding scale edits with scale <= 0 are rejected before any request
 *   is sent;
 * - at most one /v1/process request is in flight; captures arriving while
 *   one is pending are dropped, not queued;
 * - controls mirror the scene document the service acknowledged, never a
 *   locally guessed one;
 * - every HTTP call is recorded in a bounded debug log.
 */

import { SceneDoc } from "./api.js";

export const SEPARATION_MIN_M = 0;
export const SEPARATION_MAX_M = 0.2;
export const DEFAULT_POLL_INTERVAL_MS = 500;

export function clampSeparation(value: number): number {
  if (!Number.isFinite(value)) return SEPARATION_MIN_M;
  return Math.min(SEPARATION_MAX_M, Math.max(SEPARATION_MIN_M, value));
}

export function isValidScale(value: number): boolean {
  return Number.isFinite(value) && value > 0;
}

function cloneDoc(doc: SceneDoc): SceneDoc {
  return JSON.parse(JSON.stringify(doc)) as SceneDoc;
}

/** Returns a new scene document with the separation set (clamped). */
export function withSeparation(doc: SceneDoc, meters: number): SceneDoc {
  const next = cloneDoc(doc);
  next.anaglyph = { ...(next.anaglyph ?? {}), separation_m: clampSeparation(meters) };
  return next;
}

/** Returns a new scene document with the anaglyph toggle set. */
export function withAnaglyphEnabled(doc: SceneDoc, enabled: boolean): SceneDoc {
  const next = cloneDoc(doc);
  next.anaglyph = { ...(next.anaglyph ?? {}), enabled };
  return next;
}

/**
 * Returns a new scene document with one binding's uniform scale set, or
 * null when the value fails client-side validation or no binding matches.
 * A null return means no request should be sent.
 */
export function withBindingScale(
  doc: SceneDoc,
  markerId: number,
  scale: number,
): SceneDoc | null {
  if (!isValidScale(scale)) return null;
  const next = cloneDoc(doc);
  const binding = (next.bindings ?? []).find((b) => b.marker_id === markerId);
  if (!binding) return null;
  binding.scale = scale;
  return next;
}

/** Returns a new scene document with one binding's translation set, or null. */
export function withBindingTranslation(
  doc: SceneDoc,
  markerId: number,
  translation: [number, number, number],
): SceneDoc | null {
  if (!translation.every((v) => Number.isFinite(v))) return null;
  const next = cloneDoc(doc);
  const binding = (next.bindings ?? []).find((b) => b.marker_id === markerId);
  if (!binding) return null;
  binding.translation_m = [...translation];
  return next;
}

/**
 * Single-in-flight gate for frame processing. tryAcquire() returns false
 * while a request is pending, which is how new captures get dropped.
 */
export class RequestGate {
  private busy = false;

  tryAcquire(): boolean {
    if (this.busy) return false;
    this.busy = true;
    return true;
  }

  release(): void {
    this.busy = false;
  }

  get inFlight(): boolean {
    return this.busy;
  }
}

export interface DebugEntry {
  at: number;
  method: string;
  path: string;
  outcome: string;
}

/** Bounded append-only log of HTTP activity for the debug panel. */
export class DebugLog {
  private readonly entries_: DebugEntry[] = [];
  readonly capacity: number;
  private listener: (() => void) | null = null;

  constructor(capacity = 200) {
    this.capacity = capacity;
  }

  record(method: string, path: string, outcome: string, at = Date.now()): void {
    this.entries_.push({ at, method, path, outcome });
    if (this.entries_.length > this.capacity) {
      this.entries_.splice(0, this.entries_.length - this.capacity);
    }
    this.listener?.();
  }

  onChange(listener: () => void): void {
    this.listener = listener;
  }

  get entries(): readonly DebugEntry[] {
    return this.entries_;
  }
}

export type ServiceStatus = "unknown" | "ok" | "unreachable";

export interface ViewerState {
  scene: SceneDoc | null;
  status: ServiceStatus;
  pollIntervalMs: number;
  source: "webcam" | "file";
  lastTimings: Record<string, number> | null;
  droppedCaptures: number;
}

export function initialViewerState(): ViewerState {
  return {
    scene: null,
    status: "unknown",
    pollIntervalMs: DEFAULT_POLL_INTERVAL_MS,
    source: "webcam",
    lastTimings: null,
    droppedCaptures: 0,
  };
}
