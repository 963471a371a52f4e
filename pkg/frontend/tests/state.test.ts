import { describe, expect, it } from "vitest";

import { SceneDoc } from "../src/api.js";
import {
  DEFAULT_POLL_INTERVAL_MS,
  DebugLog,
  RequestGate,
  SEPARATION_MAX_M,
  clampSeparation,
  initialViewerState,
  isValidScale,
  withAnaglyphEnabled,
  withBindingScale,
  withBindingTranslation,
  withSeparation,
} from "../src/state.js";

function sampleDoc(): SceneDoc {
  return {
    intrinsics: "cam.json",
    dictionary: "dict.json",
    anaglyph: { enabled: true, separation_m: 0.06 },
    bindings: [
      { marker_id: 1, mesh: "table.obj", scale: 1.0, translation_m: [0, 0, 0] },
      { marker_id: 2, mesh: "seat.obj", scale: 0.8 },
    ],
  };
}

describe("separation slider", () => {
  it("clamps to [0, 0.2] meters", () => {
    expect(clampSeparation(-0.01)).toBe(0);
    expect(clampSeparation(0)).toBe(0);
    expect(clampSeparation(0.07)).toBeCloseTo(0.07);
    expect(clampSeparation(0.2)).toBe(SEPARATION_MAX_M);
    expect(clampSeparation(5)).toBe(SEPARATION_MAX_M);
    expect(clampSeparation(Number.NaN)).toBe(0);
  });

  it("writes the clamped value into a fresh document", () => {
    const doc = sampleDoc();
    const next = withSeparation(doc, 0.5);
    expect(next.anaglyph?.separation_m).toBe(SEPARATION_MAX_M);
    expect(doc.anaglyph?.separation_m).toBe(0.06);
    expect(next).not.toBe(doc);
  });

  it("creates the anaglyph block when the document lacks one", () => {
    const doc: SceneDoc = { intrinsics: "c", dictionary: "d" };
    expect(withSeparation(doc, 0.05).anaglyph?.separation_m).toBeCloseTo(0.05);
  });
});

describe("anaglyph toggle", () => {
  it("flips enabled without touching other fields", () => {
    const next = withAnaglyphEnabled(sampleDoc(), false);
    expect(next.anaglyph?.enabled).toBe(false);
    expect(next.anaglyph?.separation_m).toBe(0.06);
  });
});

describe("binding scale validation", () => {
  it("rejects zero and negative scales before any request", () => {
    const doc = sampleDoc();
    expect(withBindingScale(doc, 1, 0)).toBeNull();
    expect(withBindingScale(doc, 1, -0.5)).toBeNull();
    expect(withBindingScale(doc, 1, Number.NaN)).toBeNull();
    expect(isValidScale(0)).toBe(false);
    expect(isValidScale(1e-6)).toBe(true);
  });

  it("applies a positive scale to the matching binding only", () => {
    const doc = sampleDoc();
    const next = withBindingScale(doc, 2, 1.5);
    expect(next).not.toBeNull();
    expect(next!.bindings![1]!.scale).toBe(1.5);
    expect(next!.bindings![0]!.scale).toBe(1.0);
    expect(doc.bindings![1]!.scale).toBe(0.8);
  });

  it("returns null for an unknown marker id", () => {
    expect(withBindingScale(sampleDoc(), 99, 1.0)).toBeNull();
  });
});

describe("binding translation", () => {
  it("replaces the translation vector", () => {
    const next = withBindingTranslation(sampleDoc(), 1, [0.01, -0.02, 0.03]);
    expect(next!.bindings![0]!.translation_m).toEqual([0.01, -0.02, 0.03]);
  });

  it("rejects non-finite components", () => {
    expect(withBindingTranslation(sampleDoc(), 1, [0, Number.NaN, 0])).toBeNull();
  });
});

describe("single in-flight request gate", () => {
  it("drops captures while a request is pending", () => {
    const gate = new RequestGate();
    expect(gate.tryAcquire()).toBe(true);
    expect(gate.inFlight).toBe(true);
    expect(gate.tryAcquire()).toBe(false);
    expect(gate.tryAcquire()).toBe(false);
    gate.release();
    expect(gate.tryAcquire()).toBe(true);
  });
});

describe("debug log", () => {
  it("records calls in order and keeps them bounded", () => {
    const log = new DebugLog(3);
    log.record("GET", "/v1/health", "ok", 1);
    log.record("GET", "/v1/scene", "ok", 2);
    log.record("POST", "/v1/process", "ok", 3);
    log.record("POST", "/v1/process", "400 bad_image", 4);
    expect(log.entries.length).toBe(3);
    expect(log.entries[0]!.path).toBe("/v1/scene");
    expect(log.entries[2]!.outcome).toBe("400 bad_image");
  });

  it("notifies its listener on every record", () => {
    const log = new DebugLog();
    let calls = 0;
    log.onChange(() => {
      calls += 1;
    });
    log.record("GET", "/v1/health", "ok");
    log.record("GET", "/v1/scene", "ok");
    expect(calls).toBe(2);
  });
});

describe("initial state", () => {
  it("starts polling at the default 500 ms with the webcam source", () => {
    const state = initialViewerState();
    expect(state.pollIntervalMs).toBe(DEFAULT_POLL_INTERVAL_MS);
    expect(DEFAULT_POLL_INTERVAL_MS).toBe(500);
    expect(state.source).toBe("webcam");
    expect(state.scene).toBeNull();
    expect(state.status).toBe("unknown");
  });
});
