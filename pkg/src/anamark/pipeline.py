"""End-to-end frame processing: detect, pose, render, composite."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .anaglyph import composite
from .errors import EngineError
from .imaging import (BinaryImage, Frame, GrayImage, QuadParams, ThresholdParams,
                      binarize, find_quads, to_grayscale)
from .marker import DecodeParams, DetectedMarker, MarkerDictionary, decode
from .pose import CameraIntrinsics, Pose, eye_offset, pose_from_marker
from .renderer import DEFAULT_LIGHT, RenderTarget, render
from .scene import Scene, resolve


@dataclass
class PipelineResult:
    augmented: Frame
    detections: list[DetectedMarker]
    poses: dict[int, Pose]
    timings: dict[str, float]  # per-stage milliseconds
    left_target: RenderTarget | None = None
    right_target: RenderTarget | None = None
    gray: GrayImage | None = None
    binary: BinaryImage | None = None


def process_frame(frame: Frame, scene: Scene, dictionary: MarkerDictionary,
                  cam: CameraIntrinsics,
                  threshold: ThresholdParams = ThresholdParams(),
                  quad_params: QuadParams = QuadParams(),
                  decode_params: DecodeParams = DecodeParams(),
                  light_dir=DEFAULT_LIGHT) -> PipelineResult:
    """Run the full pipeline on one frame.

    Per-marker failures (undecodable quads, degenerate or low-quality poses)
    are skipped; only configuration problems raise.
    """
    timings: dict[str, float] = {}

    def tick():
        return time.perf_counter()

    t0 = tick()
    gray = to_grayscale(frame)
    timings["grayscale"] = (tick() - t0) * 1e3

    t0 = tick()
    binary = binarize(gray, threshold)
    timings["binarize"] = (tick() - t0) * 1e3

    t0 = tick()
    quads = find_quads(binary, quad_params)
    timings["find_quads"] = (tick() - t0) * 1e3

    t0 = tick()
    by_id: dict[int, DetectedMarker] = {}
    order: list[int] = []
    for quad in quads:
        try:
            det = decode(gray, quad, dictionary, decode_params)
        except EngineError:
            continue
        if det is None:
            continue
        prev = by_id.get(det.pattern_id)
        if prev is None:
            by_id[det.pattern_id] = det
            order.append(det.pattern_id)
        elif det.confidence > prev.confidence:
            by_id[det.pattern_id] = det
    detections = [by_id[i] for i in order]
    timings["decode"] = (tick() - t0) * 1e3

    t0 = tick()
    poses: dict[int, Pose] = {}
    for det in detections:
        pattern = dictionary.get(det.pattern_id)
        if pattern is None:
            continue
        try:
            poses[det.pattern_id] = pose_from_marker(det, pattern, cam)
        except EngineError:
            continue
    timings["pose"] = (tick() - t0) * 1e3

    t0 = tick()
    placements = resolve(detections, scene, poses)
    timings["resolve"] = (tick() - t0) * 1e3

    t0 = tick()
    cfg = scene.anaglyph
    if cfg.enabled:
        left_pl = [(m, mat, eye_offset(p, "left", cfg.separation)) for m, mat, p in placements]
        right_pl = [(m, mat, eye_offset(p, "right", cfg.separation)) for m, mat, p in placements]
        left = render(left_pl, cam, light_dir=light_dir)
        right = render(right_pl, cam, light_dir=light_dir)
    else:
        left = render(placements, cam, light_dir=light_dir)
        right = RenderTarget.empty(cam.width, cam.height)
    timings["render"] = (tick() - t0) * 1e3

    t0 = tick()
    augmented = composite(frame, left, right, cfg)
    timings["composite"] = (tick() - t0) * 1e3

    return PipelineResult(augmented=augmented, detections=detections, poses=poses,
                          timings=timings, left_target=left, right_target=right,
                          gray=gray, binary=binary)


def detection_to_dict(det: DetectedMarker) -> dict:
    return {
        "pattern_id": det.pattern_id,
        "corners": [[float(x), float(y)] for x, y in det.corners],
        "rotation_index": det.rotation_index,
        "confidence": float(det.confidence),
    }


def pose_to_dict(pose: Pose) -> dict:
    from .pose import to_modelview16
    return {
        "rotation": [float(v) for v in pose.rotation.ravel()],
        "translation": [float(v) for v in pose.translation],
        "modelview16": [float(v) for v in to_modelview16(pose).elements],
    }
