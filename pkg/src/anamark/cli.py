"""Command-line interface."""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np
from PIL import Image

from . import imageio
from .imaging import QuadParams, ThresholdParams
from .marker import MarkerDictionary, MarkerPattern, pattern_image, validate_dictionary
from .pipeline import detection_to_dict, pose_to_dict, process_frame
from .pose import CameraIntrinsics, Pose, to_modelview16
from .scene import Scene, load_scene
from .synth import SynthSpec, ground_truth_json, render_synthetic


def _add_detect_args(p):
    p.add_argument("frame")
    p.add_argument("--dict", dest="dictionary", required=True)
    p.add_argument("--window", type=int, default=15)
    p.add_argument("--offset", type=float, default=7.0)
    p.add_argument("--min-area", type=float, default=400.0)


def _detect(frame_path, dict_path, window, offset, min_area, cam):
    from .imaging import binarize, find_quads, to_grayscale
    from .marker import decode
    frame = imageio.load_frame(frame_path)
    dictionary = MarkerDictionary.load(dict_path)
    gray = to_grayscale(frame)
    binary = binarize(gray, ThresholdParams(window=window, offset=offset))
    quads = find_quads(binary, QuadParams(min_area=min_area))
    detections = []
    seen = set()
    for quad in quads:
        try:
            det = decode(gray, quad, dictionary)
        except Exception:
            continue
        if det is not None and det.pattern_id not in seen:
            seen.add(det.pattern_id)
            detections.append(det)
    return frame, dictionary, detections


def cmd_detect(args):
    _, _, detections = _detect(args.frame, args.dictionary, args.window,
                               args.offset, args.min_area, None)
    print(json.dumps({"detections": [detection_to_dict(d) for d in detections]}, indent=2))
    return 0


def cmd_pose(args):
    from .pose import pose_from_marker
    frame, dictionary, detections = _detect(args.frame, args.dictionary, args.window,
                                            args.offset, args.min_area, None)
    cam = CameraIntrinsics.load(args.cam)
    out = {"poses": {}}
    for det in detections:
        pattern = dictionary.get(det.pattern_id)
        try:
            pose = pose_from_marker(det, pattern, cam)
        except Exception as exc:
            out["poses"][str(det.pattern_id)] = {"error": str(exc)}
            continue
        entry = pose_to_dict(pose)
        entry["modelview16_text"] = to_modelview16(pose).serialize()
        out["poses"][str(det.pattern_id)] = entry
    print(json.dumps(out, indent=2))
    return 0


def cmd_compose(args):
    bundle = load_scene(args.scene)
    frame = imageio.load_frame(args.frame)
    result = process_frame(frame, bundle.scene, bundle.dictionary, bundle.cam)
    imageio.save_frame(result.augmented, args.output)
    summary = {
        "output": args.output,
        "detections": [detection_to_dict(d) for d in result.detections],
        "timings_ms": result.timings,
    }
    print(json.dumps(summary, indent=2))
    return 0


def cmd_synth(args):
    with open(args.spec) as fh:
        doc = json.load(fh)
    base = os.path.dirname(os.path.abspath(args.spec))

    def rel(p):
        return p if os.path.isabs(p) else os.path.join(base, p)

    cam_ref = doc["cam"]
    cam = (CameraIntrinsics.load(rel(cam_ref)) if isinstance(cam_ref, str)
           else CameraIntrinsics.from_json(json.dumps(cam_ref)))
    dictionary = MarkerDictionary.load(rel(doc["dictionary"]))
    placements = []
    for pl in doc.get("placements", []):
        pattern = dictionary.get(int(pl["id"]))
        if pattern is None:
            print(f"error: unknown pattern id {pl['id']}", file=sys.stderr)
            return 1
        rot = np.asarray(pl["rotation"], dtype=np.float64).reshape(3, 3)
        t = np.asarray(pl["translation"], dtype=np.float64)
        placements.append((pattern, Pose(rotation=rot, translation=t)))
    spec = SynthSpec(
        cam=cam,
        placements=placements,
        background=tuple(doc.get("background", (128, 128, 128))),
        marker_dark=float(doc.get("dark", 20)),
        marker_light=float(doc.get("light", 235)),
        noise_sigma=float(doc.get("noise_sigma", 0.0)),
        seed=int(doc.get("seed", 0)),
    )
    frame, truth = render_synthetic(spec)
    imageio.save_frame(frame, args.output)
    if args.truth:
        with open(args.truth, "w") as fh:
            fh.write(ground_truth_json(truth))
    return 0


def cmd_validate_dict(args):
    dictionary = MarkerDictionary.load(args.dictionary)
    report = validate_dictionary(dictionary)
    print(json.dumps({
        "ok": report.ok,
        "violations": [
            {"kind": v.kind, "ids": list(v.ids), "distance": v.distance, "detail": v.detail}
            for v in report.violations
        ],
    }, indent=2))
    return 0 if report.ok else 1


def cmd_marker(args):
    dictionary = MarkerDictionary.load(args.dictionary)
    pattern = dictionary.get(args.id)
    if pattern is None:
        print(f"error: no pattern with id {args.id}", file=sys.stderr)
        return 1
    img = pattern_image(pattern, cell_px=args.cell_px)
    Image.fromarray(img, mode="L").save(args.output, format="PNG")
    return 0


def cmd_serve(args):
    import uvicorn
    from .service import create_app
    port = int(os.environ.get("ANAMARK_PORT", args.port))
    app = create_app(args.scene)
    uvicorn.run(app, host=args.host, port=port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="anamark",
                                     description="Marker-based anaglyph AR engine")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="detect markers in a frame, print JSON")
    _add_detect_args(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("pose", help="detect markers and print poses + modelview16")
    _add_detect_args(p)
    p.add_argument("--cam", required=True)
    p.set_defaults(func=cmd_pose)

    p = sub.add_parser("compose", help="augment a frame with a scene")
    p.add_argument("frame")
    p.add_argument("--scene", required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("synth", help="render a synthetic ground-truth frame")
    p.add_argument("--spec", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--truth", help="also write ground-truth JSON here")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("validate-dict", help="check dictionary uniqueness/asymmetry")
    p.add_argument("dictionary")
    p.set_defaults(func=cmd_validate_dict)

    p = sub.add_parser("marker", help="emit a printable marker PNG")
    p.add_argument("id", type=int)
    p.add_argument("--dict", dest="dictionary", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--cell-px", type=int, default=24)
    p.set_defaults(func=cmd_marker)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--scene", required=True)
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
