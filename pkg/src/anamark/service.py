"""HTTP service exposing the pipeline to scripts and the browser viewer."""

from __future__ import annotations

import base64
import threading

import numpy as np
from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import imageio
from .errors import EngineError, InvalidInputError
from .imaging import Frame
from .marker import pattern_image
from .pipeline import detection_to_dict, pose_to_dict, process_frame
from .scene import SceneBundle, load_scene, scene_from_doc

from PIL import Image
import io


class EngineState:
    """Holds the active scene bundle; PUT replaces it atomically."""

    def __init__(self, bundle: SceneBundle):
        self._bundle = bundle
        self._lock = threading.Lock()

    @property
    def bundle(self) -> SceneBundle:
        return self._bundle  # attribute read is atomic

    def replace(self, bundle: SceneBundle) -> None:
        with self._lock:
            self._bundle = bundle


def _error_response(code: str, message: str, status: int) -> JSONResponse:
    return JSONResponse(status_code=status,
                        content={"error": {"code": code, "message": message}})


def create_app(scene_path: str) -> FastAPI:
    state = EngineState(load_scene(scene_path))
    app = FastAPI(title="anamark")
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])
    app.state.engine = state

    @app.exception_handler(EngineError)
    async def engine_error_handler(request: Request, exc: EngineError):
        status = 400 if isinstance(exc, InvalidInputError) else 422
        return _error_response(exc.code, str(exc), status)

    @app.get("/v1/health")
    def health():
        return {"status": "ok"}

    @app.get("/v1/scene")
    def get_scene():
        return state.bundle.doc

    @app.put("/v1/scene")
    async def put_scene(request: Request):
        doc = await request.json()
        try:
            bundle = scene_from_doc(doc, state.bundle.base_dir)
        except (EngineError, KeyError, OSError, ValueError, TypeError) as exc:
            return _error_response("invalid_scene", str(exc), 400)
        state.replace(bundle)
        return bundle.doc

    @app.get("/v1/dictionary")
    def get_dictionary():
        import json
        return json.loads(state.bundle.dictionary.to_json())

    @app.get("/v1/markers/{pattern_id}.png")
    def marker_png(pattern_id: int, cell_px: int = 24):
        pattern = state.bundle.dictionary.get(pattern_id)
        if pattern is None:
            return _error_response("unknown_marker", f"no pattern with id {pattern_id}", 404)
        img = pattern_image(pattern, cell_px=cell_px)
        buf = io.BytesIO()
        Image.fromarray(img, mode="L").save(buf, format="PNG")
        return Response(content=buf.getvalue(), media_type="image/png")

    @app.post("/v1/process")
    async def process(request: Request):
        content_type = request.headers.get("content-type", "")
        if content_type.startswith("multipart/form-data"):
            form = await request.form()
            upload = form.get("frame")
            if upload is None:
                return _error_response("missing_frame", "multipart field 'frame' required", 400)
            data = await upload.read()
        else:
            data = await request.body()
        if not data:
            return _error_response("empty_body", "request body must contain an image", 400)
        try:
            frame = imageio.frame_from_png_bytes(data)
        except InvalidInputError as exc:
            return _error_response("bad_image", str(exc), 400)
        bundle = state.bundle  # snapshot: the whole request sees one scene
        result = process_frame(frame, bundle.scene, bundle.dictionary, bundle.cam)
        return {
            "image_png_b64": base64.b64encode(
                imageio.frame_to_png_bytes(result.augmented)).decode("ascii"),
            "detections": [detection_to_dict(d) for d in result.detections],
            "poses": {str(k): pose_to_dict(v) for k, v in result.poses.items()},
            "timings_ms": result.timings,
        }

    return app
