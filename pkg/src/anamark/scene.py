"""Scene model: marker-to-object bindings and placement resolution."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from PIL import Image

from .anaglyph import AnaglyphConfig
from .errors import InvalidInputError
from .marker import DetectedMarker, MarkerDictionary
from .pose import CameraIntrinsics, Pose
from .renderer import Material, Mesh, load_obj


@dataclass(frozen=True)
class Binding:
    marker_id: int
    mesh: Mesh
    material: Material
    local_translation: np.ndarray  # (3,) meters, marker frame
    uniform_scale: float = 1.0
    mesh_ref: str = ""
    texture_ref: Optional[str] = None

    def __post_init__(self):
        if self.uniform_scale <= 0:
            raise InvalidInputError("uniform_scale must be positive")
        t = np.asarray(self.local_translation, dtype=np.float64).reshape(3)
        object.__setattr__(self, "local_translation", t)


@dataclass(frozen=True)
class Scene:
    bindings: tuple[Binding, ...] = ()
    anaglyph: AnaglyphConfig = field(default_factory=AnaglyphConfig)

    def __post_init__(self):
        ids = [b.marker_id for b in self.bindings]
        if len(set(ids)) != len(ids):
            raise InvalidInputError("marker ids must be distinct across bindings")
        object.__setattr__(self, "bindings", tuple(self.bindings))

    def binding_for(self, marker_id: int) -> Optional[Binding]:
        for b in self.bindings:
            if b.marker_id == marker_id:
                return b
        return None


def resolve(detections: list[DetectedMarker], scene: Scene,
            poses: dict[int, Pose]) -> list[tuple[Mesh, Material, Pose]]:
    """Turn detections into renderable placements.

    Object-to-camera pose keeps the marker rotation; translation becomes
    R @ local_translation + t. Scale applies to mesh geometry only, so the
    marker-anchored origin is unaffected. Detections without bindings, and
    bindings without detections, contribute nothing.
    """
    out = []
    for det in detections:
        binding = scene.binding_for(det.pattern_id)
        if binding is None or det.pattern_id not in poses:
            continue
        pose = poses[det.pattern_id]
        t = pose.rotation @ binding.local_translation + pose.translation
        out.append((binding.mesh.scaled(binding.uniform_scale), binding.material,
                    Pose(rotation=pose.rotation, translation=t)))
    return out


@dataclass(frozen=True)
class SceneBundle:
    """A scene plus the camera and dictionary its config file references."""

    scene: Scene
    cam: CameraIntrinsics
    dictionary: MarkerDictionary
    doc: dict
    base_dir: str


def _load_texture(path: str) -> np.ndarray:
    with Image.open(path) as im:
        return np.asarray(im.convert("RGB")).astype(np.float64) / 255.0


def scene_from_doc(doc: dict, base_dir: str) -> SceneBundle:
    def resolve_path(p):
        return p if os.path.isabs(p) else os.path.join(base_dir, p)

    cam = CameraIntrinsics.load(resolve_path(doc["intrinsics"]))
    dictionary = MarkerDictionary.load(resolve_path(doc["dictionary"]))
    ana_doc = doc.get("anaglyph", {})
    cfg = AnaglyphConfig(
        enabled=bool(ana_doc.get("enabled", True)),
        separation=float(ana_doc.get("separation_m", 0.06)),
        left_mask=tuple(ana_doc.get("left_mask", (True, False, False))),
        right_mask=tuple(ana_doc.get("right_mask", (False, True, True))),
    )
    bindings = []
    for b in doc.get("bindings", []):
        mesh = load_obj(resolve_path(b["mesh"]))
        tex_ref = b.get("texture")
        material = Material(
            diffuse=tuple(b.get("diffuse", (1.0, 1.0, 1.0))),
            ambient=float(b.get("ambient", 0.2)),
            texture=_load_texture(resolve_path(tex_ref)) if tex_ref else None,
        )
        bindings.append(Binding(
            marker_id=int(b["marker_id"]),
            mesh=mesh,
            material=material,
            local_translation=np.asarray(b.get("translation_m", (0, 0, 0)), dtype=np.float64),
            uniform_scale=float(b.get("scale", 1.0)),
            mesh_ref=b["mesh"],
            texture_ref=tex_ref,
        ))
    scene = Scene(bindings=tuple(bindings), anaglyph=cfg)
    return SceneBundle(scene=scene, cam=cam, dictionary=dictionary, doc=doc,
                       base_dir=base_dir)


def load_scene(path: str) -> SceneBundle:
    with open(path) as fh:
        doc = json.load(fh)
    return scene_from_doc(doc, os.path.dirname(os.path.abspath(path)))
