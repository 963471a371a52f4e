"""Regenerate the shipped sample assets.

Writes furniture meshes, procedural textures, the sample scene, and a
three-marker synthetic frame with its ground truth into assets/. All
outputs are deterministic (fixed seeds), so reruns are byte-stable.

Usage: python3 scripts/make_assets.py
"""

import json
import os
import sys

import numpy as np
from PIL import Image

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
ASSETS = os.path.join(ROOT, "assets")
sys.path.insert(0, os.path.join(ROOT, "src"))

from anamark.marker import MarkerDictionary  # noqa: E402
from anamark.pose import CameraIntrinsics, Pose  # noqa: E402
from anamark.synth import SynthSpec, ground_truth_json, render_synthetic  # noqa: E402
from anamark import imageio  # noqa: E402


# ---------------------------------------------------------------- meshes

class ObjBuilder:
    """Collects quads and writes a v/vt/vn OBJ file.

    The renderer keeps triangles with positive shoelace area in y-down
    screen coordinates, so faces are wound clockwise as seen from outside
    the solid; outward normals are supplied explicitly for shading.
    """

    def __init__(self):
        self.v = []
        self.vt = []
        self.vn = []
        self.faces = []

    def quad(self, corners, normal, uv=((0, 0), (1, 0), (1, 1), (0, 1))):
        """corners: 4 points, counterclockwise as seen from outside."""
        a, b, c, d = [np.asarray(p, dtype=float) for p in corners]
        n = np.asarray(normal, dtype=float)
        n = n / np.linalg.norm(n)
        base_v = len(self.v) + 1
        base_t = len(self.vt) + 1
        ni = len(self.vn) + 1
        # reverse to clockwise-from-outside for the renderer's winding rule
        for p in (a, d, c, b):
            self.v.append(p)
        for u in (uv[0], uv[3], uv[2], uv[1]):
            self.vt.append(u)
        self.vn.append(n)
        i0, i1, i2, i3 = base_v, base_v + 1, base_v + 2, base_v + 3
        t0, t1, t2, t3 = base_t, base_t + 1, base_t + 2, base_t + 3
        self.faces.append(((i0, t0, ni), (i1, t1, ni), (i2, t2, ni)))
        self.faces.append(((i0, t0, ni), (i2, t2, ni), (i3, t3, ni)))

    def box(self, x0, x1, y0, y1, z0, z1):
        """Axis-aligned box, z0 < z1 (z is depth into the marker plane)."""
        # -z face (tops point toward the camera when the marker faces it)
        self.quad([(x0, y0, z0), (x1, y0, z0), (x1, y1, z0), (x0, y1, z0)],
                  (0, 0, -1))
        # +z face
        self.quad([(x0, y0, z1), (x0, y1, z1), (x1, y1, z1), (x1, y0, z1)],
                  (0, 0, 1))
        # -y / +y
        self.quad([(x0, y0, z0), (x0, y0, z1), (x1, y0, z1), (x1, y0, z0)],
                  (0, -1, 0))
        self.quad([(x0, y1, z0), (x1, y1, z0), (x1, y1, z1), (x0, y1, z1)],
                  (0, 1, 0))
        # -x / +x
        self.quad([(x0, y0, z0), (x0, y1, z0), (x0, y1, z1), (x0, y0, z1)],
                  (-1, 0, 0))
        self.quad([(x1, y0, z0), (x1, y0, z1), (x1, y1, z1), (x1, y1, z0)],
                  (1, 0, 0))

    def write(self, path):
        with open(path, "w") as fh:
            fh.write("# generated by scripts/make_assets.py\n")
            for p in self.v:
                fh.write(f"v {p[0]:.6f} {p[1]:.6f} {p[2]:.6f}\n")
            for u in self.vt:
                fh.write(f"vt {u[0]:.6f} {u[1]:.6f}\n")
            for n in self.vn:
                fh.write(f"vn {n[0]:.6f} {n[1]:.6f} {n[2]:.6f}\n")
            for f in self.faces:
                fh.write("f " + " ".join(f"{v}/{t}/{n}" for v, t, n in f) + "\n")


def make_table():
    """0.10 m square table, marker-plane footprint, top toward the camera."""
    b = ObjBuilder()
    half = 0.05
    top_h = 0.012
    leg = 0.010
    height = 0.07
    b.box(-half, half, -half, half, -height, -height + top_h)
    for sx in (-1, 1):
        for sy in (-1, 1):
            x0 = sx * half - (leg if sx > 0 else 0)
            y0 = sy * half - (leg if sy > 0 else 0)
            b.box(x0, x0 + leg, y0, y0 + leg, -height + top_h, 0.0)
    return b


def make_seat(width):
    """Seat with a backrest along -y; width in meters."""
    b = ObjBuilder()
    hw = width / 2
    depth = 0.045
    seat_h = 0.03
    back_t = 0.012
    back_h = 0.075
    b.box(-hw, hw, -depth, depth, -seat_h, 0.0)
    b.box(-hw, hw, -depth, -depth + back_t, -back_h, -seat_h)
    return b


# -------------------------------------------------------------- textures

def wood_texture(size=128, seed=11):
    rng = np.random.default_rng(seed)
    y, x = np.mgrid[0:size, 0:size].astype(float) / size
    rings = 0.5 + 0.5 * np.sin(2 * np.pi * (x * 6 + 0.35 * np.sin(2 * np.pi * y * 2)))
    grain = rng.normal(0, 0.04, (size, size))
    lum = np.clip(0.45 + 0.25 * rings + grain, 0, 1)
    rgb = np.stack([lum * 0.72 + 0.18, lum * 0.48 + 0.10, lum * 0.26 + 0.04], axis=-1)
    return np.clip(np.floor(rgb * 255 + 0.5), 0, 255).astype(np.uint8)


def fabric_texture(size=128, seed=12):
    rng = np.random.default_rng(seed)
    y, x = np.mgrid[0:size, 0:size]
    weave = ((x // 4 + y // 4) % 2).astype(float)
    fuzz = rng.normal(0, 0.05, (size, size))
    lum = np.clip(0.5 + 0.18 * weave + fuzz, 0, 1)
    rgb = np.stack([lum * 0.30 + 0.05, lum * 0.40 + 0.10, lum * 0.75 + 0.15], axis=-1)
    return np.clip(np.floor(rgb * 255 + 0.5), 0, 255).astype(np.uint8)


# ------------------------------------------------------------- sample frame

def tilt(axis, deg):
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    a = np.radians(deg)
    kx, ky, kz = axis
    K = np.array([[0, -kz, ky], [kz, 0, -kx], [-ky, kx, 0]])
    return np.eye(3) + np.sin(a) * K + (1 - np.cos(a)) * (K @ K)


def sample_placements(dictionary):
    p1 = dictionary.get(1)
    p2 = dictionary.get(2)
    p3 = dictionary.get(3)
    return [
        (p1, Pose(rotation=tilt((1, 0, 0), 18), translation=np.array([-0.095, 0.012, 0.42]))),
        (p2, Pose(rotation=tilt((0, 1, 0), -14) @ tilt((0, 0, 1), 25),
                  translation=np.array([0.0, -0.015, 0.45]))),
        (p3, Pose(rotation=tilt((1, 1, 0), 12) @ tilt((0, 0, 1), -40),
                  translation=np.array([0.095, 0.018, 0.42]))),
    ]


def main():
    os.makedirs(ASSETS, exist_ok=True)

    make_table().write(os.path.join(ASSETS, "table.obj"))
    make_seat(0.07).write(os.path.join(ASSETS, "seat_single.obj"))
    make_seat(0.13).write(os.path.join(ASSETS, "seat_double.obj"))

    Image.fromarray(wood_texture(), mode="RGB").save(os.path.join(ASSETS, "wood.png"))
    Image.fromarray(fabric_texture(), mode="RGB").save(os.path.join(ASSETS, "fabric.png"))

    scene = {
        "intrinsics": "cam.json",
        "dictionary": "dict.json",
        "anaglyph": {"enabled": True, "separation_m": 0.06},
        "bindings": [
            {"marker_id": 1, "mesh": "table.obj", "texture": "wood.png",
             "diffuse": [1.0, 1.0, 1.0], "translation_m": [0.0, 0.0, 0.0], "scale": 1.0},
            {"marker_id": 2, "mesh": "seat_single.obj", "texture": "fabric.png",
             "diffuse": [1.0, 1.0, 1.0], "translation_m": [0.0, 0.0, 0.0], "scale": 1.0},
            {"marker_id": 3, "mesh": "seat_double.obj", "texture": "fabric.png",
             "diffuse": [0.95, 0.95, 1.0], "translation_m": [0.0, 0.0, 0.0], "scale": 1.0},
        ],
    }
    with open(os.path.join(ASSETS, "scene.json"), "w") as fh:
        json.dump(scene, fh, indent=2)
        fh.write("\n")

    cam = CameraIntrinsics.load(os.path.join(ASSETS, "cam.json"))
    dictionary = MarkerDictionary.load(os.path.join(ASSETS, "dict.json"))
    placements = sample_placements(dictionary)
    spec = SynthSpec(cam=cam, placements=placements, noise_sigma=1.5, seed=5)
    frame, truth = render_synthetic(spec)
    imageio.save_frame(frame, os.path.join(ASSETS, "sample_frame.png"))
    with open(os.path.join(ASSETS, "sample_truth.json"), "w") as fh:
        fh.write(ground_truth_json(truth))

    # matching CLI spec so `anamark synth --spec assets/synth_spec.json` works
    synth_spec = {
        "cam": "cam.json",
        "dictionary": "dict.json",
        "noise_sigma": 1.5,
        "seed": 5,
        "placements": [
            {"id": p.id, "rotation": [round(v, 12) for v in pose.rotation.ravel()],
             "translation": list(pose.translation)}
            for p, pose in placements
        ],
    }
    with open(os.path.join(ASSETS, "synth_spec.json"), "w") as fh:
        json.dump(synth_spec, fh, indent=2)
        fh.write("\n")

    print("assets written to", ASSETS)


if __name__ == "__main__":
    main()
