import base64
import copy
import json
import os

import numpy as np
import pytest
from fastapi.testclient import TestClient

from anamark import imageio
from anamark.service import create_app


@pytest.fixture(scope="module")
def client(assets_dir):
    app = create_app(os.path.join(assets_dir, "scene.json"))
    with TestClient(app) as c:
        yield c


@pytest.fixture(scope="module")
def sample_png(assets_dir):
    with open(os.path.join(assets_dir, "sample_frame.png"), "rb") as fh:
        return fh.read()


class TestHealth:
    def test_ok(self, client):
        r = client.get("/v1/health")
        assert r.status_code == 200
        assert r.json() == {"status": "ok"}


class TestScene:
    def test_get_returns_doc(self, client):
        r = client.get("/v1/scene")
        assert r.status_code == 200
        doc = r.json()
        assert doc["dictionary"] == "dict.json"
        assert len(doc["bindings"]) == 3

    def test_put_replaces(self, client):
        doc = copy.deepcopy(client.get("/v1/scene").json())
        original = copy.deepcopy(doc)
        doc["anaglyph"]["separation_m"] = 0.03
        r = client.put("/v1/scene", json=doc)
        assert r.status_code == 200
        assert client.get("/v1/scene").json()["anaglyph"]["separation_m"] == 0.03
        client.put("/v1/scene", json=original)

    def test_put_invalid_rejected_and_state_kept(self, client):
        before = client.get("/v1/scene").json()
        bad = copy.deepcopy(before)
        bad["bindings"][0]["mesh"] = "missing.obj"
        r = client.put("/v1/scene", json=bad)
        assert r.status_code == 400
        assert r.json()["error"]["code"] == "invalid_scene"
        assert client.get("/v1/scene").json() == before

    def test_put_bad_scale_rejected(self, client):
        bad = copy.deepcopy(client.get("/v1/scene").json())
        bad["bindings"][0]["scale"] = -1.0
        r = client.put("/v1/scene", json=bad)
        assert r.status_code == 400


class TestDictionary:
    def test_matches_shipped_file(self, client, dictionary):
        doc = client.get("/v1/dictionary").json()
        assert doc == json.loads(dictionary.to_json())


class TestMarkerPng:
    def test_returns_png(self, client):
        r = client.get("/v1/markers/1.png")
        assert r.status_code == 200
        assert r.headers["content-type"] == "image/png"
        frame = imageio.frame_from_png_bytes(r.content)
        # quiet zone light, border ring dark
        assert frame.pixels[0, 0, 0] == 255

    def test_cell_px_scales(self, client):
        small = imageio.frame_from_png_bytes(client.get("/v1/markers/1.png?cell_px=8").content)
        big = imageio.frame_from_png_bytes(client.get("/v1/markers/1.png?cell_px=16").content)
        assert big.width == 2 * small.width

    def test_unknown_id_404(self, client):
        r = client.get("/v1/markers/42.png")
        assert r.status_code == 404
        assert r.json()["error"]["code"] == "unknown_marker"


class TestProcess:
    def test_raw_png_body(self, client, sample_png):
        r = client.post("/v1/process", content=sample_png,
                        headers={"content-type": "image/png"})
        assert r.status_code == 200
        doc = r.json()
        assert sorted(d["pattern_id"] for d in doc["detections"]) == [1, 2, 3]
        assert sorted(doc["poses"]) == ["1", "2", "3"]
        assert all(len(p["modelview16"]) == 16 for p in doc["poses"].values())
        frame = imageio.frame_from_png_bytes(base64.b64decode(doc["image_png_b64"]))
        assert frame.width == 640 and frame.height == 480
        assert set(doc["timings_ms"]) >= {"binarize", "find_quads", "decode",
                                          "pose", "render", "composite"}

    def test_multipart_upload(self, client, sample_png):
        r = client.post("/v1/process",
                        files={"frame": ("frame.png", sample_png, "image/png")})
        assert r.status_code == 200
        assert sorted(d["pattern_id"] for d in r.json()["detections"]) == [1, 2, 3]

    def test_empty_body_400(self, client):
        r = client.post("/v1/process", content=b"")
        assert r.status_code == 400
        assert r.json()["error"]["code"] == "empty_body"

    def test_garbage_body_400(self, client):
        r = client.post("/v1/process", content=b"not an image at all")
        assert r.status_code == 400
        assert r.json()["error"]["code"] == "bad_image"

    def test_multipart_without_frame_field_400(self, client, sample_png):
        r = client.post("/v1/process",
                        files={"image": ("f.png", sample_png, "image/png")})
        assert r.status_code == 400
        assert r.json()["error"]["code"] == "missing_frame"

    def test_separation_zero_matches_disabled(self, client, sample_png):
        """The stereo shift vanishes at zero separation: enabled output with
        separation 0 equals disabled output on the same scene."""
        original = copy.deepcopy(client.get("/v1/scene").json())
        try:
            zeroed = copy.deepcopy(original)
            zeroed["anaglyph"]["separation_m"] = 0.0
            zeroed["anaglyph"]["enabled"] = True
            assert client.put("/v1/scene", json=zeroed).status_code == 200
            img_zero = client.post("/v1/process", content=sample_png).json()["image_png_b64"]

            disabled = copy.deepcopy(original)
            disabled["anaglyph"]["enabled"] = False
            assert client.put("/v1/scene", json=disabled).status_code == 200
            img_off = client.post("/v1/process", content=sample_png).json()["image_png_b64"]
            assert img_zero == img_off
        finally:
            client.put("/v1/scene", json=original)
