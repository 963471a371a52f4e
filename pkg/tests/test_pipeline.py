import json
import os

import numpy as np
import pytest

from anamark import imageio
from anamark.anaglyph import AnaglyphConfig
from anamark.pipeline import detection_to_dict, pose_to_dict, process_frame
from anamark.pose import Pose
from anamark.scene import Scene, load_scene
from anamark.synth import SynthSpec, render_synthetic

STAGES = ["grayscale", "binarize", "find_quads", "decode", "pose",
          "resolve", "render", "composite"]


@pytest.fixture(scope="module")
def bundle(assets_dir):
    return load_scene(os.path.join(assets_dir, "scene.json"))


@pytest.fixture(scope="module")
def sample_frame(assets_dir):
    return imageio.load_frame(os.path.join(assets_dir, "sample_frame.png"))


@pytest.fixture(scope="module")
def sample_truth(assets_dir):
    with open(os.path.join(assets_dir, "sample_truth.json")) as fh:
        return json.load(fh)


class TestSampleFrame:
    def test_all_markers_found_and_posed(self, bundle, sample_frame, sample_truth):
        result = process_frame(sample_frame, bundle.scene, bundle.dictionary, bundle.cam)
        assert sorted(d.pattern_id for d in result.detections) == [1, 2, 3]
        assert sorted(result.poses) == [1, 2, 3]
        truth_by_id = {m["id"]: m for m in sample_truth["markers"]}
        for mid, pose in result.poses.items():
            t_gt = np.asarray(truth_by_id[mid]["translation"])
            assert np.linalg.norm(pose.translation - t_gt) / np.linalg.norm(t_gt) < 0.02

    def test_timings_cover_all_stages(self, bundle, sample_frame):
        result = process_frame(sample_frame, bundle.scene, bundle.dictionary, bundle.cam)
        assert list(result.timings) == STAGES
        assert all(v >= 0 for v in result.timings.values())

    def test_render_targets_populated(self, bundle, sample_frame):
        result = process_frame(sample_frame, bundle.scene, bundle.dictionary, bundle.cam)
        assert result.left_target.coverage.any()
        assert result.right_target.coverage.any()
        # stereo parallax: the eyes disagree somewhere
        assert (result.left_target.coverage != result.right_target.coverage).any()

    def test_augmented_differs_from_input(self, bundle, sample_frame):
        result = process_frame(sample_frame, bundle.scene, bundle.dictionary, bundle.cam)
        assert not np.array_equal(result.augmented.pixels, sample_frame.pixels)

    def test_disabled_anaglyph_renders_center(self, bundle, sample_frame):
        scene = Scene(bindings=bundle.scene.bindings,
                      anaglyph=AnaglyphConfig(enabled=False))
        result = process_frame(sample_frame, scene, bundle.dictionary, bundle.cam)
        assert result.left_target.coverage.any()
        assert not result.right_target.coverage.any()


class TestEmptyAndPartial:
    def test_blank_frame_passes_through(self, bundle, cam):
        frame, _ = render_synthetic(SynthSpec(cam=cam))
        result = process_frame(frame, bundle.scene, bundle.dictionary, bundle.cam)
        assert result.detections == []
        assert result.poses == {}
        assert np.array_equal(result.augmented.pixels, frame.pixels)

    def test_unbound_marker_detected_but_not_rendered(self, bundle, cam, dictionary):
        pat = dictionary.get(2)
        pose = Pose(rotation=np.eye(3), translation=np.array([0.0, 0.0, 0.35]))
        frame, _ = render_synthetic(SynthSpec(cam=cam, placements=[(pat, pose)]))
        scene = Scene(bindings=tuple(b for b in bundle.scene.bindings
                                     if b.marker_id != 2),
                      anaglyph=bundle.scene.anaglyph)
        result = process_frame(frame, scene, bundle.dictionary, bundle.cam)
        assert [d.pattern_id for d in result.detections] == [2]
        assert 2 in result.poses
        assert not result.left_target.coverage.any()

    def test_duplicate_marker_kept_once(self, bundle, cam, dictionary):
        # the same physical pattern twice: only one detection survives per id
        pat = dictionary.get(1)
        pl = [
            (pat, Pose(rotation=np.eye(3), translation=np.array([-0.08, 0.0, 0.4]))),
            (pat, Pose(rotation=np.eye(3), translation=np.array([0.08, 0.0, 0.4]))),
        ]
        frame, _ = render_synthetic(SynthSpec(cam=cam, placements=pl))
        result = process_frame(frame, bundle.scene, bundle.dictionary, bundle.cam)
        assert [d.pattern_id for d in result.detections] == [1]


class TestSerialization:
    def test_detection_to_dict(self, bundle, sample_frame):
        result = process_frame(sample_frame, bundle.scene, bundle.dictionary, bundle.cam)
        d = detection_to_dict(result.detections[0])
        assert set(d) == {"pattern_id", "corners", "rotation_index", "confidence"}
        assert len(d["corners"]) == 4
        assert isinstance(d["corners"][0][0], float)
        json.dumps(d)  # must be plain JSON types

    def test_pose_to_dict(self, bundle, sample_frame):
        result = process_frame(sample_frame, bundle.scene, bundle.dictionary, bundle.cam)
        p = pose_to_dict(next(iter(result.poses.values())))
        assert len(p["rotation"]) == 9
        assert len(p["translation"]) == 3
        assert len(p["modelview16"]) == 16
        assert p["modelview16"][15] == 1.0
        json.dumps(p)
