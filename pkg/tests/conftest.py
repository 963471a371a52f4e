import os

import numpy as np
import pytest

from anamark.marker import MarkerDictionary
from anamark.pose import CameraIntrinsics, Pose

ASSETS = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "assets")


@pytest.fixture(scope="session")
def assets_dir():
    return ASSETS


@pytest.fixture(scope="session")
def cam():
    return CameraIntrinsics.load(os.path.join(ASSETS, "cam.json"))


@pytest.fixture(scope="session")
def dictionary():
    return MarkerDictionary.load(os.path.join(ASSETS, "dict.json"))


def rotation_about(axis, angle):
    """Rodrigues rotation matrix about an arbitrary axis."""
    axis = np.asarray(axis, dtype=np.float64)
    axis = axis / np.linalg.norm(axis)
    kx, ky, kz = axis
    K = np.array([[0.0, -kz, ky], [kz, 0.0, -kx], [-ky, kx, 0.0]])
    return np.eye(3) + np.sin(angle) * K + (1.0 - np.cos(angle)) * (K @ K)


def random_marker_pose(rng, cam, width, max_tilt=np.radians(60),
                       z_range=(0.16, 0.8)):
    """Draw a front-facing pose whose marker plausibly fits in the frame."""
    phi = rng.uniform(-np.pi, np.pi)
    Rz = rotation_about((0, 0, 1), phi)
    theta = rng.uniform(0, max_tilt)
    psi = rng.uniform(0, 2 * np.pi)
    R = rotation_about((np.cos(psi), np.sin(psi), 0.0), theta) @ Rz
    z = rng.uniform(*z_range)
    xmax = max((cam.cx / cam.fx) * z - 0.9 * width, 0.0)
    ymax = max((cam.cy / cam.fy) * z - 0.9 * width, 0.0)
    t = np.array([rng.uniform(-xmax, xmax), rng.uniform(-ymax, ymax), z])
    return Pose(rotation=R, translation=t)
