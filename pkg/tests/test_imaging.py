import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from anamark.errors import InvalidInputError, InvalidParameterError
from anamark.imaging import (
    BinaryImage,
    Frame,
    GrayImage,
    QuadParams,
    ThresholdParams,
    binarize,
    find_quads,
    to_grayscale,
)


def reference_binarize(gray, window, offset):
    """Naive clamped-window mean threshold, independent of the kernels."""
    h, w = gray.shape
    r = window // 2
    out = np.zeros((h, w), dtype=bool)
    for y in range(h):
        for x in range(w):
            ys = np.clip(np.arange(y - r, y + r + 1), 0, h - 1)
            xs = np.clip(np.arange(x - r, x + r + 1), 0, w - 1)
            mean = gray[np.ix_(ys, xs)].astype(np.int64).sum() / (window * window)
            out[y, x] = gray[y, x] < mean - offset
    return out


class TestGrayscale:
    def test_primary_colors(self):
        # rec.601 luma, rounded half away from zero
        px = np.array([[[255, 0, 0], [0, 255, 0], [0, 0, 255], [10, 20, 30]]],
                      dtype=np.uint8)
        gray = to_grayscale(Frame(px))
        assert gray.values.tolist() == [[76, 150, 29, 18]]

    def test_extremes(self):
        px = np.zeros((2, 2, 3), dtype=np.uint8)
        px[1] = 255
        gray = to_grayscale(Frame(px))
        assert gray.values.tolist() == [[0, 0], [255, 255]]

    def test_shape_preserved(self):
        frame = Frame(np.zeros((7, 11, 3), dtype=np.uint8))
        assert to_grayscale(frame).values.shape == (7, 11)


class TestFrameTypes:
    def test_frame_rejects_wrong_shape(self):
        with pytest.raises(InvalidInputError):
            Frame(np.zeros((4, 4), dtype=np.uint8))
        with pytest.raises(InvalidInputError):
            Frame(np.zeros((0, 4, 3), dtype=np.uint8))

    def test_gray_rejects_wrong_shape(self):
        with pytest.raises(InvalidInputError):
            GrayImage(np.zeros((4, 4, 3), dtype=np.uint8))

    def test_dimensions(self):
        f = Frame(np.zeros((3, 5, 3), dtype=np.uint8))
        assert (f.height, f.width) == (3, 5)


class TestBinarize:
    def test_matches_reference(self):
        rng = np.random.default_rng(3)
        vals = rng.integers(0, 256, (24, 31), dtype=np.uint8)
        got = binarize(GrayImage(vals), ThresholdParams(window=7, offset=5.0))
        expected = reference_binarize(vals, 7, 5.0)
        assert np.array_equal(got.bits, expected)

    def test_flat_image_has_no_foreground(self):
        vals = np.full((10, 10), 90, dtype=np.uint8)
        got = binarize(GrayImage(vals), ThresholdParams(window=5, offset=0.0))
        assert not got.bits.any()

    def test_dark_spot_detected(self):
        vals = np.full((15, 15), 200, dtype=np.uint8)
        vals[7, 7] = 10
        got = binarize(GrayImage(vals), ThresholdParams(window=7, offset=7.0))
        assert got.bits[7, 7]
        assert got.bits.sum() == 1

    def test_window_validation(self):
        gray = GrayImage(np.zeros((10, 10), dtype=np.uint8))
        with pytest.raises(InvalidParameterError):
            binarize(gray, ThresholdParams(window=4))
        with pytest.raises(InvalidParameterError):
            binarize(gray, ThresholdParams(window=1))
        with pytest.raises(InvalidParameterError):
            binarize(gray, ThresholdParams(window=7, offset=-1.0))

    def test_window_larger_than_both_dims_rejected(self):
        gray = GrayImage(np.zeros((5, 5), dtype=np.uint8))
        with pytest.raises(InvalidParameterError):
            binarize(gray, ThresholdParams(window=7))

    def test_window_larger_than_one_dim_allowed(self):
        gray = GrayImage(np.zeros((5, 20), dtype=np.uint8))
        binarize(gray, ThresholdParams(window=7))  # no raise

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 10_000),
           h=st.integers(7, 20), w=st.integers(7, 20),
           window=st.sampled_from([3, 5, 7]),
           offset=st.floats(0.0, 20.0))
    def test_property_matches_reference(self, seed, h, w, window, offset):
        rng = np.random.default_rng(seed)
        vals = rng.integers(0, 256, (h, w), dtype=np.uint8)
        got = binarize(GrayImage(vals), ThresholdParams(window=window, offset=offset))
        assert np.array_equal(got.bits, reference_binarize(vals, window, offset))


def solid_rect(h, w, r0, r1, c0, c1):
    bits = np.zeros((h, w), dtype=bool)
    bits[r0:r1 + 1, c0:c1 + 1] = True
    return BinaryImage(bits)


class TestFindQuads:
    def test_axis_aligned_rectangle_exact_corners(self):
        # continuous boundary of the filled pixel block, recovered exactly
        quads = find_quads(solid_rect(60, 80, 10, 39, 15, 54),
                           QuadParams(min_area=100.0))
        assert len(quads) == 1
        expected = np.array([[15.0, 10.0], [55.0, 10.0], [55.0, 40.0], [15.0, 40.0]])
        assert np.allclose(quads[0].corners, expected, atol=1e-9)
        assert quads[0].area == pytest.approx(40.0 * 30.0)

    def test_anchor_is_nearest_origin(self):
        quads = find_quads(solid_rect(60, 80, 20, 45, 30, 55),
                           QuadParams(min_area=100.0))
        corners = quads[0].corners
        d = (corners ** 2).sum(axis=1)
        assert d.argmin() == 0

    def test_positive_orientation(self):
        quads = find_quads(solid_rect(50, 50, 8, 38, 9, 39), QuadParams(min_area=50.0))
        c = quads[0].corners
        x, y = c[:, 0], c[:, 1]
        area = 0.5 * (np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))
        assert area > 0

    def test_border_touching_rejected(self):
        assert find_quads(solid_rect(40, 40, 0, 20, 5, 25)) == []

    def test_min_area_filter(self):
        img = solid_rect(40, 40, 10, 20, 10, 20)
        assert len(find_quads(img, QuadParams(min_area=50.0))) == 1
        assert find_quads(img, QuadParams(min_area=500.0)) == []

    def test_ring_yields_outer_quad_only(self):
        bits = np.zeros((60, 60), dtype=bool)
        bits[10:41, 10:41] = True
        bits[18:33, 18:33] = False
        quads = find_quads(BinaryImage(bits), QuadParams(min_area=50.0))
        assert len(quads) == 1
        assert quads[0].area == pytest.approx(31.0 * 31.0)

    def test_rotated_square_corners(self):
        # rasterize a 45-degree square and require sub-pixel corner recovery
        h = w = 80
        yy, xx = np.mgrid[0:h, 0:w]
        cxy, half = 40.0, 18.0
        bits = (np.abs(xx + 0.5 - cxy) + np.abs(yy + 0.5 - cxy)) <= half
        quads = find_quads(BinaryImage(bits), QuadParams(min_area=100.0))
        assert len(quads) == 1
        got = quads[0].corners
        expected_pts = np.array([[cxy, cxy - half], [cxy + half, cxy],
                                 [cxy, cxy + half], [cxy - half, cxy]])
        for pt in expected_pts:
            assert np.min(np.linalg.norm(got - pt, axis=1)) < 0.75

    def test_triangle_not_reported(self):
        h = w = 60
        yy, xx = np.mgrid[0:h, 0:w]
        bits = (yy >= 10) & (yy <= 45) & (xx >= 10) & (xx - 10 <= (yy - 10))
        assert find_quads(BinaryImage(bits), QuadParams(min_area=50.0)) == []

    def test_two_quads_sorted_by_min_y_then_x(self):
        bits = np.zeros((80, 80), dtype=bool)
        bits[40:60, 5:25] = True
        bits[10:30, 50:70] = True
        quads = find_quads(BinaryImage(bits), QuadParams(min_area=50.0))
        assert len(quads) == 2
        assert quads[0].corners[:, 1].min() < quads[1].corners[:, 1].min()

    def test_empty_image(self):
        assert find_quads(BinaryImage(np.zeros((20, 20), dtype=bool))) == []

    @settings(max_examples=20, deadline=None)
    @given(r0=st.integers(2, 10), c0=st.integers(2, 10),
           hh=st.integers(12, 25), ww=st.integers(12, 25))
    def test_property_rectangles_recovered(self, r0, c0, hh, ww):
        quads = find_quads(solid_rect(48, 48, r0, r0 + hh, c0, c0 + ww),
                           QuadParams(min_area=20.0))
        assert len(quads) == 1
        expected = np.array([
            [c0, r0], [c0 + ww + 1, r0],
            [c0 + ww + 1, r0 + hh + 1], [c0, r0 + hh + 1],
        ], dtype=float)
        # anchor-ordered output; rectangle TL is always nearest the origin here
        assert np.allclose(quads[0].corners, expected, atol=1e-9)
