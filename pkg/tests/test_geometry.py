import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tapaudit.geometry import PixelRect

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)
extent = st.floats(min_value=0.0, max_value=1e6, allow_nan=False)
rects = st.builds(PixelRect, x=finite, y=finite, width=extent, height=extent)


class TestValidation:
    def test_accepts_zero_size(self):
        rect = PixelRect(1.0, 2.0, 0.0, 0.0)
        assert rect.area == 0.0

    @pytest.mark.parametrize("bad", [float("nan"), float("inf"), float("-inf")])
    def test_rejects_non_finite_coordinates(self, bad):
        with pytest.raises(ValueError):
            PixelRect(bad, 0.0, 1.0, 1.0)

    def test_rejects_negative_extents(self):
        with pytest.raises(ValueError):
            PixelRect(0.0, 0.0, -1.0, 5.0)
        with pytest.raises(ValueError):
            PixelRect(0.0, 0.0, 5.0, -0.1)

    def test_coerces_ints_to_floats(self):
        rect = PixelRect(1, 2, 3, 4)
        assert rect.x == 1.0 and isinstance(rect.x, float)


class TestDerived:
    def test_edges_and_area(self):
        rect = PixelRect(10.0, 20.0, 30.0, 40.0)
        assert rect.right == 40.0
        assert rect.bottom == 60.0
        assert rect.area == 1200.0

    def test_translate(self):
        rect = PixelRect(5.0, 5.0, 10.0, 10.0).translate(100.0, 200.0)
        assert (rect.x, rect.y, rect.width, rect.height) == (105.0, 205.0, 10.0, 10.0)

    def test_contains_point_boundary_inclusive(self):
        rect = PixelRect(0.0, 0.0, 10.0, 10.0)
        assert rect.contains_point(0.0, 0.0)
        assert rect.contains_point(10.0, 10.0)
        assert not rect.contains_point(10.001, 5.0)


class TestIntersect:
    def test_partial_overlap(self):
        a = PixelRect(0.0, 0.0, 10.0, 10.0)
        b = PixelRect(5.0, 5.0, 10.0, 10.0)
        overlap = a.intersect(b)
        assert (overlap.x, overlap.y, overlap.width, overlap.height) == (5.0, 5.0, 5.0, 5.0)
        assert a.intersection_area(b) == 25.0

    def test_disjoint_yields_degenerate(self):
        a = PixelRect(0.0, 0.0, 10.0, 10.0)
        b = PixelRect(20.0, 20.0, 5.0, 5.0)
        overlap = a.intersect(b)
        assert overlap.area == 0.0
        assert a.intersection_area(b) == 0.0

    def test_touching_edges_have_zero_area(self):
        a = PixelRect(0.0, 0.0, 10.0, 10.0)
        b = PixelRect(10.0, 0.0, 10.0, 10.0)
        assert a.intersection_area(b) == 0.0

    @given(rects, rects)
    def test_intersection_symmetric_and_bounded(self, a, b):
        # Edge subtraction rounds at the corner's magnitude, so the
        # bound needs slack proportional to both axes' scales.
        area = a.intersection_area(b)
        smaller = min(a.area, b.area)
        scale_x = max(1.0, abs(a.x) + a.width, abs(b.x) + b.width)
        scale_y = max(1.0, abs(a.y) + a.height, abs(b.y) + b.height)
        assert area == b.intersection_area(a)
        assert 0.0 <= area <= smaller + 1e-9 * scale_x * scale_y

    @given(rects)
    def test_self_intersection_preserves_rect(self, rect):
        # (x + w) - x is not exactly w in floats, so the edges are
        # exact but extents only within rounding error of the corner.
        overlap = rect.intersect(rect)
        scale = max(1.0, abs(rect.x) + rect.width, abs(rect.y) + rect.height)
        assert overlap.x == rect.x and overlap.y == rect.y
        assert abs(overlap.width - rect.width) <= 1e-9 * scale
        assert abs(overlap.height - rect.height) <= 1e-9 * scale


class TestJson:
    def test_round_trip(self):
        rect = PixelRect(1.5, 2.5, 3.5, 4.5)
        assert PixelRect.from_json_dict(rect.to_json_dict()) == rect

    @pytest.mark.parametrize("payload", [
        {},
        {"x": 1, "y": 2, "width": 3},
        {"x": "a", "y": 0, "width": 1, "height": 1},
        {"x": 0, "y": 0, "width": -1, "height": 1},
    ])
    def test_malformed_payloads_rejected(self, payload):
        with pytest.raises(ValueError):
            PixelRect.from_json_dict(payload)

    @given(rects)
    def test_round_trip_property(self, rect):
        assert PixelRect.from_json_dict(rect.to_json_dict()) == rect
