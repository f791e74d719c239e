"""Overlay rendering tests: color ramp, geometry, purity, labels."""

from __future__ import annotations

import io
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st
from PIL import Image

from tapaudit.analyzer import analyze
from tapaudit.annotate import OverlayStyle, annotate_png, render_overlay, sr_to_color
from tapaudit.geometry import PixelRect
from tapaudit.model import TapSuccessRate

from conftest import make_element, make_snapshot


class TestColorRamp:
    def test_zero_is_pure_red(self):
        assert sr_to_color(0.0) == (255, 0, 0)

    def test_one_is_pure_green(self):
        assert sr_to_color(1.0) == (0, 255, 0)

    def test_midpoint_is_yellow(self):
        assert sr_to_color(0.5) == (255, 255, 0)

    def test_quarter_points(self):
        assert sr_to_color(0.25) == (255, 128, 0)
        assert sr_to_color(0.75) == (128, 255, 0)

    def test_accepts_wrapped_success_rate(self):
        assert sr_to_color(TapSuccessRate(0.5)) == sr_to_color(0.5)

    @pytest.mark.parametrize("bad", [-0.001, 1.001, math.nan, math.inf, -math.inf, "0.5", None])
    def test_out_of_range_raises(self, bad):
        with pytest.raises(ValueError):
            sr_to_color(bad)

    @given(pair=st.tuples(st.floats(0, 1), st.floats(0, 1)))
    def test_red_falls_and_green_rises_with_success(self, pair):
        low, high = sorted(pair)
        r_low, g_low, b_low = sr_to_color(low)
        r_high, g_high, b_high = sr_to_color(high)
        assert r_high <= r_low
        assert g_high >= g_low
        assert b_low == b_high == 0

    @given(sr=st.floats(0, 1))
    def test_channels_are_valid_bytes(self, sr):
        color = sr_to_color(sr)
        assert all(isinstance(c, int) and 0 <= c <= 255 for c in color)


class TestOverlayStyle:
    def test_label_format_uses_two_decimals(self):
        style = OverlayStyle()
        assert style.format_label(0.8166) == "81.66%"
        assert style.format_label(1.0) == "100.00%"
        assert style.format_label(0.0) == "0.00%"
        assert style.format_label(0.98033) == "98.03%"

    @pytest.mark.parametrize("bad", [0, -1, 1.5, "3"])
    def test_stroke_width_must_be_positive_int(self, bad):
        with pytest.raises(ValueError):
            OverlayStyle(stroke_width_px=bad)


def small_report(registry, elements):
    snapshot = make_snapshot(elements=elements, page_size=(100.0, 200.0))
    return analyze(snapshot, registry.get("iPhone 13"))


def blank_screenshot(width=300, height=600, color=(255, 255, 255)):
    return Image.new("RGB", (width, height), color)


def gradient_screenshot(width=300, height=600):
    image = Image.new("RGB", (width, height))
    image.putdata(
        [(x % 256, y % 256, (x + y) % 256) for y in range(height) for x in range(width)]
    )
    return image


class TestRenderOverlay:
    def test_output_dimensions_match_input(self, registry):
        report = small_report(
            registry,
            [make_element("/html/body/button[1]", "button", PixelRect(10, 10, 44, 44), 1)],
        )
        out = render_overlay(blank_screenshot(), report)
        assert out.size == (300, 600)

    def test_input_image_is_not_modified(self, registry):
        report = small_report(
            registry,
            [make_element("/html/body/button[1]", "button", PixelRect(10, 10, 44, 44), 1)],
        )
        screenshot = blank_screenshot()
        before = screenshot.tobytes()
        render_overlay(screenshot, report)
        assert screenshot.tobytes() == before

    def test_empty_report_returns_identical_pixels(self, registry):
        report = small_report(registry, [])
        screenshot = gradient_screenshot()
        out = render_overlay(screenshot, report)
        assert out.tobytes() == screenshot.tobytes()

    def test_rect_is_scaled_by_device_pixel_ratio(self, registry):
        # A 44x44 CSS-px button at (10, 10) on a DPR-3 device paints its
        # outline from physical (30, 30) to (161, 161) inclusive.
        report = small_report(
            registry,
            [make_element("/html/body/button[1]", "button", PixelRect(10, 10, 44, 44), 1)],
        )
        expected = sr_to_color(report.elements[0].success_rate.value)
        out = render_overlay(blank_screenshot(), report)
        assert out.getpixel((30, 30)) == expected
        assert out.getpixel((161, 161)) == expected
        assert out.getpixel((29, 29)) == (255, 255, 255)
        assert out.getpixel((162, 162)) == (255, 255, 255)
        # interior stays untouched (stroke is 3 px wide)
        assert out.getpixel((96, 96)) == (255, 255, 255)

    def test_topmost_element_is_drawn_last(self, registry):
        report = small_report(
            registry,
            [
                make_element("/html/body/button[1]", "button", PixelRect(10, 10, 40, 40), 1),
                make_element("/html/body/button[2]", "button", PixelRect(10, 10, 80, 80), 2),
            ],
        )
        small, large = report.elements
        out = render_overlay(blank_screenshot(), report)
        # shared top-left corner: the later (topmost) outline wins
        assert out.getpixel((30, 30)) == sr_to_color(large.success_rate.value)
        # a point only the small button's right edge covers
        assert out.getpixel((149, 60)) == sr_to_color(small.success_rate.value)

    def test_rendering_is_deterministic(self, registry):
        report = small_report(
            registry,
            [
                make_element("/html/body/a[1]", "a", PixelRect(5, 5, 50, 20), 1),
                make_element("/html/body/button[1]", "button", PixelRect(20, 100, 60, 44), 2),
            ],
        )
        screenshot = gradient_screenshot()
        first = render_overlay(screenshot, report)
        second = render_overlay(screenshot, report)
        assert first.tobytes() == second.tobytes()

    def test_rect_outside_screenshot_is_skipped_with_warning(self, registry, caplog):
        report = small_report(
            registry,
            [make_element("/html/body/button[1]", "button", PixelRect(10, 150, 44, 44), 1)],
        )
        # screenshot is far smaller than the page: the rect starts at
        # physical y=450, beyond a 100-px-tall image
        screenshot = blank_screenshot(width=300, height=100)
        with caplog.at_level("WARNING", logger="tapaudit.annotate"):
            out = render_overlay(screenshot, report)
        assert out.tobytes() == screenshot.tobytes()
        assert any("outside the screenshot" in rec.message for rec in caplog.records)

    def test_labels_draw_text_over_filled_box(self, registry):
        report = small_report(
            registry,
            [make_element("/html/body/button[1]", "button", PixelRect(5, 5, 80, 60), 1)],
        )
        style = OverlayStyle(label_enabled=True)
        out = render_overlay(blank_screenshot(), report)
        labeled = render_overlay(blank_screenshot(), report, style)
        assert labeled.tobytes() != out.tobytes()
        # the label box is filled with the element color and the glyphs
        # are drawn in (anti-aliased) black on top of it
        color = sr_to_color(report.elements[0].success_rate.value)
        pixels = {
            labeled.getpixel((x, y)) for x in range(18, 120) for y in range(18, 40)
        }
        assert color in pixels
        assert any(sum(p) < 120 for p in pixels)

    def test_non_rgb_input_is_converted(self, registry):
        report = small_report(registry, [])
        gray = Image.new("L", (300, 600), 128)
        out = render_overlay(gray, report)
        assert out.mode == "RGB"
        assert out.size == (300, 600)


class TestAnnotatePng:
    def test_round_trip_preserves_dimensions(self, registry):
        report = small_report(
            registry,
            [make_element("/html/body/button[1]", "button", PixelRect(10, 10, 44, 44), 1)],
        )
        buf = io.BytesIO()
        blank_screenshot().save(buf, format="PNG")
        out = annotate_png(buf.getvalue(), report)
        with Image.open(io.BytesIO(out)) as image:
            assert image.size == (300, 600)

    def test_byte_identical_across_runs(self, registry):
        report = small_report(
            registry,
            [
                make_element("/html/body/a[1]", "a", PixelRect(5, 5, 50, 20), 1),
                make_element("/html/body/button[1]", "button", PixelRect(20, 100, 60, 44), 2),
            ],
        )
        buf = io.BytesIO()
        gradient_screenshot().save(buf, format="PNG")
        png = buf.getvalue()
        assert annotate_png(png, report) == annotate_png(png, report)

    def test_empty_report_keeps_pixels(self, registry):
        report = small_report(registry, [])
        source = gradient_screenshot()
        buf = io.BytesIO()
        source.save(buf, format="PNG")
        out = annotate_png(buf.getvalue(), report)
        with Image.open(io.BytesIO(out)) as image:
            assert image.convert("RGB").tobytes() == source.tobytes()
