"""Screenshot annotation.

Draws one color-coded rectangle per reported element onto the capture
screenshot, red at 0% predicted success shading linearly through the
hue wheel to green at 100%, with optional two-decimal percent labels.
Pure image-in, image-out; rendering the same report twice produces
byte-identical output.
"""

from __future__ import annotations

import io
import logging
import math
from colorsys import hsv_to_rgb
from dataclasses import dataclass, field
from typing import Callable

from PIL import Image, ImageDraw

from .analyzer import AnalysisReport

logger = logging.getLogger(__name__)

__all__ = ["sr_to_color", "OverlayStyle", "render_overlay", "annotate_png"]

_GREEN_HUE = 120.0 / 360.0


def sr_to_color(sr) -> tuple[int, int, int]:
    """Map a success rate in [0, 1] to an RGB color.

    Linear hue interpolation from red at 0 to green at 1; both
    endpoints are exact primaries.
    """
    value = getattr(sr, "value", sr)
    if not (isinstance(value, (int, float)) and math.isfinite(value) and 0.0 <= value <= 1.0):
        raise ValueError(f"success rate must be in [0, 1], got {value!r}")
    r, g, b = hsv_to_rgb(value * _GREEN_HUE, 1.0, 1.0)
    return (round(r * 255), round(g * 255), round(b * 255))


@dataclass(frozen=True)
class OverlayStyle:
    """How rectangles and labels are drawn, in physical pixels."""

    stroke_width_px: int = 3
    label_enabled: bool = False
    color_map: Callable[[float], tuple[int, int, int]] = field(default=sr_to_color)

    def __post_init__(self) -> None:
        if not isinstance(self.stroke_width_px, int) or self.stroke_width_px < 1:
            raise ValueError(f"stroke_width_px must be an int >= 1, got {self.stroke_width_px!r}")

    def format_label(self, sr_value: float) -> str:
        return f"{sr_value * 100:.2f}%"


def render_overlay(
    screenshot: Image.Image,
    report: AnalysisReport,
    style: OverlayStyle = OverlayStyle(),
) -> Image.Image:
    """Draw the report's rectangles (and labels) on a copy of the image.

    Report rects are CSS pixels; the screenshot is physical pixels, so
    every rect scales by the device pixel ratio.  Elements are drawn in
    ascending paint order so the topmost element's outline lands last.
    Output dimensions always equal input dimensions.
    """
    annotated = screenshot.convert("RGB")
    draw = ImageDraw.Draw(annotated)
    scale = report.device.device_pixel_ratio
    for element in report.elements:
        rect = element.page_rect
        left = round(rect.x * scale)
        top = round(rect.y * scale)
        right = round(rect.right * scale)
        bottom = round(rect.bottom * scale)
        if right <= 0 or bottom <= 0 or left >= annotated.width or top >= annotated.height:
            logger.warning(
                "element %s rect %s lies outside the screenshot, skipping",
                element.element_id, rect,
            )
            continue
        color = style.color_map(element.success_rate.value)
        # Outline sits inside the scaled rect; a 1x1 minimum keeps
        # degenerate-looking rects visible instead of erroring.
        right = max(right - 1, left)
        bottom = max(bottom - 1, top)
        draw.rectangle((left, top, right, bottom), outline=color, width=style.stroke_width_px)
        if style.label_enabled:
            text = style.format_label(element.success_rate.value)
            text_left = left + style.stroke_width_px
            text_top = top + style.stroke_width_px
            text_box = draw.textbbox((text_left, text_top), text)
            draw.rectangle(text_box, fill=color)
            draw.text((text_left, text_top), text, fill=(0, 0, 0))
    return annotated


def annotate_png(
    screenshot_png: bytes,
    report: AnalysisReport,
    style: OverlayStyle = OverlayStyle(),
) -> bytes:
    """PNG-bytes convenience wrapper around :func:`render_overlay`."""
    with Image.open(io.BytesIO(screenshot_png)) as image:
        annotated = render_overlay(image, report, style)
    out = io.BytesIO()
    annotated.save(out, format="PNG")
    return out.getvalue()
