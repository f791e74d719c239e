"""Rectangle primitives shared by the snapshot, analyzer and annotator layers.

All rectangles are axis-aligned, in CSS pixels, with the origin at the top-left
of their coordinate space (page or frame).
"""
from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class PixelRect:
    """An axis-aligned rectangle in CSS pixels (x, y = top-left corner)."""

    x: float
    y: float
    width: float
    height: float

    def __post_init__(self) -> None:
        for name in ("x", "y", "width", "height"):
            value = getattr(self, name)
            try:
                value = float(value)
            except (TypeError, ValueError):
                raise ValueError(f"PixelRect.{name} must be a number, got {value!r}") from None
            if not math.isfinite(value):
                raise ValueError(f"PixelRect.{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.width < 0 or self.height < 0:
            raise ValueError(
                f"PixelRect width/height must be >= 0, got {self.width}x{self.height}"
            )

    @property
    def right(self) -> float:
        return self.x + self.width

    @property
    def bottom(self) -> float:
        return self.y + self.height

    @property
    def area(self) -> float:
        return self.width * self.height

    def translate(self, dx: float, dy: float) -> "PixelRect":
        return PixelRect(self.x + dx, self.y + dy, self.width, self.height)

    def intersect(self, other: "PixelRect") -> "PixelRect":
        """Intersection rectangle; degenerate (zero-size) when disjoint."""
        x0 = max(self.x, other.x)
        y0 = max(self.y, other.y)
        x1 = min(self.right, other.right)
        y1 = min(self.bottom, other.bottom)
        return PixelRect(x0, y0, max(0.0, x1 - x0), max(0.0, y1 - y0))

    def intersection_area(self, other: "PixelRect") -> float:
        return self.intersect(other).area

    def contains_point(self, px: float, py: float) -> bool:
        return self.x <= px <= self.right and self.y <= py <= self.bottom

    def to_json_dict(self) -> dict:
        return {"x": self.x, "y": self.y, "width": self.width, "height": self.height}

    @classmethod
    def from_json_dict(cls, data: dict) -> "PixelRect":
        try:
            return cls(
                float(data["x"]),
                float(data["y"]),
                float(data["width"]),
                float(data["height"]),
            )
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed rect object: {data!r}") from exc
