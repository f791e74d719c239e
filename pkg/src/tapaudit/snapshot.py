"""Serialized page snapshots.

A snapshot is everything the analyzer needs from a rendered page: the
frame tree, per-element geometry, attributes, listener registrations,
computed visibility, and paint order.  It is a plain JSON document
(schema version 1, documented in docs/snapshot_format.md) so captures
can be stored, replayed offline, and hand-written as test fixtures.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Mapping, Optional

from .geometry import PixelRect
from .options import AppliedOptions

SCHEMA_VERSION = 1

__all__ = [
    "SCHEMA_VERSION",
    "SnapshotFormatError",
    "Visibility",
    "ElementRecord",
    "FrameRecord",
    "CaptureTiming",
    "PageSnapshot",
]


class SnapshotFormatError(ValueError):
    """Raised when snapshot data fails structural validation."""


def _require(data: Mapping, key: str, context: str):
    try:
        return data[key]
    except (KeyError, TypeError):
        raise SnapshotFormatError(f"{context}: missing key {key!r}") from None


@dataclass(frozen=True)
class Visibility:
    """Computed visibility state of one element.

    ``effective_opacity`` is the product of the element's own opacity
    and every ancestor's, so 0.0 means invisible regardless of where
    the transparency came from.
    """

    effective_opacity: float = 1.0
    visibility_hidden: bool = False
    displayed: bool = True
    pointer_events_none: bool = False

    def __post_init__(self) -> None:
        if not (isinstance(self.effective_opacity, (int, float))
                and math.isfinite(self.effective_opacity)
                and 0.0 <= self.effective_opacity <= 1.0):
            raise SnapshotFormatError(
                f"effective_opacity must be in [0, 1], got {self.effective_opacity!r}"
            )
        for flag in ("visibility_hidden", "displayed", "pointer_events_none"):
            if not isinstance(getattr(self, flag), bool):
                raise SnapshotFormatError(f"{flag} must be a bool")

    def to_json_dict(self) -> dict:
        return {
            "effective_opacity": self.effective_opacity,
            "visibility_hidden": self.visibility_hidden,
            "displayed": self.displayed,
            "pointer_events_none": self.pointer_events_none,
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "Visibility":
        return cls(
            effective_opacity=_require(data, "effective_opacity", "visibility"),
            visibility_hidden=_require(data, "visibility_hidden", "visibility"),
            displayed=_require(data, "displayed", "visibility"),
            pointer_events_none=_require(data, "pointer_events_none", "visibility"),
        )


@dataclass(frozen=True)
class ElementRecord:
    """One element as captured, geometry in frame-local CSS pixels."""

    node_path: str
    tag: str
    attributes: Mapping[str, str]
    listener_events: frozenset[str]
    rect: PixelRect
    visibility: Visibility
    paint_order: int

    def __post_init__(self) -> None:
        if not self.node_path:
            raise SnapshotFormatError("node_path must be non-empty")
        if not self.tag or self.tag != self.tag.lower():
            raise SnapshotFormatError(f"tag must be non-empty lowercase, got {self.tag!r}")
        for name, value in self.attributes.items():
            if not isinstance(name, str) or not isinstance(value, str):
                raise SnapshotFormatError(f"attribute {name!r} must map str to str")
        object.__setattr__(self, "listener_events", frozenset(self.listener_events))
        for event in self.listener_events:
            if not isinstance(event, str) or not event or event != event.lower():
                raise SnapshotFormatError(
                    f"listener event names must be non-empty lowercase, got {event!r}"
                )
        if not isinstance(self.rect, PixelRect):
            raise SnapshotFormatError("rect must be a PixelRect")
        if not isinstance(self.visibility, Visibility):
            raise SnapshotFormatError("visibility must be a Visibility")
        if not isinstance(self.paint_order, int) or isinstance(self.paint_order, bool):
            raise SnapshotFormatError(f"paint_order must be an int, got {self.paint_order!r}")

    def to_json_dict(self) -> dict:
        return {
            "node_path": self.node_path,
            "tag": self.tag,
            "attributes": dict(self.attributes),
            "listener_events": sorted(self.listener_events),
            "rect": self.rect.to_json_dict(),
            "visibility": self.visibility.to_json_dict(),
            "paint_order": self.paint_order,
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "ElementRecord":
        try:
            rect = PixelRect.from_json_dict(_require(data, "rect", "element"))
        except ValueError as exc:
            raise SnapshotFormatError(f"element rect invalid: {exc}") from exc
        listeners = _require(data, "listener_events", "element")
        if not isinstance(listeners, (list, tuple)):
            raise SnapshotFormatError("listener_events must be a list")
        attributes = _require(data, "attributes", "element")
        if not isinstance(attributes, Mapping):
            raise SnapshotFormatError("attributes must be an object")
        return cls(
            node_path=_require(data, "node_path", "element"),
            tag=_require(data, "tag", "element"),
            attributes=dict(attributes),
            listener_events=frozenset(listeners),
            rect=rect,
            visibility=Visibility.from_json_dict(_require(data, "visibility", "element")),
            paint_order=_require(data, "paint_order", "element"),
        )


@dataclass(frozen=True)
class FrameRecord:
    """One frame and its subtree.

    ``offset`` is the frame's box within its parent frame's coordinate
    space (the root frame's offset is the page box at the origin), so
    page coordinates of an element are its rect plus the sum of
    ancestor offsets.
    """

    frame_id: str
    origin: str
    offset: PixelRect
    elements: tuple[ElementRecord, ...] = ()
    children: tuple["FrameRecord", ...] = ()

    def __post_init__(self) -> None:
        if not self.frame_id:
            raise SnapshotFormatError("frame_id must be non-empty")
        if not isinstance(self.offset, PixelRect):
            raise SnapshotFormatError("frame offset must be a PixelRect")
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(self, "children", tuple(self.children))
        for element in self.elements:
            if not isinstance(element, ElementRecord):
                raise SnapshotFormatError("frame elements must be ElementRecord instances")
        for child in self.children:
            if not isinstance(child, FrameRecord):
                raise SnapshotFormatError("frame children must be FrameRecord instances")
        orders = [element.paint_order for element in self.elements]
        if len(set(orders)) != len(orders):
            raise SnapshotFormatError(
                f"frame {self.frame_id!r}: paint_order values must be unique"
            )

    def walk(self) -> Iterator[tuple["FrameRecord", ...]]:
        """Yield the chain root..frame for this frame and each descendant."""
        stack: list[tuple[FrameRecord, ...]] = [(self,)]
        while stack:
            chain = stack.pop(0)
            yield chain
            for child in chain[-1].children:
                stack.append(chain + (child,))

    def to_json_dict(self) -> dict:
        return {
            "frame_id": self.frame_id,
            "origin": self.origin,
            "offset": self.offset.to_json_dict(),
            "elements": [element.to_json_dict() for element in self.elements],
            "children": [child.to_json_dict() for child in self.children],
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "FrameRecord":
        try:
            offset = PixelRect.from_json_dict(_require(data, "offset", "frame"))
        except ValueError as exc:
            raise SnapshotFormatError(f"frame offset invalid: {exc}") from exc
        elements = _require(data, "elements", "frame")
        children = _require(data, "children", "frame")
        if not isinstance(elements, list) or not isinstance(children, list):
            raise SnapshotFormatError("frame elements and children must be lists")
        return cls(
            frame_id=_require(data, "frame_id", "frame"),
            origin=_require(data, "origin", "frame"),
            offset=offset,
            elements=tuple(ElementRecord.from_json_dict(entry) for entry in elements),
            children=tuple(cls.from_json_dict(entry) for entry in children),
        )


@dataclass(frozen=True)
class CaptureTiming:
    """Wall-clock markers of the capture, for wait-order auditing."""

    load_event_unix_ms: Optional[float] = None
    collected_unix_ms: Optional[float] = None

    def to_json_dict(self) -> dict:
        return {
            "load_event_unix_ms": self.load_event_unix_ms,
            "collected_unix_ms": self.collected_unix_ms,
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "CaptureTiming":
        return cls(
            load_event_unix_ms=data.get("load_event_unix_ms"),
            collected_unix_ms=data.get("collected_unix_ms"),
        )


@dataclass(frozen=True)
class PageSnapshot:
    """A rendered page, serialized: one root frame plus page metadata."""

    url: str
    page_size_css_px: tuple[float, float]
    capture_options: AppliedOptions
    frame: FrameRecord
    warnings: tuple[str, ...] = ()
    timing: CaptureTiming = field(default_factory=CaptureTiming)

    def __post_init__(self) -> None:
        if not self.url:
            raise SnapshotFormatError("url must be non-empty")
        width, height = self.page_size_css_px
        for extent in (width, height):
            if not (isinstance(extent, (int, float)) and math.isfinite(extent) and extent > 0):
                raise SnapshotFormatError(
                    f"page_size_css_px must be positive and finite, got {self.page_size_css_px!r}"
                )
        object.__setattr__(self, "page_size_css_px", (float(width), float(height)))
        if not isinstance(self.frame, FrameRecord):
            raise SnapshotFormatError("frame must be a FrameRecord")
        if not isinstance(self.capture_options, AppliedOptions):
            raise SnapshotFormatError("capture_options must be an AppliedOptions")
        object.__setattr__(self, "warnings", tuple(self.warnings))
        if (self.frame.offset.x, self.frame.offset.y) != (0.0, 0.0):
            raise SnapshotFormatError("root frame offset must sit at the page origin")

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "url": self.url,
            "page_size_css_px": list(self.page_size_css_px),
            "capture_options": self.capture_options.to_json_dict(),
            "timing": self.timing.to_json_dict(),
            "warnings": list(self.warnings),
            "frame": self.frame.to_json_dict(),
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "PageSnapshot":
        if not isinstance(data, Mapping):
            raise SnapshotFormatError("snapshot must be a JSON object")
        version = data.get("schema_version")
        if version != SCHEMA_VERSION:
            raise SnapshotFormatError(f"unsupported snapshot schema_version {version!r}")
        size = _require(data, "page_size_css_px", "snapshot")
        if not (isinstance(size, (list, tuple)) and len(size) == 2):
            raise SnapshotFormatError("page_size_css_px must be a [width, height] pair")
        try:
            options = AppliedOptions.from_json_dict(_require(data, "capture_options", "snapshot"))
        except ValueError as exc:
            raise SnapshotFormatError(f"capture_options invalid: {exc}") from exc
        warnings = data.get("warnings", [])
        if not isinstance(warnings, list):
            raise SnapshotFormatError("warnings must be a list")
        return cls(
            url=_require(data, "url", "snapshot"),
            page_size_css_px=(size[0], size[1]),
            capture_options=options,
            frame=FrameRecord.from_json_dict(_require(data, "frame", "snapshot")),
            warnings=tuple(warnings),
            timing=CaptureTiming.from_json_dict(data.get("timing", {})),
        )

    def dumps(self, indent: int = 2) -> str:
        return json.dumps(self.to_json_dict(), indent=indent, sort_keys=True)

    @classmethod
    def loads(cls, text: str) -> "PageSnapshot":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SnapshotFormatError(f"snapshot is not valid JSON: {exc}") from exc
        return cls.from_json_dict(data)

    @classmethod
    def load_file(cls, path: Path | str) -> "PageSnapshot":
        return cls.loads(Path(path).read_text("utf-8"))

    def save_file(self, path: Path | str) -> None:
        Path(path).write_text(self.dumps() + "\n", "utf-8")
