"""Tappable-element detection, measurement, and scoring.

This is the browser-independent core: given a :class:`PageSnapshot`
and a device profile it decides which elements a user can tap, where
they sit in page coordinates, how large they are physically, how
likely a tap is to land, and which elements compete for the same spot.

The pipeline is a fixed composition of five pure stages:
detect -> filter visible -> translate to page -> group candidates ->
score.  Each stage failure is reported with the stage's name so a
caller can tell a malformed snapshot from a scoring problem.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .devices import DeviceProfile
from .geometry import PixelRect
from .options import AppliedOptions
from .model import (
    DEFAULT_COEFFICIENTS,
    ModelCoefficients,
    PhysicalSize,
    TapSuccessRate,
    success_rate,
)
from .snapshot import ElementRecord, FrameRecord, PageSnapshot, SnapshotFormatError

REPORT_SCHEMA_VERSION = 1

# Tag names that are tappable by their nature.
TAPPABLE_TAGS = frozenset({"a", "button", "input", "select", "textarea", "label"})

# Event types whose handlers mark an element as tappable: the touch,
# pointer, and UI event families, minus the four that fire without any
# user interaction.
TOUCH_EVENTS = frozenset({"touchstart", "touchend", "touchmove", "touchcancel"})
POINTER_EVENTS = frozenset({
    "pointerdown", "pointerup", "pointermove", "pointercancel",
    "pointerover", "pointerout", "pointerenter", "pointerleave",
})
UI_EVENTS = frozenset({
    "click", "dblclick", "auxclick", "contextmenu",
    "mousedown", "mouseup", "mousemove",
    "mouseover", "mouseout", "mouseenter", "mouseleave",
    "wheel", "keydown", "keyup", "keypress",
    "input", "change", "focus", "blur",
})
EXCLUDED_EVENTS = frozenset({"abort", "error", "load", "unload"})
TAPPABLE_EVENTS = (TOUCH_EVENTS | POINTER_EVENTS | UI_EVENTS) - EXCLUDED_EVENTS

# Inline handler attributes mirror the event set: "on" + event name.
EVENT_ATTRIBUTES = frozenset("on" + event for event in TAPPABLE_EVENTS)

SOURCE_TAG = "tag"
SOURCE_EVENT_ATTRIBUTE = "event_attribute"
SOURCE_EVENT_LISTENER = "event_listener"
SOURCE_IFRAME_EMBEDDED = "iframe_embedded"

__all__ = [
    "REPORT_SCHEMA_VERSION",
    "TAPPABLE_TAGS",
    "TOUCH_EVENTS",
    "POINTER_EVENTS",
    "UI_EVENTS",
    "EXCLUDED_EVENTS",
    "TAPPABLE_EVENTS",
    "EVENT_ATTRIBUTES",
    "SOURCE_TAG",
    "SOURCE_EVENT_ATTRIBUTE",
    "SOURCE_EVENT_LISTENER",
    "SOURCE_IFRAME_EMBEDDED",
    "AnalysisStageError",
    "Detection",
    "TappableElement",
    "AnalysisReport",
    "detect_tappable",
    "filter_visible",
    "partition_visible",
    "translate_to_page",
    "group_candidates",
    "score",
    "analyze",
]


class AnalysisStageError(RuntimeError):
    """A pipeline stage failed; carries which one."""

    def __init__(self, stage: str, message: str):
        self.stage = stage
        super().__init__(f"{stage}: {message}")


@dataclass(frozen=True)
class Detection:
    """A tappable element with its provenance and containing frames."""

    element: ElementRecord
    sources: frozenset[str]
    frame_chain: tuple[FrameRecord, ...]

    @property
    def frame(self) -> FrameRecord:
        return self.frame_chain[-1]


def _detection_sources(element: ElementRecord, embedded: bool) -> frozenset[str]:
    sources = set()
    if element.tag in TAPPABLE_TAGS:
        sources.add(SOURCE_TAG)
    if any(name.lower() in EVENT_ATTRIBUTES for name in element.attributes):
        sources.add(SOURCE_EVENT_ATTRIBUTE)
    if element.listener_events & TAPPABLE_EVENTS:
        sources.add(SOURCE_EVENT_LISTENER)
    if sources and embedded:
        sources.add(SOURCE_IFRAME_EMBEDDED)
    return frozenset(sources)


def detect_tappable(snapshot: PageSnapshot) -> list[Detection]:
    """Select every tappable element across all frames.

    An element qualifies through its tag, an inline event attribute,
    or a registered listener for a tappable event type.  Elements in
    child frames additionally carry the iframe provenance flag.
    """
    if not isinstance(snapshot, PageSnapshot):
        raise AnalysisStageError("detect", "input is not a PageSnapshot")
    detections = []
    for chain in snapshot.frame.walk():
        embedded = len(chain) > 1
        for element in chain[-1].elements:
            sources = _detection_sources(element, embedded)
            if sources:
                detections.append(Detection(element, sources, chain))
    return detections


def partition_visible(
    detections: Iterable[Detection],
) -> tuple[list[Detection], dict[str, int]]:
    """Split detections into visible ones and per-reason drop counts."""
    kept: list[Detection] = []
    exclusions = {
        "zero_opacity": 0,
        "visibility_hidden": 0,
        "not_displayed": 0,
        "pointer_events_none": 0,
        "degenerate_rect": 0,
    }
    for detection in detections:
        visibility = detection.element.visibility
        rect = detection.element.rect
        if visibility.effective_opacity == 0.0:
            exclusions["zero_opacity"] += 1
        elif visibility.visibility_hidden:
            exclusions["visibility_hidden"] += 1
        elif not visibility.displayed:
            exclusions["not_displayed"] += 1
        elif visibility.pointer_events_none:
            exclusions["pointer_events_none"] += 1
        elif rect.width <= 0.0 or rect.height <= 0.0:
            exclusions["degenerate_rect"] += 1
        else:
            kept.append(detection)
    return kept, exclusions


def filter_visible(detections: Iterable[Detection]) -> list[Detection]:
    """Drop elements a user cannot see or that cannot receive taps."""
    return partition_visible(detections)[0]


def translate_to_page(
    element: ElementRecord,
    frame_chain: Sequence[FrameRecord],
    page_size_css_px: tuple[float, float],
) -> PixelRect:
    """Map a frame-local rect to page coordinates.

    The rect is shifted by the summed ancestor frame offsets, then
    clipped to every ancestor frame's box and finally to the page
    bounds; an element half outside its iframe's viewport is only
    tappable on the part that shows.
    """
    if not frame_chain:
        raise AnalysisStageError("translate", "element has no containing frame")
    page_clip = PixelRect(0.0, 0.0, float(page_size_css_px[0]), float(page_size_css_px[1]))
    clip = page_clip
    dx = 0.0
    dy = 0.0
    for frame in frame_chain[1:]:
        frame_box = frame.offset.translate(dx, dy)
        clip = clip.intersect(frame_box)
        dx += frame.offset.x
        dy += frame.offset.y
    return element.rect.translate(dx, dy).intersect(clip)


@dataclass(frozen=True)
class _Placed:
    """Internal: a detection with its page rect and global paint rank."""

    detection: Detection
    page_rect: PixelRect
    paint_rank: int


def _place(snapshot: PageSnapshot, detections: Sequence[Detection]) -> list[_Placed]:
    """Translate rects and assign a page-global paint order.

    Paint order is only comparable within a frame, so the global rank
    orders first by the frame's position in a breadth-first walk
    (children paint over their embedding document) and then by the
    frame-local paint order.
    """
    frame_index = {
        chain[-1].frame_id: index for index, chain in enumerate(snapshot.frame.walk())
    }
    ordered = sorted(
        detections,
        key=lambda d: (frame_index[d.frame.frame_id], d.element.paint_order),
    )
    placed = []
    for rank, detection in enumerate(ordered):
        rect = translate_to_page(
            detection.element, detection.frame_chain, snapshot.page_size_css_px
        )
        placed.append(_Placed(detection, rect, rank))
    return placed


def group_candidates(placed: Sequence[_Placed]) -> dict[int, list[int]]:
    """For each element, the paint ranks competing for its spot.

    Two elements compete when their page rects overlap with positive
    area.  Each list is ordered topmost-first (descending paint rank)
    and always contains the element itself, so the first entry of an
    element's own list is the one a tap would actually hit on the
    overlap.
    """
    groups: dict[int, list[int]] = {entry.paint_rank: [entry.paint_rank] for entry in placed}
    for i, first in enumerate(placed):
        for second in placed[i + 1:]:
            if first.page_rect.intersection_area(second.page_rect) > 0.0:
                groups[first.paint_rank].append(second.paint_rank)
                groups[second.paint_rank].append(first.paint_rank)
    return {rank: sorted(members, reverse=True) for rank, members in groups.items()}


@dataclass(frozen=True)
class TappableElement:
    """One scored element as it appears in a report."""

    element_id: str
    frame_id: str
    node_path: str
    tag: str
    sources: frozenset[str]
    page_rect: PixelRect
    size_mm: PhysicalSize
    success_rate: TapSuccessRate
    candidate_ids: tuple[str, ...]

    def to_json_dict(self) -> dict:
        return {
            "element_id": self.element_id,
            "frame_id": self.frame_id,
            "node_path": self.node_path,
            "tag": self.tag,
            "sources": sorted(self.sources),
            "page_rect": self.page_rect.to_json_dict(),
            "size_mm": {"width_mm": self.size_mm.width_mm, "height_mm": self.size_mm.height_mm},
            "success_rate": self.success_rate.value,
            "candidate_ids": list(self.candidate_ids),
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "TappableElement":
        size = data["size_mm"]
        return cls(
            element_id=data["element_id"],
            frame_id=data["frame_id"],
            node_path=data["node_path"],
            tag=data["tag"],
            sources=frozenset(data["sources"]),
            page_rect=PixelRect.from_json_dict(data["page_rect"]),
            size_mm=PhysicalSize(size["width_mm"], size["height_mm"]),
            success_rate=TapSuccessRate(data["success_rate"]),
            candidate_ids=tuple(data["candidate_ids"]),
        )


@dataclass(frozen=True)
class AnalysisReport:
    """The full result of analyzing one snapshot on one device.

    Pure data: two runs over the same inputs produce equal reports,
    so timestamps and identifiers live with storage, not here.
    """

    url: str
    device: DeviceProfile
    options: AppliedOptions
    page_size_css_px: tuple[float, float]
    elements: tuple[TappableElement, ...]
    exclusions: Mapping[str, int]
    warnings: tuple[str, ...] = ()

    def to_json_dict(self) -> dict:
        return {
            "schema_version": REPORT_SCHEMA_VERSION,
            "url": self.url,
            "device": self.device.to_json_dict(),
            "options": self.options.to_json_dict(),
            "page_size_css_px": list(self.page_size_css_px),
            "elements": [element.to_json_dict() for element in self.elements],
            "exclusions": dict(self.exclusions),
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "AnalysisReport":
        version = data.get("schema_version")
        if version != REPORT_SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema_version {version!r}")
        size = data["page_size_css_px"]
        return cls(
            url=data["url"],
            device=DeviceProfile.from_json_dict(data["device"]),
            options=AppliedOptions.from_json_dict(data["options"]),
            page_size_css_px=(float(size[0]), float(size[1])),
            elements=tuple(TappableElement.from_json_dict(entry) for entry in data["elements"]),
            exclusions=dict(data["exclusions"]),
            warnings=tuple(data.get("warnings", ())),
        )


def score(
    placed: Sequence[_Placed],
    candidate_ranks: Mapping[int, Sequence[int]],
    profile: DeviceProfile,
    coeffs: ModelCoefficients = DEFAULT_COEFFICIENTS,
) -> tuple[TappableElement, ...]:
    """Measure and score placed elements, producing report entries.

    Element ids are assigned in global paint order ("e1" is painted
    first); candidate lists translate ranks to those ids.
    """
    id_of = {entry.paint_rank: f"e{entry.paint_rank + 1}" for entry in placed}
    scored = []
    for entry in sorted(placed, key=lambda item: item.paint_rank):
        rect = entry.page_rect
        size = PhysicalSize(
            width_mm=profile.css_px_to_mm(rect.width),
            height_mm=profile.css_px_to_mm(rect.height),
        )
        scored.append(
            TappableElement(
                element_id=id_of[entry.paint_rank],
                frame_id=entry.detection.frame.frame_id,
                node_path=entry.detection.element.node_path,
                tag=entry.detection.element.tag,
                sources=entry.detection.sources,
                page_rect=rect,
                size_mm=size,
                success_rate=success_rate(size, coeffs),
                candidate_ids=tuple(id_of[rank] for rank in candidate_ranks[entry.paint_rank]),
            )
        )
    return tuple(scored)


def _run_stage(stage: str, func, *args):
    try:
        return func(*args)
    except AnalysisStageError:
        raise
    except (SnapshotFormatError, ValueError, KeyError, TypeError) as exc:
        raise AnalysisStageError(stage, str(exc)) from exc


def analyze(
    snapshot: PageSnapshot,
    profile: DeviceProfile,
    coeffs: ModelCoefficients = DEFAULT_COEFFICIENTS,
) -> AnalysisReport:
    """Run the full pipeline over a snapshot.

    Deterministic and side-effect free; any stage failure raises
    :class:`AnalysisStageError` naming the stage.
    """
    detections = _run_stage("detect", detect_tappable, snapshot)
    visible, exclusions = _run_stage("filter", partition_visible, detections)
    placed = _run_stage("translate", _place, snapshot, visible)
    # Clipping can empty a rect that was positive frame-locally; such
    # elements are off-page and drop out here rather than scoring at 0.
    clipped_out = [entry for entry in placed if entry.page_rect.area == 0.0]
    if clipped_out:
        exclusions = dict(exclusions)
        exclusions["clipped_off_page"] = len(clipped_out)
        placed = [entry for entry in placed if entry.page_rect.area > 0.0]
        placed = [
            _Placed(entry.detection, entry.page_rect, rank)
            for rank, entry in enumerate(sorted(placed, key=lambda item: item.paint_rank))
        ]
    else:
        exclusions = dict(exclusions)
        exclusions["clipped_off_page"] = 0
    candidate_ranks = _run_stage("group", group_candidates, placed)
    elements = _run_stage("score", score, placed, candidate_ranks, profile, coeffs)
    return AnalysisReport(
        url=snapshot.url,
        device=profile,
        options=snapshot.capture_options,
        page_size_css_px=snapshot.page_size_css_px,
        elements=elements,
        exclusions=exclusions,
        warnings=snapshot.warnings,
    )
