"""Headless-browser capture over the remote debugging protocol.

Produces a :class:`PageSnapshot` plus a full-page screenshot for a URL
rendered under smartphone emulation.  The browser engine is reached
through its debugging WebSocket (endpoint from the
``TAPAUDIT_BROWSER_ENDPOINT`` environment variable or passed
explicitly); no browser is bundled.

A capture runs in a fixed order: open a fresh target, apply emulation,
optionally install cookies, navigate, wait for the load event plus the
configured settle time, serialize every reachable frame's elements
(including out-of-process frames via protocol-level attachment), query
per-element listeners, and only then scroll through the page stitching
viewport screenshots.  Content that loads during the scroll is
deliberately absent from the snapshot.
"""

from __future__ import annotations

import asyncio
import base64
import io
import json
import logging
import os
import time
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Mapping, Optional
from urllib.parse import urlsplit

import httpx
import websockets
from PIL import Image

from .devices import DeviceProfile
from .geometry import PixelRect
from .options import CaptureOptions, CookieRecord, CookieValidationError
from .snapshot import (
    CaptureTiming,
    ElementRecord,
    FrameRecord,
    PageSnapshot,
    Visibility,
)

logger = logging.getLogger(__name__)

ENDPOINT_ENV_VAR = "TAPAUDIT_BROWSER_ENDPOINT"
DEFAULT_NAV_TIMEOUT_MS = 30000
DEFAULT_COMMAND_TIMEOUT_S = 60.0

# Computed styles requested per layout node, in this order.
_STYLE_KEYS = ("opacity", "visibility", "display", "pointer-events")

# Non-visual document machinery; never recorded as page elements.
_STRUCTURAL_TAGS = frozenset({
    "head", "meta", "title", "script", "style", "link", "base", "noscript", "template",
})

__all__ = [
    "ENDPOINT_ENV_VAR",
    "CaptureError",
    "EngineConnectionError",
    "SessionError",
    "NavigationError",
    "LoadTimeoutError",
    "ProtocolError",
    "CaptureResult",
    "CDPConnection",
    "CaptureSession",
    "open_session",
    "capture_url",
    "resolve_ws_endpoint",
]


class CaptureError(RuntimeError):
    """Base class for capture failures; carries the failing stage."""

    stage = "capture"

    def __init__(self, message: str):
        super().__init__(f"{self.stage}: {message}")


class EngineConnectionError(CaptureError):
    stage = "connect"


class SessionError(CaptureError):
    stage = "session"


class NavigationError(CaptureError):
    stage = "navigate"


class LoadTimeoutError(CaptureError):
    stage = "load"


class ProtocolError(CaptureError):
    stage = "protocol"


@dataclass(frozen=True)
class CaptureResult:
    """What one capture yields."""

    snapshot: PageSnapshot
    screenshot_png: bytes
    transient: bool


async def resolve_ws_endpoint(endpoint: str) -> str:
    """Turn a configured endpoint into a debugger WebSocket URL.

    ``ws://`` endpoints are used as-is; ``http(s)://`` endpoints are
    asked for their version document, which names the socket.
    """
    if endpoint.startswith(("ws://", "wss://")):
        return endpoint
    if endpoint.startswith(("http://", "https://")):
        try:
            async with httpx.AsyncClient(timeout=10.0) as client:
                response = await client.get(endpoint.rstrip("/") + "/json/version")
                response.raise_for_status()
                ws_url = response.json().get("webSocketDebuggerUrl")
        except (httpx.HTTPError, ValueError) as exc:
            raise EngineConnectionError(f"endpoint discovery failed: {exc}") from exc
        if not ws_url:
            raise EngineConnectionError("version document lacks webSocketDebuggerUrl")
        return ws_url
    raise EngineConnectionError(f"unsupported endpoint scheme: {endpoint!r}")


class CDPConnection:
    """One debugging-protocol WebSocket with request/response plumbing.

    Commands are matched to replies by id; unsolicited events are
    fanned out to registered waiters keyed by (method, session id).
    """

    def __init__(self, socket):
        self._socket = socket
        self._next_id = 1
        self._pending: dict[int, asyncio.Future] = {}
        self._event_waiters: dict[tuple[str, Optional[str]], list[asyncio.Future]] = {}
        self._event_log: list[tuple[str, Optional[str], dict]] = []
        self._reader = asyncio.create_task(self._read_loop())

    @classmethod
    async def connect(cls, endpoint: str) -> "CDPConnection":
        ws_url = await resolve_ws_endpoint(endpoint)
        try:
            socket = await websockets.connect(ws_url, max_size=None)
        except Exception as exc:
            raise EngineConnectionError(f"cannot reach engine at {ws_url}: {exc}") from exc
        return cls(socket)

    async def _read_loop(self) -> None:
        try:
            async for raw in self._socket:
                message = json.loads(raw)
                if "id" in message:
                    future = self._pending.pop(message["id"], None)
                    if future is not None and not future.done():
                        future.set_result(message)
                else:
                    self._dispatch_event(message)
        except websockets.ConnectionClosed:
            pass
        except Exception as exc:
            logger.warning("connection reader stopped: %s", exc)
        finally:
            closing = ProtocolError("connection closed")
            for future in self._pending.values():
                if not future.done():
                    future.set_exception(closing)
            self._pending.clear()

    def _dispatch_event(self, message: Mapping) -> None:
        method = message.get("method", "")
        session_id = message.get("sessionId")
        params = message.get("params", {})
        self._event_log.append((method, session_id, params))
        for key in ((method, session_id), (method, None)):
            waiters = self._event_waiters.get(key, [])
            while waiters:
                future = waiters.pop(0)
                if not future.done():
                    future.set_result(params)

    def drain_events(self, method: str) -> list[tuple[Optional[str], dict]]:
        """Collect and remove all logged events of one type."""
        matched = [(sid, params) for m, sid, params in self._event_log if m == method]
        self._event_log = [entry for entry in self._event_log if entry[0] != method]
        return matched

    async def send(
        self,
        method: str,
        params: Optional[Mapping] = None,
        session_id: Optional[str] = None,
        timeout: float = DEFAULT_COMMAND_TIMEOUT_S,
    ) -> dict:
        message: dict[str, Any] = {"id": self._next_id, "method": method, "params": params or {}}
        if session_id:
            message["sessionId"] = session_id
        self._next_id += 1
        future: asyncio.Future = asyncio.get_running_loop().create_future()
        self._pending[message["id"]] = future
        try:
            await self._socket.send(json.dumps(message))
            reply = await asyncio.wait_for(future, timeout)
        except asyncio.TimeoutError:
            self._pending.pop(message["id"], None)
            raise ProtocolError(f"{method} timed out after {timeout}s") from None
        except websockets.ConnectionClosed as exc:
            raise ProtocolError(f"{method}: connection closed") from exc
        if "error" in reply:
            error = reply["error"]
            raise ProtocolError(f"{method} failed: {error.get('message')} ({error.get('code')})")
        return reply.get("result", {})

    def listen_for(self, method: str, session_id: Optional[str] = None) -> asyncio.Future:
        """Register for the next matching event before it can fire.

        Registering is synchronous, so a waiter created before sending a
        command cannot miss an event that races the command's reply.
        """
        future: asyncio.Future = asyncio.get_running_loop().create_future()
        self._event_waiters.setdefault((method, session_id), []).append(future)
        return future

    async def wait_for_event(
        self,
        method: str,
        session_id: Optional[str] = None,
        timeout: Optional[float] = None,
    ) -> dict:
        future = self.listen_for(method, session_id)
        try:
            return await asyncio.wait_for(future, timeout)
        except asyncio.TimeoutError:
            raise TimeoutError(f"no {method} event within {timeout}s") from None

    async def close(self) -> None:
        self._reader.cancel()
        try:
            await self._socket.close()
        except Exception:
            pass


def _string_table(snapshot_result: Mapping) -> Callable[[int], str]:
    strings = snapshot_result.get("strings", [])

    def lookup(index) -> str:
        if isinstance(index, int) and 0 <= index < len(strings):
            return strings[index]
        return ""

    return lookup


def _rare_map(rare: Optional[Mapping]) -> dict[int, Any]:
    if not rare:
        return {}
    indexes = rare.get("index", [])
    values = rare.get("value", indexes)
    if "value" in rare:
        return dict(zip(indexes, values))
    # Boolean rare data carries indexes only.
    return {index: True for index in indexes}


@dataclass
class _ParsedDocument:
    """One document from a DOM snapshot, reduced to what we keep."""

    frame_id: str
    origin: str
    elements: list[ElementRecord]
    backend_ids: list[int]
    iframe_frames: dict[str, PixelRect]
    child_documents: dict[str, int]


def _node_paths(node_names: list[str], node_types: list[int], parents: list[int]) -> list[str]:
    """XPath-like locator per node, e.g. ``/html/body/div[2]``."""
    children: dict[int, list[int]] = {}
    for index, parent in enumerate(parents):
        if parent >= 0:
            children.setdefault(parent, []).append(index)
    paths = [""] * len(parents)
    for index in range(len(parents)):
        parent = parents[index]
        if node_types[index] != 1:
            continue
        tag = node_names[index].lower()
        position = 1
        for sibling in children.get(parent, []):
            if sibling == index:
                break
            if node_types[sibling] == 1 and node_names[sibling].lower() == tag:
                position += 1
        prefix = paths[parent] if parent >= 0 else ""
        if tag in ("html", "body"):
            # unique per document; an index would only add noise
            paths[index] = f"{prefix}/{tag}"
        else:
            paths[index] = f"{prefix}/{tag}[{position}]"
    return paths


def _parse_document(document: Mapping, lookup: Callable[[int], str]) -> _ParsedDocument:
    nodes = document.get("nodes", {})
    layout = document.get("layout", {})
    parents: list[int] = nodes.get("parentIndex", [])
    node_types: list[int] = nodes.get("nodeType", [])
    node_names = [lookup(i) for i in nodes.get("nodeName", [])]
    backend_ids: list[int] = nodes.get("backendNodeId", [])
    attribute_lists: list[list[int]] = nodes.get("attributes", [])
    pseudo_types = _rare_map(nodes.get("pseudoType"))
    content_documents = _rare_map(nodes.get("contentDocumentIndex"))
    frame_ids = {index: lookup(value) for index, value in _rare_map(nodes.get("frameId")).items()}

    layout_of: dict[int, int] = {}
    for layout_index, node_index in enumerate(layout.get("nodeIndex", [])):
        layout_of.setdefault(node_index, layout_index)
    bounds: list[list[float]] = layout.get("bounds", [])
    style_rows: list[list[int]] = layout.get("styles", [])
    paint_orders: list[int] = layout.get("paintOrders", [])

    def style_of(node_index: int) -> dict[str, str]:
        layout_index = layout_of.get(node_index)
        if layout_index is None or layout_index >= len(style_rows):
            return {}
        row = style_rows[layout_index]
        return {key: lookup(row[k]) if k < len(row) else "" for k, key in enumerate(_STYLE_KEYS)}

    opacity_cache: dict[int, float] = {}

    def own_opacity(node_index: int) -> float:
        if node_index not in opacity_cache:
            try:
                value = float(style_of(node_index).get("opacity") or 1.0)
            except ValueError:
                value = 1.0
            opacity_cache[node_index] = min(max(value, 0.0), 1.0)
        return opacity_cache[node_index]

    def effective_opacity(node_index: int) -> float:
        product = 1.0
        current = node_index
        while current >= 0:
            product *= own_opacity(current)
            current = parents[current]
        return product

    paths = _node_paths(node_names, node_types, parents)
    doc_frame_id = frame_ids.get(0, "")
    document_url = lookup(document.get("documentURL", -1))
    parts = urlsplit(document_url)
    origin = f"{parts.scheme}://{parts.netloc}" if parts.scheme and parts.netloc else document_url

    recorded: list[tuple[int, int, ElementRecord]] = []
    element_backend: list[int] = []
    iframe_frames: dict[str, PixelRect] = {}
    child_documents: dict[str, int] = {}
    for node_index, node_type in enumerate(node_types):
        if node_type != 1 or node_index in pseudo_types:
            continue
        tag = node_names[node_index].lower()
        layout_index = layout_of.get(node_index)
        if layout_index is None or layout_index >= len(bounds):
            continue
        x, y, width, height = bounds[layout_index]
        rect = PixelRect(x, y, max(width, 0.0), max(height, 0.0))
        if tag in ("iframe", "frame"):
            frame_id = frame_ids.get(node_index, "")
            if frame_id:
                iframe_frames[frame_id] = rect
                if node_index in content_documents:
                    child_documents[frame_id] = content_documents[node_index]
        if tag in _STRUCTURAL_TAGS:
            continue
        styles = style_of(node_index)
        attributes: dict[str, str] = {}
        if node_index < len(attribute_lists):
            pairs = attribute_lists[node_index]
            for k in range(0, len(pairs) - 1, 2):
                attributes[lookup(pairs[k]).lower()] = lookup(pairs[k + 1])
        visibility = Visibility(
            effective_opacity=effective_opacity(node_index),
            visibility_hidden=styles.get("visibility") in ("hidden", "collapse"),
            displayed=styles.get("display") != "none",
            pointer_events_none=styles.get("pointer-events") == "none",
        )
        paint = paint_orders[layout_index] if layout_index < len(paint_orders) else layout_index
        recorded.append((paint, node_index, ElementRecord(
            node_path=paths[node_index] or f"/*[{node_index}]",
            tag=tag,
            attributes=attributes,
            listener_events=frozenset(),
            rect=rect,
            visibility=visibility,
            paint_order=0,
        )))
        element_backend.append(backend_ids[node_index] if node_index < len(backend_ids) else -1)

    # The engine's paint indexes can collide across stacking contexts;
    # renumbering preserves order and guarantees per-frame uniqueness.
    order = sorted(range(len(recorded)), key=lambda i: (recorded[i][0], recorded[i][1]))
    elements: list[ElementRecord] = []
    ordered_backend: list[int] = []
    for new_order, original in enumerate(order):
        _, _, element = recorded[original]
        elements.append(ElementRecord(
            node_path=element.node_path,
            tag=element.tag,
            attributes=element.attributes,
            listener_events=element.listener_events,
            rect=element.rect,
            visibility=element.visibility,
            paint_order=new_order,
        ))
        ordered_backend.append(element_backend[original])

    return _ParsedDocument(
        frame_id=doc_frame_id,
        origin=origin,
        elements=elements,
        backend_ids=ordered_backend,
        iframe_frames=iframe_frames,
        child_documents=child_documents,
    )


class CaptureSession:
    """One browser target prepared for exactly one capture.

    Emulation is applied at open time, before any navigation, so the
    page only ever renders under the device profile.  Cookie values
    stay on the session object and are dropped on close.
    """

    def __init__(
        self,
        connection: CDPConnection,
        profile: DeviceProfile,
        options: CaptureOptions,
        target_id: str,
        session_id: str,
        nav_timeout_ms: int,
    ):
        self._connection = connection
        self.profile = profile
        self.options = options
        self._target_id = target_id
        self._session_id = session_id
        self._nav_timeout_ms = nav_timeout_ms
        self._cookies: Optional[tuple[CookieRecord, ...]] = None
        self._navigated = False
        self._closed = False

    @property
    def transient(self) -> bool:
        return self._cookies is not None

    async def _send(self, method: str, params: Optional[Mapping] = None, **kwargs) -> dict:
        return await self._connection.send(
            method, params, session_id=self._session_id, **kwargs
        )

    async def inject_cookies(self, cookies: Iterable[CookieRecord], url: str) -> None:
        """Install cookies for the upcoming navigation.

        Must run before :meth:`capture`; a session that received
        cookies is transient and its results never reach durable
        storage.
        """
        if self._navigated:
            raise SessionError("cookies must be injected before navigation")
        records = tuple(cookies)
        for record in records:
            if not isinstance(record, CookieRecord):
                raise CookieValidationError(f"expected CookieRecord, got {type(record).__name__}")
            params: dict[str, Any] = {
                "name": record.name,
                "value": record.value,
                "path": record.path,
                "secure": record.secure,
                "httpOnly": record.http_only,
            }
            if record.domain:
                params["domain"] = record.domain
            else:
                params["url"] = url
            result = await self._send("Network.setCookie", params)
            if result.get("success") is False:
                raise SessionError(f"engine rejected cookie {record.name!r}")
        if records:
            self._cookies = records

    async def capture(self, url: str) -> CaptureResult:
        """Navigate and produce the snapshot plus stitched screenshot."""
        if self._closed:
            raise SessionError("session is closed")
        if self._navigated:
            raise SessionError("a session captures exactly one page")
        self._navigated = True

        # Register for the load event before navigating: on fast pages it
        # can fire before the navigate command is even acknowledged.
        load_future = self._connection.listen_for("Page.loadEventFired", self._session_id)
        result = await self._send("Page.navigate", {"url": url})
        if result.get("errorText"):
            load_future.cancel()
            raise NavigationError(f"{url}: {result['errorText']}")
        try:
            await asyncio.wait_for(load_future, self._nav_timeout_ms / 1000.0)
        except asyncio.TimeoutError:
            raise LoadTimeoutError(
                f"load event not fired within {self._nav_timeout_ms} ms"
            ) from None
        load_event_ms = time.time() * 1000.0
        await asyncio.sleep(self.options.waiting_time_ms / 1000.0)

        metrics = await self._send("Page.getLayoutMetrics")
        content = metrics.get("cssContentSize") or metrics.get("contentSize") or {}
        page_width = float(content.get("width") or self.profile.viewport_css_px[0])
        page_height = float(content.get("height") or self.profile.viewport_css_px[1])

        frame, warnings = await self._collect_frames(url)
        collected_ms = time.time() * 1000.0

        screenshot = await self._stitch_screenshot(page_width, page_height)

        snapshot = PageSnapshot(
            url=url,
            page_size_css_px=(page_width, page_height),
            capture_options=self.options.applied(),
            frame=FrameRecord(
                frame_id=frame.frame_id,
                origin=frame.origin,
                offset=PixelRect(0.0, 0.0, page_width, page_height),
                elements=tuple(frame.elements),
                children=frame.children,
            ),
            warnings=tuple(warnings),
            timing=CaptureTiming(load_event_unix_ms=load_event_ms, collected_unix_ms=collected_ms),
        )
        return CaptureResult(
            snapshot=snapshot,
            screenshot_png=screenshot,
            transient=self.transient,
        )

    async def _collect_frames(self, url: str) -> tuple[FrameRecord, list[str]]:
        """Serialize every reachable frame into one FrameRecord tree."""
        documents: list[_ParsedDocument] = []
        owner_session: list[Optional[str]] = []
        target_base: list[int] = []

        async def collect_target(session_id: Optional[str]) -> None:
            result = await self._connection.send(
                "DOMSnapshot.captureSnapshot",
                {"computedStyles": list(_STYLE_KEYS), "includePaintOrder": True},
                session_id=session_id or self._session_id,
            )
            lookup = _string_table(result)
            base = len(documents)
            for document in result.get("documents", []):
                documents.append(_parse_document(document, lookup))
                owner_session.append(session_id)
                target_base.append(base)

        await collect_target(None)

        # Out-of-process frames were auto-attached as separate targets;
        # serialize each through its own session.
        attached = self._connection.drain_events("Target.attachedToTarget")
        for _, params in attached:
            info = params.get("targetInfo", {})
            if info.get("type") not in ("iframe", "frame"):
                continue
            child_session = params.get("sessionId")
            try:
                await collect_target(child_session)
            except ProtocolError as exc:
                logger.warning("skipping frame target %s: %s", info.get("targetId"), exc)

        await self._collect_listeners(documents, owner_session)

        by_frame_id = {doc.frame_id: doc for doc in documents if doc.frame_id}
        doc_position = {id(doc): index for index, doc in enumerate(documents)}
        main = documents[0] if documents else None
        if main is None:
            raise ProtocolError("engine returned no documents")

        warnings: list[str] = []
        consumed: set[str] = set()

        def build(doc: _ParsedDocument, offset: PixelRect) -> FrameRecord:
            consumed.add(doc.frame_id)
            children = []
            for frame_id, rect in sorted(doc.iframe_frames.items()):
                child_doc: Optional[_ParsedDocument] = None
                if frame_id in doc.child_documents:
                    # contentDocumentIndex points within the owning
                    # target's document list; rebase into the combined one.
                    base = target_base[doc_position[id(doc)]]
                    absolute = base + doc.child_documents[frame_id]
                    if absolute < len(documents):
                        child_doc = documents[absolute]
                if child_doc is None:
                    child_doc = by_frame_id.get(frame_id)
                if child_doc is None or child_doc.frame_id in consumed:
                    warnings.append(
                        f"frame {frame_id} inside {doc.frame_id or 'main frame'} "
                        "could not be serialized"
                    )
                    continue
                children.append(build(child_doc, rect))
            return FrameRecord(
                frame_id=doc.frame_id or "main",
                origin=doc.origin,
                offset=offset,
                elements=tuple(doc.elements),
                children=tuple(children),
            )

        root = build(main, PixelRect(0.0, 0.0, 1.0, 1.0))
        return root, warnings

    async def _collect_listeners(
        self,
        documents: list[_ParsedDocument],
        owner_session: list[Optional[str]],
    ) -> None:
        """Fill listener_events per element via the protocol's listener query."""
        semaphore = asyncio.Semaphore(8)

        async def query(session_id: Optional[str], backend_id: int) -> frozenset[str]:
            if backend_id < 0:
                return frozenset()
            async with semaphore:
                try:
                    resolved = await self._connection.send(
                        "DOM.resolveNode",
                        {"backendNodeId": backend_id},
                        session_id=session_id or self._session_id,
                    )
                    object_id = resolved.get("object", {}).get("objectId")
                    if not object_id:
                        return frozenset()
                    listeners = await self._connection.send(
                        "DOMDebugger.getEventListeners",
                        {"objectId": object_id},
                        session_id=session_id or self._session_id,
                    )
                    await self._connection.send(
                        "Runtime.releaseObject",
                        {"objectId": object_id},
                        session_id=session_id or self._session_id,
                    )
                    return frozenset(
                        entry.get("type", "").lower()
                        for entry in listeners.get("listeners", [])
                        if entry.get("type")
                    )
                except ProtocolError:
                    return frozenset()

        tasks = []
        slots = []
        for doc, session_id in zip(documents, owner_session):
            for position, backend_id in enumerate(doc.backend_ids):
                tasks.append(query(session_id, backend_id))
                slots.append((doc, position))
        results = await asyncio.gather(*tasks)
        for (doc, position), events in zip(slots, results):
            if not events:
                continue
            element = doc.elements[position]
            doc.elements[position] = ElementRecord(
                node_path=element.node_path,
                tag=element.tag,
                attributes=element.attributes,
                listener_events=events,
                rect=element.rect,
                visibility=element.visibility,
                paint_order=element.paint_order,
            )

    async def _scroll_to(self, top: float) -> None:
        # Console-channel evaluation stays available even when page
        # script execution is disabled.
        await self._send(
            "Runtime.evaluate",
            {"expression": f"window.scrollTo(0, {top:.0f})", "returnByValue": True},
        )

    async def _capture_tile(self) -> Image.Image:
        shot = await self._send("Page.captureScreenshot", {"format": "png"})
        return Image.open(io.BytesIO(base64.b64decode(shot["data"]))).convert("RGB")

    async def _stitch_screenshot(self, page_width: float, page_height: float) -> bytes:
        """Full-page PNG from viewport tiles taken while scrolling down.

        Tiles land at their scroll offset scaled to physical pixels;
        the final tile is taken at the lowest reachable offset, so its
        already-covered top simply overwrites identical content.
        """
        viewport_width, viewport_height = self.profile.viewport_css_px
        scale = self.profile.device_pixel_ratio
        canvas = Image.new(
            "RGB",
            (max(round(page_width * scale), 1), max(round(page_height * scale), 1)),
            (255, 255, 255),
        )
        offsets = [0.0]
        while offsets[-1] + viewport_height < page_height:
            offsets.append(min(offsets[-1] + viewport_height, page_height - viewport_height))
        for top in offsets:
            await self._scroll_to(top)
            await asyncio.sleep(0.05)
            tile = await self._capture_tile()
            canvas.paste(tile, (0, round(top * scale)))
        await self._scroll_to(0.0)
        if canvas.height > round(page_height * scale):
            canvas = canvas.crop((0, 0, canvas.width, round(page_height * scale)))
        out = io.BytesIO()
        canvas.save(out, format="PNG")
        return out.getvalue()

    async def close(self) -> None:
        if self._closed:
            return
        self._closed = True
        self._cookies = None
        try:
            await self._connection.send("Target.closeTarget", {"targetId": self._target_id})
        except Exception:
            pass
        await self._connection.close()


async def open_session(
    profile: DeviceProfile,
    options: CaptureOptions,
    endpoint: Optional[str] = None,
    nav_timeout_ms: int = DEFAULT_NAV_TIMEOUT_MS,
) -> CaptureSession:
    """Connect to the engine and prepare an emulated, un-navigated tab."""
    endpoint = endpoint or os.environ.get(ENDPOINT_ENV_VAR)
    if not endpoint:
        raise EngineConnectionError(
            f"no engine endpoint; set {ENDPOINT_ENV_VAR} or pass endpoint="
        )
    connection = await CDPConnection.connect(endpoint)
    try:
        created = await connection.send("Target.createTarget", {"url": "about:blank"})
        target_id = created["targetId"]
        attached = await connection.send(
            "Target.attachToTarget", {"targetId": target_id, "flatten": True}
        )
        session_id = attached["sessionId"]
        width, height = profile.viewport_css_px

        async def send(method: str, params: Optional[Mapping] = None) -> dict:
            return await connection.send(method, params, session_id=session_id)

        await send("Page.enable")
        await send("Runtime.enable")
        await send("DOM.enable")
        await send(
            "Target.setAutoAttach",
            {"autoAttach": True, "waitForDebuggerOnStart": False, "flatten": True},
        )
        await send(
            "Emulation.setDeviceMetricsOverride",
            {
                "width": width,
                "height": height,
                "deviceScaleFactor": profile.device_pixel_ratio,
                "mobile": True,
                "screenWidth": width,
                "screenHeight": height,
            },
        )
        await send("Emulation.setUserAgentOverride", {"userAgent": profile.user_agent})
        await send("Emulation.setTouchEmulationEnabled", {"enabled": True, "maxTouchPoints": 5})
        if not options.execute_js:
            await send("Emulation.setScriptExecutionDisabled", {"value": True})
    except ProtocolError as exc:
        await connection.close()
        raise SessionError(f"emulation setup failed: {exc}") from exc
    except Exception:
        await connection.close()
        raise
    return CaptureSession(connection, profile, options, target_id, session_id, nav_timeout_ms)


async def capture_url(
    url: str,
    profile: DeviceProfile,
    options: CaptureOptions,
    endpoint: Optional[str] = None,
    nav_timeout_ms: int = DEFAULT_NAV_TIMEOUT_MS,
) -> CaptureResult:
    """Open a session, capture one URL, and always close the session."""
    session = await open_session(profile, options, endpoint=endpoint, nav_timeout_ms=nav_timeout_ms)
    try:
        if options.cookies:
            await session.inject_cookies(options.cookies, url)
        return await session.capture(url)
    finally:
        await session.close()
