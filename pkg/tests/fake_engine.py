"""A scripted stand-in for a browser's remote-debugging endpoint.

``FakeEngine`` serves the handful of protocol methods the capture path
uses, from canned DOM payloads, and records every command it receives
so tests can assert on call ordering and parameters.  Tiles returned by
the screenshot command are solid colors keyed by the current scroll
offset, which makes stitching geometry visible in the output pixels.
"""

from __future__ import annotations

import asyncio
import base64
import io
import json
import re
from typing import Iterable, Mapping, Optional

import websockets
from PIL import Image

MAIN_SESSION = "S1"

_SCROLL_RE = re.compile(r"scrollTo\(0,\s*(-?\d+)\)")

# solid tile colors handed out per distinct scroll offset, in order
TILE_COLORS = [
    (220, 40, 40),
    (40, 180, 70),
    (60, 90, 220),
    (230, 200, 40),
    (160, 60, 200),
]


class DocumentSpec:
    """Declarative description of one document inside a DOM payload.

    ``elements`` entries are dicts with keys:

    - ``tag`` (str, required), ``rect`` (x, y, w, h; required)
    - ``attrs`` (mapping), ``paint`` (raw engine paint index)
    - ``backend`` (backend node id; auto-assigned when omitted)
    - ``styles`` (overrides for opacity/visibility/display/pointer-events)
    - ``frame_id`` (marks the node as an iframe owning that frame)
    - ``content_doc`` (index of the child document within the same target)
    - ``pseudo`` (pseudo-element type; such nodes must be ignored)
    - ``no_layout`` (node exists in the DOM but has no layout box)
    """

    def __init__(self, url: str, frame_id: str, elements: Iterable[Mapping] = ()):
        self.url = url
        self.frame_id = frame_id
        self.elements = list(elements)


def build_payload(documents: list[DocumentSpec], backend_start: int = 100) -> dict:
    strings: list[str] = []
    interned: dict[str, int] = {}

    def intern(value: str) -> int:
        if value not in interned:
            interned[value] = len(strings)
            strings.append(value)
        return interned[value]

    payload_documents = []
    next_backend = backend_start
    for spec in documents:
        parent_index = [-1, 0, 1]
        node_types = [9, 1, 1]
        node_names = [intern("#document"), intern("HTML"), intern("BODY")]
        backend_ids = [next_backend, next_backend + 1, next_backend + 2]
        next_backend += 3
        attribute_lists: list[list[int]] = [[], [], []]
        frame_id_rare: dict[int, int] = {0: intern(spec.frame_id)}
        pseudo_rare: dict[int, int] = {}
        content_doc_rare: dict[int, int] = {}

        layout_node_index: list[int] = []
        layout_bounds: list[list[float]] = []
        layout_styles: list[list[int]] = []
        layout_paint: list[int] = []

        for position, element in enumerate(spec.elements):
            node_index = len(parent_index)
            parent_index.append(2)  # direct child of <body>
            node_types.append(1)
            node_names.append(intern(element["tag"].upper()))
            if "backend" in element:
                backend_ids.append(element["backend"])
            else:
                backend_ids.append(next_backend)
                next_backend += 1
            attrs: list[int] = []
            for key, value in element.get("attrs", {}).items():
                attrs.append(intern(key))
                attrs.append(intern(value))
            attribute_lists.append(attrs)
            if "frame_id" in element:
                frame_id_rare[node_index] = intern(element["frame_id"])
                if "content_doc" in element:
                    content_doc_rare[node_index] = element["content_doc"]
            if "pseudo" in element:
                pseudo_rare[node_index] = intern(element["pseudo"])
            if element.get("no_layout"):
                continue
            styles = {
                "opacity": "1",
                "visibility": "visible",
                "display": "block",
                "pointer-events": "auto",
            }
            styles.update(element.get("styles", {}))
            layout_node_index.append(node_index)
            layout_bounds.append([float(v) for v in element["rect"]])
            layout_styles.append(
                [
                    intern(styles["opacity"]),
                    intern(styles["visibility"]),
                    intern(styles["display"]),
                    intern(styles["pointer-events"]),
                ]
            )
            layout_paint.append(element.get("paint", position + 1))

        payload_documents.append(
            {
                "documentURL": intern(spec.url),
                "nodes": {
                    "parentIndex": parent_index,
                    "nodeType": node_types,
                    "nodeName": node_names,
                    "backendNodeId": backend_ids,
                    "attributes": attribute_lists,
                    "frameId": {
                        "index": list(frame_id_rare),
                        "value": list(frame_id_rare.values()),
                    },
                    "pseudoType": {
                        "index": list(pseudo_rare),
                        "value": list(pseudo_rare.values()),
                    },
                    "contentDocumentIndex": {
                        "index": list(content_doc_rare),
                        "value": list(content_doc_rare.values()),
                    },
                },
                "layout": {
                    "nodeIndex": layout_node_index,
                    "bounds": layout_bounds,
                    "styles": layout_styles,
                    "paintOrders": layout_paint,
                },
            }
        )
    return {"documents": payload_documents, "strings": strings}


class FakeEngine:
    """One-connection scripted engine; use as an async context manager."""

    def __init__(
        self,
        documents: Optional[list[DocumentSpec]] = None,
        listener_map: Optional[dict[int, list[str]]] = None,
        page_size: tuple[float, float] = (100.0, 300.0),
        viewport: tuple[int, int] = (100, 120),
        dpr: float = 1.0,
        oopif_documents: Optional[dict[str, list[DocumentSpec]]] = None,
        navigate_error: str = "",
        emit_load_event: bool = True,
        events_before_reply: bool = False,
        cookie_success: bool = True,
        resolve_error_backends: Iterable[int] = (),
    ):
        self.documents = documents or [DocumentSpec("https://site.test/", "FRAME1")]
        self.listener_map = listener_map or {}
        self.page_size = page_size
        self.viewport = viewport
        self.dpr = dpr
        self.oopif_documents = oopif_documents or {}
        self.navigate_error = navigate_error
        self.emit_load_event = emit_load_event
        self.events_before_reply = events_before_reply
        self.cookie_success = cookie_success
        self.resolve_error_backends = set(resolve_error_backends)

        self.calls: list[tuple[str, dict, Optional[str]]] = []
        self.scroll_log: list[float] = []
        self._scroll_y = 0.0
        self._tile_color_of: dict[float, tuple[int, int, int]] = {}
        self._server = None
        self.endpoint = ""

    async def __aenter__(self) -> "FakeEngine":
        self._server = await websockets.serve(self._handle, "127.0.0.1", 0)
        port = self._server.sockets[0].getsockname()[1]
        self.endpoint = f"ws://127.0.0.1:{port}/devtools"
        return self

    async def __aexit__(self, *exc_info) -> None:
        self._server.close()
        await self._server.wait_closed()

    def calls_for(self, method: str) -> list[tuple[dict, Optional[str]]]:
        return [(params, sid) for m, params, sid in self.calls if m == method]

    def call_order(self, *methods: str) -> list[str]:
        """The subset of recorded call names, in arrival order."""
        wanted = set(methods)
        return [m for m, _, _ in self.calls if m in wanted]

    def _tile_png(self) -> bytes:
        color = self._tile_color_of.setdefault(
            self._scroll_y, TILE_COLORS[len(self._tile_color_of) % len(TILE_COLORS)]
        )
        width = round(self.viewport[0] * self.dpr)
        height = round(self.viewport[1] * self.dpr)
        image = Image.new("RGB", (width, height), color)
        out = io.BytesIO()
        image.save(out, format="PNG")
        return out.getvalue()

    def _result_for(self, method: str, params: dict, session_id: Optional[str]):
        if method == "Target.createTarget":
            return {"targetId": "T1"}
        if method == "Target.attachToTarget":
            return {"sessionId": MAIN_SESSION}
        if method == "Network.setCookie":
            return {"success": self.cookie_success}
        if method == "Page.navigate":
            if self.navigate_error:
                return {"frameId": "FRAME1", "errorText": self.navigate_error}
            return {"frameId": "FRAME1"}
        if method == "Page.getLayoutMetrics":
            return {
                "cssContentSize": {
                    "x": 0,
                    "y": 0,
                    "width": self.page_size[0],
                    "height": self.page_size[1],
                }
            }
        if method == "DOMSnapshot.captureSnapshot":
            for oopif_session, specs in self.oopif_documents.items():
                if session_id == oopif_session:
                    return build_payload(specs, backend_start=500)
            return build_payload(self.documents)
        if method == "DOM.resolveNode":
            backend_id = params.get("backendNodeId", -1)
            if backend_id in self.resolve_error_backends:
                return {"error": {"code": -32000, "message": "No node with given id"}}
            return {"object": {"objectId": f"obj{backend_id}"}}
        if method == "DOMDebugger.getEventListeners":
            backend_id = int(params["objectId"][3:])
            return {
                "listeners": [
                    {"type": kind, "useCapture": False}
                    for kind in self.listener_map.get(backend_id, ())
                ]
            }
        if method == "Runtime.evaluate":
            match = _SCROLL_RE.search(params.get("expression", ""))
            if match:
                self._scroll_y = float(match.group(1))
                self.scroll_log.append(self._scroll_y)
            return {"result": {"type": "undefined"}}
        if method == "Page.captureScreenshot":
            return {"data": base64.b64encode(self._tile_png()).decode("ascii")}
        return {}

    def _post_navigate_events(self) -> list[dict]:
        events = []
        for oopif_session in self.oopif_documents:
            events.append(
                {
                    "method": "Target.attachedToTarget",
                    "params": {
                        "sessionId": oopif_session,
                        "targetInfo": {
                            "targetId": f"target-{oopif_session}",
                            "type": "iframe",
                        },
                        "waitingForDebugger": False,
                    },
                }
            )
        if self.emit_load_event:
            events.append(
                {
                    "method": "Page.loadEventFired",
                    "params": {"timestamp": 1000.0},
                    "sessionId": MAIN_SESSION,
                }
            )
        return events

    async def _handle(self, socket) -> None:
        try:
            async for raw in socket:
                message = json.loads(raw)
                method = message.get("method", "")
                params = message.get("params", {})
                session_id = message.get("sessionId")
                self.calls.append((method, params, session_id))
                result = self._result_for(method, params, session_id)
                if isinstance(result, dict) and "error" in result:
                    reply = {"id": message["id"], "error": result["error"]}
                else:
                    reply = {"id": message["id"], "result": result}
                events = []
                if method == "Page.navigate" and not self.navigate_error:
                    events = self._post_navigate_events()
                if self.events_before_reply:
                    for event in events:
                        await socket.send(json.dumps(event))
                    await socket.send(json.dumps(reply))
                else:
                    await socket.send(json.dumps(reply))
                    for event in events:
                        await socket.send(json.dumps(event))
        except websockets.ConnectionClosed:
            pass


async def drain(coro, timeout: float = 10.0):
    """Run one capture scenario with a global safety timeout."""
    return await asyncio.wait_for(coro, timeout)
