"""HTTP API tying capture, analysis, annotation, and storage together.

The app is built by :func:`create_app` with its collaborators passed
in, so tests can swap the capture runner for a fake and the report
store for an instrumented one.  Endpoints:

    POST /api/analyze                      run a capture, returns {report_id}
    GET  /api/reports/{id}                 the analysis report
    GET  /api/reports/{id}/screenshot.png  annotated screenshot
    GET  /api/reports/{id}/raw.png         unannotated screenshot
    GET  /api/devices                      available device profiles

Reports from cookie-bearing requests are transient: in-memory only,
expiring after the store's TTL.
"""

from __future__ import annotations

import asyncio
from typing import Awaitable, Callable, Optional
from urllib.parse import urlsplit

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel, Field

from .analyzer import AnalysisStageError, analyze
from .annotate import OverlayStyle, annotate_png
from .capture import CaptureError, CaptureResult, LoadTimeoutError, capture_url
from .devices import DeviceProfile, DeviceRegistry, UnknownDeviceError, default_registry
from .model import DEFAULT_COEFFICIENTS, ModelCoefficients
from .options import CaptureOptions, CookieRecord, CookieValidationError
from .store import InvalidReportIdError, ReportStore, UnknownReportError

ALLOWED_URL_SCHEMES = ("http", "https", "file")

CaptureRunner = Callable[[str, DeviceProfile, CaptureOptions], Awaitable[CaptureResult]]

__all__ = ["ALLOWED_URL_SCHEMES", "CaptureRunner", "create_app"]


class CookieModel(BaseModel):
    name: str
    value: str
    domain: str = ""
    path: str = "/"
    secure: bool = False
    http_only: bool = False


class AnalyzeRequestModel(BaseModel):
    url: str
    device: str
    waiting_time_ms: int = Field(default=3000, ge=0)
    execute_js: bool = True
    cookies: Optional[list[CookieModel]] = None
    list_success_rates: bool = False


def _validate_url(url: str) -> Optional[str]:
    parts = urlsplit(url)
    if parts.scheme not in ALLOWED_URL_SCHEMES:
        return f"url scheme must be one of {', '.join(ALLOWED_URL_SCHEMES)}"
    if parts.scheme in ("http", "https") and not parts.netloc:
        return "url has no host"
    return None


def create_app(
    registry: Optional[DeviceRegistry] = None,
    store: Optional[ReportStore] = None,
    capture_runner: Optional[CaptureRunner] = None,
    coefficients: ModelCoefficients = DEFAULT_COEFFICIENTS,
    engine_endpoint: Optional[str] = None,
    pool_size: int = 2,
) -> FastAPI:
    """Build the service with explicit collaborators.

    ``capture_runner`` defaults to a real browser capture against
    ``engine_endpoint`` (or the endpoint environment variable);
    ``pool_size`` bounds concurrent captures.
    """
    registry = registry or default_registry()
    store = store or ReportStore("tapaudit-reports")
    if capture_runner is None:
        async def capture_runner(url: str, profile: DeviceProfile, options: CaptureOptions):
            return await capture_url(url, profile, options, endpoint=engine_endpoint)

    app = FastAPI(title="tapaudit", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"],
    )
    app.state.registry = registry
    app.state.store = store
    capture_pool = asyncio.Semaphore(max(pool_size, 1))

    @app.exception_handler(RequestValidationError)
    async def handle_invalid_request(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    @app.exception_handler(UnknownDeviceError)
    async def handle_unknown_device(request: Request, exc: UnknownDeviceError):
        return JSONResponse(
            status_code=404,
            content={"detail": f"unknown device {exc.name!r}", "available": exc.available},
        )

    @app.exception_handler(InvalidReportIdError)
    async def handle_invalid_id(request: Request, exc: InvalidReportIdError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.exception_handler(UnknownReportError)
    async def handle_unknown_report(request: Request, exc: UnknownReportError):
        return JSONResponse(status_code=404, content={"detail": "no such report"})

    @app.exception_handler(LoadTimeoutError)
    async def handle_load_timeout(request: Request, exc: LoadTimeoutError):
        return JSONResponse(
            status_code=504, content={"detail": str(exc), "stage": exc.stage}
        )

    @app.exception_handler(CaptureError)
    async def handle_capture_error(request: Request, exc: CaptureError):
        return JSONResponse(
            status_code=502, content={"detail": str(exc), "stage": exc.stage}
        )

    @app.exception_handler(AnalysisStageError)
    async def handle_analysis_error(request: Request, exc: AnalysisStageError):
        return JSONResponse(
            status_code=500, content={"detail": str(exc), "stage": exc.stage}
        )

    @app.post("/api/analyze")
    async def analyze_url(request: AnalyzeRequestModel):
        problem = _validate_url(request.url)
        if problem:
            return JSONResponse(status_code=400, content={"detail": problem})
        profile = registry.get(request.device)
        try:
            cookies = tuple(
                CookieRecord(
                    name=cookie.name,
                    value=cookie.value,
                    domain=cookie.domain,
                    path=cookie.path,
                    secure=cookie.secure,
                    http_only=cookie.http_only,
                )
                for cookie in (request.cookies or [])
            )
            options = CaptureOptions(
                device=request.device,
                waiting_time_ms=request.waiting_time_ms,
                execute_js=request.execute_js,
                cookies=cookies,
                list_success_rates=request.list_success_rates,
            )
        except (CookieValidationError, ValueError) as exc:
            return JSONResponse(status_code=400, content={"detail": str(exc)})

        async with capture_pool:
            result = await capture_runner(request.url, profile, options)
        report = analyze(result.snapshot, profile, coefficients)
        annotated = annotate_png(
            result.screenshot_png,
            report,
            OverlayStyle(label_enabled=options.list_success_rates),
        )
        report_id = store.put(
            report,
            raw_png=result.screenshot_png,
            annotated_png=annotated,
            transient=result.transient or options.cookies_supplied,
        )
        return {"report_id": report_id}

    @app.get("/api/reports/{report_id}")
    async def get_report(report_id: str):
        stored = store.get(report_id)
        document = stored.report.to_json_dict()
        document["report_id"] = stored.report_id
        document["created_at"] = stored.created_at
        document["transient"] = stored.transient
        return document

    @app.get("/api/reports/{report_id}/screenshot.png")
    async def get_screenshot(report_id: str):
        stored = store.get(report_id)
        return Response(content=stored.annotated_png, media_type="image/png")

    @app.get("/api/reports/{report_id}/raw.png")
    async def get_raw_screenshot(report_id: str):
        stored = store.get(report_id)
        return Response(content=stored.raw_png, media_type="image/png")

    @app.get("/api/devices")
    async def get_devices():
        return [profile.to_json_dict() for profile in registry.list_profiles()]

    return app
