"""Command-line front end.

Three subcommands: ``analyze`` runs a capture (or replays a stored
snapshot offline) and writes the report and screenshot, ``devices``
lists the emulation profiles, and ``serve`` starts the HTTP API.

Exit codes: 0 success, 2 usage or input validation, 3 capture
failure, 4 analysis failure.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import logging
import sys
from pathlib import Path
from typing import Optional

from . import __version__
from .analyzer import AnalysisStageError, analyze
from .annotate import OverlayStyle, annotate_png
from .capture import DEFAULT_NAV_TIMEOUT_MS, CaptureError, capture_url
from .devices import UnknownDeviceError, default_registry
from .options import CaptureOptions, CookieRecord, CookieValidationError
from .snapshot import PageSnapshot, SnapshotFormatError
from .store import ReportStore

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CAPTURE = 3
EXIT_ANALYSIS = 4

logger = logging.getLogger(__name__)

__all__ = ["main", "EXIT_OK", "EXIT_USAGE", "EXIT_CAPTURE", "EXIT_ANALYSIS"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tapaudit",
        description="Audit how reliably a webpage's elements can be tapped on a smartphone.",
    )
    parser.add_argument("--version", action="version", version=f"tapaudit {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    analyze_cmd = commands.add_parser(
        "analyze", help="capture a URL (or replay a snapshot) and write the report"
    )
    analyze_cmd.add_argument("url", nargs="?", help="page to capture and analyze")
    analyze_cmd.add_argument(
        "--snapshot", type=Path,
        help="analyze a stored page snapshot instead of capturing a URL",
    )
    analyze_cmd.add_argument("--device", help="device profile name, e.g. 'iPhone 13'")
    analyze_cmd.add_argument(
        "--wait-ms", type=int, default=3000, metavar="MS",
        help="settle time after the load event (default 3000)",
    )
    analyze_cmd.add_argument(
        "--no-js", dest="execute_js", action="store_false",
        help="disable page script execution before navigation",
    )
    analyze_cmd.add_argument(
        "--cookie", action="append", default=[], metavar="NAME=VALUE",
        help="cookie for the target origin (repeatable); marks the run transient",
    )
    analyze_cmd.add_argument(
        "--list-success-rates", action="store_true",
        help="draw success-rate labels on the annotated screenshot",
    )
    analyze_cmd.add_argument(
        "--out", type=Path, default=Path("report.json"), metavar="PATH",
        help="where to write the report (default report.json)",
    )
    analyze_cmd.add_argument(
        "--screenshot", type=Path, metavar="PATH",
        help="where to write the annotated screenshot (default screenshot.png; URL mode only)",
    )
    analyze_cmd.add_argument(
        "--endpoint", metavar="URL",
        help="browser engine debugging endpoint (default: TAPAUDIT_BROWSER_ENDPOINT)",
    )
    analyze_cmd.add_argument(
        "--nav-timeout-ms", type=int, default=DEFAULT_NAV_TIMEOUT_MS, metavar="MS",
        help="hard cap on navigation plus load (default 30000)",
    )

    devices_cmd = commands.add_parser("devices", help="list device profiles")
    devices_cmd.add_argument("--json", action="store_true", help="machine-readable output")

    serve_cmd = commands.add_parser("serve", help="run the HTTP API")
    serve_cmd.add_argument("--host", default="127.0.0.1")
    serve_cmd.add_argument("--port", type=int, default=8000)
    serve_cmd.add_argument(
        "--storage-dir", type=Path, default=None,
        help="report directory (default: TAPAUDIT_STORAGE_DIR or ./tapaudit-reports)",
    )
    serve_cmd.add_argument(
        "--endpoint", metavar="URL",
        help="browser engine debugging endpoint (default: TAPAUDIT_BROWSER_ENDPOINT)",
    )
    serve_cmd.add_argument(
        "--pool-size", type=int, default=None,
        help="max concurrent captures (default: TAPAUDIT_POOL_SIZE or 2)",
    )
    return parser


def _parse_cookie_flags(flags: list[str]) -> tuple[CookieRecord, ...]:
    records = []
    for flag in flags:
        name, separator, value = flag.partition("=")
        if not separator:
            raise CookieValidationError(f"--cookie needs NAME=VALUE, got {flag!r}")
        records.append(CookieRecord(name=name, value=value))
    return tuple(records)


def _write_report(report, path: Path) -> None:
    path.write_text(json.dumps(report.to_json_dict(), indent=2, sort_keys=True) + "\n", "utf-8")


def _cmd_analyze(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    if bool(args.url) == bool(args.snapshot):
        parser.error("analyze needs exactly one of a URL or --snapshot")
    if not args.device:
        parser.error("--device is required")
    registry = default_registry()
    try:
        profile = registry.get(args.device)
    except UnknownDeviceError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_USAGE

    if args.snapshot:
        if args.screenshot:
            parser.error("--screenshot needs a live capture; not available with --snapshot")
        if args.cookie:
            parser.error("--cookie needs a live capture; not available with --snapshot")
        try:
            snapshot = PageSnapshot.load_file(args.snapshot)
        except FileNotFoundError:
            print(f"error: snapshot file not found: {args.snapshot}", file=sys.stderr)
            return EXIT_USAGE
        except SnapshotFormatError as exc:
            print(f"error: invalid snapshot: {exc}", file=sys.stderr)
            return EXIT_USAGE
        try:
            report = analyze(snapshot, profile)
        except AnalysisStageError as exc:
            print(f"error: analysis failed at {exc.stage}: {exc}", file=sys.stderr)
            return EXIT_ANALYSIS
        _write_report(report, args.out)
        print(f"{len(report.elements)} tappable elements; report written to {args.out}")
        return EXIT_OK

    try:
        options = CaptureOptions(
            device=args.device,
            waiting_time_ms=args.wait_ms,
            execute_js=args.execute_js,
            cookies=_parse_cookie_flags(args.cookie),
            list_success_rates=args.list_success_rates,
        )
    except (CookieValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        result = asyncio.run(capture_url(
            args.url, profile, options,
            endpoint=args.endpoint, nav_timeout_ms=args.nav_timeout_ms,
        ))
    except CaptureError as exc:
        print(f"error: capture failed at {exc.stage}: {exc}", file=sys.stderr)
        return EXIT_CAPTURE
    try:
        report = analyze(result.snapshot, profile)
        annotated = annotate_png(
            result.screenshot_png, report,
            OverlayStyle(label_enabled=options.list_success_rates),
        )
    except AnalysisStageError as exc:
        print(f"error: analysis failed at {exc.stage}: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS
    screenshot_path = args.screenshot or Path("screenshot.png")
    _write_report(report, args.out)
    screenshot_path.write_bytes(annotated)
    if result.transient:
        print("cookies were supplied; nothing was stored beyond the requested files")
    print(
        f"{len(report.elements)} tappable elements; "
        f"report written to {args.out}, screenshot to {screenshot_path}"
    )
    return EXIT_OK


def _cmd_devices(args: argparse.Namespace) -> int:
    profiles = default_registry().list_profiles()
    if args.json:
        print(json.dumps([profile.to_json_dict() for profile in profiles], indent=2))
        return EXIT_OK
    width = max(len(profile.name) for profile in profiles)
    print(f"{'name':<{width}}  viewport     dpr  ppi")
    for profile in profiles:
        viewport = "x".join(str(extent) for extent in profile.viewport_css_px)
        print(f"{profile.name:<{width}}  {viewport:<11}  {profile.device_pixel_ratio:<3g}  {profile.ppi:g}")
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    import os

    import uvicorn

    from .service import create_app

    storage_dir = args.storage_dir or Path(
        os.environ.get("TAPAUDIT_STORAGE_DIR", "tapaudit-reports")
    )
    pool_size = args.pool_size or int(os.environ.get("TAPAUDIT_POOL_SIZE", "2"))
    app = create_app(
        store=ReportStore(storage_dir),
        engine_endpoint=args.endpoint,
        pool_size=pool_size,
    )
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def main(argv: Optional[list[str]] = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "analyze":
        return _cmd_analyze(args, parser)
    if args.command == "devices":
        return _cmd_devices(args)
    return _cmd_serve(args)


if __name__ == "__main__":
    sys.exit(main())
