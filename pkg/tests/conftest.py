"""Shared fixtures and the acceptance-criteria summary.

Every test in test_acceptance.py carries a one-line criterion label;
after the run a summary section prints one pass/fail line per
criterion so the acceptance gate is readable at a glance.
"""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from tapaudit.devices import default_registry
from tapaudit.geometry import PixelRect
from tapaudit.options import AppliedOptions
from tapaudit.snapshot import ElementRecord, FrameRecord, PageSnapshot, Visibility

FIXTURES = Path(__file__).parent / "fixtures"

_acceptance_labels: dict[str, str] = {}
_acceptance_results: dict[str, str] = {}


@pytest.fixture(scope="session")
def registry():
    return default_registry()


@pytest.fixture(scope="session")
def iphone13(registry):
    return registry.get("iPhone 13")


@pytest.fixture(scope="session")
def erf_oracle():
    """Frozen high-precision erf values, as (z, expected) float pairs."""
    data = json.loads((FIXTURES / "erf_oracle.json").read_text("utf-8"))
    return [(float(point["z"]), float(point["erf"])) for point in data["points"]]


def load_snapshot_fixture(name: str) -> PageSnapshot:
    return PageSnapshot.load_file(FIXTURES / "snapshots" / f"{name}.json")


def load_golden(name: str) -> dict:
    return json.loads((FIXTURES / "goldens" / f"{name}.json").read_text("utf-8"))


def make_element(
    node_path: str,
    tag: str,
    rect: PixelRect,
    paint_order: int,
    attributes: dict | None = None,
    listener_events: frozenset | set | None = None,
    visibility: Visibility | None = None,
) -> ElementRecord:
    return ElementRecord(
        node_path=node_path,
        tag=tag,
        attributes=attributes or {},
        listener_events=frozenset(listener_events or ()),
        rect=rect,
        visibility=visibility or Visibility(),
        paint_order=paint_order,
    )


def make_snapshot(
    elements=(),
    children=(),
    page_size=(390.0, 844.0),
    device: str = "iPhone 13",
    url: str = "https://fixture.test/",
    warnings=(),
) -> PageSnapshot:
    return PageSnapshot(
        url=url,
        page_size_css_px=page_size,
        capture_options=AppliedOptions(device=device),
        frame=FrameRecord(
            frame_id="ROOT",
            origin="https://fixture.test",
            offset=PixelRect(0.0, 0.0, page_size[0], page_size[1]),
            elements=tuple(elements),
            children=tuple(children),
        ),
        warnings=tuple(warnings),
    )


def pytest_collection_modifyitems(items):
    for item in items:
        if "test_acceptance.py" not in str(item.fspath):
            continue
        doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
        _acceptance_labels[item.nodeid] = doc


def pytest_runtest_logreport(report):
    if report.nodeid not in _acceptance_labels:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _acceptance_results[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid in sorted(_acceptance_results):
        outcome = _acceptance_results[nodeid].upper()
        terminalreporter.write_line(f"[{outcome:^7}] {_acceptance_labels[nodeid]}")
