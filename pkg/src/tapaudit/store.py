"""Report persistence.

Reports normally land on disk under a per-report directory keyed by a
random 128-bit id.  Reports produced from cookie-bearing captures are
transient: they live only in this process's memory and expire after a
TTL, and by construction nothing of them ever reaches the write path.
Every durable byte flows through a single method so tests can
instrument the store and prove that guarantee.
"""

from __future__ import annotations

import json
import os
import re
import secrets
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

from .analyzer import AnalysisReport

REPORT_ID_PATTERN = re.compile(r"^[0-9a-f]{32}$")
DEFAULT_TRANSIENT_TTL_SECONDS = 900.0

__all__ = [
    "REPORT_ID_PATTERN",
    "DEFAULT_TRANSIENT_TTL_SECONDS",
    "InvalidReportIdError",
    "UnknownReportError",
    "StoredReport",
    "ReportStore",
]


class InvalidReportIdError(ValueError):
    """The id is not a well-formed report identifier."""


class UnknownReportError(KeyError):
    """No live report exists under the id."""


@dataclass(frozen=True)
class StoredReport:
    """A report plus its screenshots as retrieved from the store."""

    report_id: str
    created_at: float
    report: AnalysisReport
    raw_png: bytes
    annotated_png: bytes
    transient: bool


def new_report_id() -> str:
    return secrets.token_hex(16)


def _validate_id(report_id: str) -> str:
    if not isinstance(report_id, str) or not REPORT_ID_PATTERN.fullmatch(report_id):
        raise InvalidReportIdError(f"malformed report id {report_id!r}")
    return report_id


class ReportStore:
    """Durable disk store with an in-memory transient tier.

    ``root_dir`` is created on first durable write.  ``clock`` is
    injectable for TTL tests.
    """

    def __init__(
        self,
        root_dir: Path | str,
        transient_ttl_seconds: float = DEFAULT_TRANSIENT_TTL_SECONDS,
        clock: Callable[[], float] = time.time,
    ):
        self._root = Path(root_dir)
        self._ttl = float(transient_ttl_seconds)
        self._clock = clock
        self._lock = threading.Lock()
        self._transient: dict[str, StoredReport] = {}

    # The only route to durable storage; tests monkeypatch or wrap this
    # to assert that transient (cookie-bearing) puts write zero bytes.
    def _write_bytes(self, path: Path, payload: bytes) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_bytes(payload)
        os.replace(tmp, path)

    def put(
        self,
        report: AnalysisReport,
        raw_png: bytes,
        annotated_png: bytes,
        transient: bool,
        report_id: Optional[str] = None,
    ) -> str:
        if report_id is None:
            report_id = new_report_id()
        report_id = _validate_id(report_id)
        stored = StoredReport(
            report_id=report_id,
            created_at=self._clock(),
            report=report,
            raw_png=raw_png,
            annotated_png=annotated_png,
            transient=transient,
        )
        if transient:
            with self._lock:
                self._transient[report_id] = stored
            return report_id
        directory = self._root / report_id
        document = {
            "report_id": report_id,
            "created_at": stored.created_at,
            "report": report.to_json_dict(),
        }
        with self._lock:
            self._write_bytes(
                directory / "report.json",
                json.dumps(document, indent=2, sort_keys=True).encode("utf-8"),
            )
            self._write_bytes(directory / "raw.png", raw_png)
            self._write_bytes(directory / "screenshot.png", annotated_png)
        return report_id

    def _purge_expired_locked(self) -> None:
        deadline = self._clock() - self._ttl
        expired = [
            report_id for report_id, stored in self._transient.items()
            if stored.created_at <= deadline
        ]
        for report_id in expired:
            del self._transient[report_id]

    def purge_expired(self) -> None:
        with self._lock:
            self._purge_expired_locked()

    def get(self, report_id: str) -> StoredReport:
        report_id = _validate_id(report_id)
        with self._lock:
            self._purge_expired_locked()
            if report_id in self._transient:
                return self._transient[report_id]
        directory = self._root / report_id
        try:
            document = json.loads((directory / "report.json").read_text("utf-8"))
            raw_png = (directory / "raw.png").read_bytes()
            annotated_png = (directory / "screenshot.png").read_bytes()
        except FileNotFoundError:
            raise UnknownReportError(report_id) from None
        return StoredReport(
            report_id=report_id,
            created_at=document["created_at"],
            report=AnalysisReport.from_json_dict(document["report"]),
            raw_png=raw_png,
            annotated_png=annotated_png,
            transient=False,
        )

    def __contains__(self, report_id: str) -> bool:
        try:
            self.get(report_id)
            return True
        except (InvalidReportIdError, UnknownReportError):
            return False
