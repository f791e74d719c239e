"""Capture run options and cookie records.

Two shapes live here.  :class:`CaptureOptions` is the runtime object a
capture job consumes; it may hold actual cookie values.  Snapshots and
reports must never contain those values, so they carry
:class:`AppliedOptions` instead, which records only whether cookies
were supplied.  The split makes leaking a cookie through serialization
a type error rather than a code-review finding.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

__all__ = [
    "CookieValidationError",
    "CookieRecord",
    "AppliedOptions",
    "CaptureOptions",
]

DEFAULT_WAITING_TIME_MS = 3000


class CookieValidationError(ValueError):
    """Raised when a cookie record is malformed."""


@dataclass(frozen=True)
class CookieRecord:
    """One cookie to install before navigation.

    When ``domain`` is empty the cookie is scoped to the capture URL's
    origin at injection time.
    """

    name: str
    value: str
    domain: str = ""
    path: str = "/"
    secure: bool = False
    http_only: bool = False

    def __post_init__(self) -> None:
        if not self.name or not self.name.strip():
            raise CookieValidationError("cookie name must be non-empty")
        for ch in self.name:
            if ch.isspace() or ch in ';,=':
                raise CookieValidationError(
                    f"cookie name contains forbidden character {ch!r}"
                )
        if not self.path.startswith("/"):
            raise CookieValidationError(f"cookie path must start with '/', got {self.path!r}")


@dataclass(frozen=True)
class AppliedOptions:
    """The option set a capture ran with, safe to serialize.

    ``cookies_supplied`` replaces the cookie payload; values stay in
    memory with the session that used them.
    """

    device: str
    waiting_time_ms: int = DEFAULT_WAITING_TIME_MS
    execute_js: bool = True
    cookies_supplied: bool = False
    list_success_rates: bool = False

    def __post_init__(self) -> None:
        if not self.device:
            raise ValueError("device name must be non-empty")
        if not isinstance(self.waiting_time_ms, int) or isinstance(self.waiting_time_ms, bool):
            raise ValueError(f"waiting_time_ms must be an integer, got {self.waiting_time_ms!r}")
        if self.waiting_time_ms < 0:
            raise ValueError(f"waiting_time_ms must be >= 0, got {self.waiting_time_ms}")
        for flag in ("execute_js", "cookies_supplied", "list_success_rates"):
            if not isinstance(getattr(self, flag), bool):
                raise ValueError(f"{flag} must be a bool")

    def to_json_dict(self) -> dict:
        return {
            "device": self.device,
            "waiting_time_ms": self.waiting_time_ms,
            "execute_js": self.execute_js,
            "cookies_supplied": self.cookies_supplied,
            "list_success_rates": self.list_success_rates,
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "AppliedOptions":
        try:
            return cls(
                device=data["device"],
                waiting_time_ms=data["waiting_time_ms"],
                execute_js=data["execute_js"],
                cookies_supplied=data["cookies_supplied"],
                list_success_rates=data["list_success_rates"],
            )
        except KeyError as exc:
            raise ValueError(f"options missing key {exc.args[0]!r}") from exc


@dataclass(frozen=True)
class CaptureOptions:
    """Options controlling one capture job.

    Defaults: wait 3000 ms after the load event, run page scripts,
    no cookies, no success-rate labels.
    """

    device: str
    waiting_time_ms: int = DEFAULT_WAITING_TIME_MS
    execute_js: bool = True
    cookies: tuple[CookieRecord, ...] = ()
    list_success_rates: bool = False

    def __post_init__(self) -> None:
        # Reuse AppliedOptions validation for the shared fields.
        self.applied()
        for cookie in self.cookies:
            if not isinstance(cookie, CookieRecord):
                raise CookieValidationError(f"expected CookieRecord, got {type(cookie).__name__}")

    @property
    def cookies_supplied(self) -> bool:
        return len(self.cookies) > 0

    def applied(self) -> AppliedOptions:
        """The serializable form: cookie values stripped, flag kept."""
        return AppliedOptions(
            device=self.device,
            waiting_time_ms=self.waiting_time_ms,
            execute_js=self.execute_js,
            cookies_supplied=self.cookies_supplied,
            list_success_rates=self.list_success_rates,
        )
