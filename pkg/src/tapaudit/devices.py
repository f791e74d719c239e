"""Smartphone display profiles and pixel-to-millimetre conversion.

A tap-accuracy prediction needs physical target sizes, but a rendering
engine reports geometry in CSS pixels.  The bridge between the two is
per-device: the device pixel ratio maps CSS pixels to native display
pixels and the panel density (pixels per inch) maps those to distance.
This module ships a registry of smartphone profiles with the numbers
needed for that conversion plus the metadata needed to emulate the
device during capture (viewport size, user-agent string).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, Mapping

MM_PER_INCH = 25.4

__all__ = [
    "MM_PER_INCH",
    "DeviceDataError",
    "UnknownDeviceError",
    "DeviceProfile",
    "DeviceRegistry",
    "default_registry",
]


class DeviceDataError(ValueError):
    """Raised when a device catalog fails validation at load time."""


class UnknownDeviceError(KeyError):
    """Raised when a device name is not present in the registry."""

    def __init__(self, name: str, available: Iterable[str]):
        self.name = name
        self.available = sorted(available)
        super().__init__(
            f"unknown device {name!r}; available: {', '.join(self.available)}"
        )


@dataclass(frozen=True)
class DeviceProfile:
    """Display and emulation parameters for one smartphone model.

    ``viewport_css_px`` is the layout viewport in CSS pixels,
    ``device_pixel_ratio`` the CSS-to-native pixel scale, and ``ppi``
    the physical pixel density of the panel.
    """

    name: str
    viewport_css_px: tuple[int, int]
    device_pixel_ratio: float
    ppi: float
    user_agent: str

    def __post_init__(self) -> None:
        if not self.name:
            raise DeviceDataError("device name must be non-empty")
        width, height = self.viewport_css_px
        if not (isinstance(width, int) and isinstance(height, int)):
            raise DeviceDataError(f"{self.name}: viewport must be integer CSS px")
        if width <= 0 or height <= 0:
            raise DeviceDataError(f"{self.name}: viewport must be positive")
        for field in ("device_pixel_ratio", "ppi"):
            value = getattr(self, field)
            if not (isinstance(value, (int, float)) and math.isfinite(value)):
                raise DeviceDataError(f"{self.name}: {field} must be finite")
            if value <= 0:
                raise DeviceDataError(f"{self.name}: {field} must be positive")
        if not self.user_agent:
            raise DeviceDataError(f"{self.name}: user_agent must be non-empty")

    def css_px_to_mm(self, extent_css_px: float) -> float:
        """Convert a CSS-pixel extent to millimetres on this display.

        CSS pixels scale to native pixels by the device pixel ratio,
        native pixels to inches by the panel density, inches to
        millimetres by definition.
        """
        if not math.isfinite(extent_css_px) or extent_css_px < 0:
            raise ValueError(f"extent must be finite and >= 0, got {extent_css_px!r}")
        return extent_css_px * self.device_pixel_ratio / self.ppi * MM_PER_INCH

    def mm_to_css_px(self, extent_mm: float) -> float:
        """Inverse of :meth:`css_px_to_mm`."""
        if not math.isfinite(extent_mm) or extent_mm < 0:
            raise ValueError(f"extent must be finite and >= 0, got {extent_mm!r}")
        return extent_mm * self.ppi / (self.device_pixel_ratio * MM_PER_INCH)

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "viewport_css_px": list(self.viewport_css_px),
            "device_pixel_ratio": self.device_pixel_ratio,
            "ppi": self.ppi,
            "user_agent": self.user_agent,
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "DeviceProfile":
        try:
            viewport = data["viewport_css_px"]
            if not (isinstance(viewport, (list, tuple)) and len(viewport) == 2):
                raise DeviceDataError(
                    f"viewport_css_px must be a [width, height] pair, got {viewport!r}"
                )
            return cls(
                name=data["name"],
                viewport_css_px=(viewport[0], viewport[1]),
                device_pixel_ratio=data["device_pixel_ratio"],
                ppi=data["ppi"],
                user_agent=data["user_agent"],
            )
        except KeyError as exc:
            raise DeviceDataError(f"device entry missing key {exc.args[0]!r}") from exc


class DeviceRegistry:
    """Validated, name-keyed collection of device profiles."""

    def __init__(self, profiles: Iterable[DeviceProfile]):
        self._profiles: dict[str, DeviceProfile] = {}
        for profile in profiles:
            if profile.name in self._profiles:
                raise DeviceDataError(f"duplicate device name {profile.name!r}")
            self._profiles[profile.name] = profile
        if not self._profiles:
            raise DeviceDataError("device registry must contain at least one profile")

    def get(self, name: str) -> DeviceProfile:
        try:
            return self._profiles[name]
        except KeyError:
            raise UnknownDeviceError(name, self._profiles) from None

    def __contains__(self, name: str) -> bool:
        return name in self._profiles

    def __len__(self) -> int:
        return len(self._profiles)

    def list_profiles(self) -> list[DeviceProfile]:
        """All profiles, sorted by name for stable presentation."""
        return [self._profiles[name] for name in sorted(self._profiles)]

    def names(self) -> list[str]:
        return sorted(self._profiles)

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "DeviceRegistry":
        if data.get("schema_version") != 1:
            raise DeviceDataError(
                f"unsupported device catalog schema_version {data.get('schema_version')!r}"
            )
        entries = data.get("devices")
        if not isinstance(entries, list):
            raise DeviceDataError("device catalog must contain a 'devices' list")
        return cls(DeviceProfile.from_json_dict(entry) for entry in entries)


def default_registry() -> DeviceRegistry:
    """Load the registry bundled with the package."""
    text = resources.files("tapaudit.data").joinpath("devices.json").read_text("utf-8")
    return DeviceRegistry.from_json_dict(json.loads(text))
