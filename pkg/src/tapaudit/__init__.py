"""tapaudit: predict how reliably webpage elements can be tapped on a phone.

Renders a page under smartphone emulation, finds every tappable
element, measures it in millimetres on the emulated display, and
estimates the probability that a tap lands inside it.
"""

__version__ = "0.1.0"

from .analyzer import AnalysisReport, AnalysisStageError, TappableElement, analyze
from .devices import DeviceProfile, DeviceRegistry, UnknownDeviceError, default_registry
from .geometry import PixelRect
from .model import (
    DEFAULT_COEFFICIENTS,
    ModelCoefficients,
    PhysicalSize,
    TapSuccessRate,
    erf,
    success_rate,
)
from .options import AppliedOptions, CaptureOptions, CookieRecord
from .snapshot import ElementRecord, FrameRecord, PageSnapshot, Visibility

__all__ = [
    "__version__",
    "AnalysisReport",
    "AnalysisStageError",
    "TappableElement",
    "analyze",
    "DeviceProfile",
    "DeviceRegistry",
    "UnknownDeviceError",
    "default_registry",
    "PixelRect",
    "DEFAULT_COEFFICIENTS",
    "ModelCoefficients",
    "PhysicalSize",
    "TapSuccessRate",
    "erf",
    "success_rate",
    "AppliedOptions",
    "CaptureOptions",
    "CookieRecord",
    "ElementRecord",
    "FrameRecord",
    "PageSnapshot",
    "Visibility",
]
