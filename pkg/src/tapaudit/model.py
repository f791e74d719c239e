"""Dual-Gaussian tap success-rate model.

Tap endpoints on a touchscreen scatter around the target center following
independent per-axis normal distributions whose variance grows linearly with
the squared target size (the dual Gaussian distribution model).  The success
rate of a tap is the probability that the endpoint lands inside the target
rectangle:

    SR = erf(W / (2 * sqrt(2) * sd_x)) * erf(H / (2 * sqrt(2) * sd_y))

with sd_axis = sqrt(a * size^2 + b) and W, H the target extents in mm.  The
default coefficients were fitted on crowdsourced smartphone tap data.
"""
from __future__ import annotations

import math
import struct
from dataclasses import dataclass

__all__ = [
    "ModelCoefficients",
    "PhysicalSize",
    "TapSuccessRate",
    "DEFAULT_COEFFICIENTS",
    "erf",
    "endpoint_stddev",
    "axis_success_rate",
    "success_rate",
]

_TWO_ROOT_TWO = 2.0 * math.sqrt(2.0)


@dataclass(frozen=True)
class ModelCoefficients:
    """Per-axis variance-law coefficients: variance = a * size_mm^2 + b.

    `a` is dimensionless, `b` is mm^2.  Defaults are the crowdsourced-fit
    values for index-finger taps on smartphones.
    """

    a_x: float = 0.007101
    b_x: float = 1.412
    a_y: float = 0.01181
    b_y: float = 1.365

    def __post_init__(self) -> None:
        for name in ("a_x", "b_x", "a_y", "b_y"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"ModelCoefficients.{name} must be finite and > 0, got {value!r}")

    def to_json_dict(self) -> dict:
        return {"a_x": self.a_x, "b_x": self.b_x, "a_y": self.a_y, "b_y": self.b_y}

    @classmethod
    def from_json_dict(cls, data: dict) -> "ModelCoefficients":
        try:
            return cls(
                float(data["a_x"]),
                float(data["b_x"]),
                float(data["a_y"]),
                float(data["b_y"]),
            )
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed coefficients object: {data!r}") from exc


DEFAULT_COEFFICIENTS = ModelCoefficients()


@dataclass(frozen=True)
class PhysicalSize:
    """Target extent in millimetres (full bounding-rect width and height)."""

    width_mm: float
    height_mm: float

    def __post_init__(self) -> None:
        for name in ("width_mm", "height_mm"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"PhysicalSize.{name} must be finite, got {value!r}")
            if value < 0:
                raise ValueError(f"PhysicalSize.{name} must be >= 0, got {value!r}")


@dataclass(frozen=True)
class TapSuccessRate:
    """Probability in [0, 1] that a tap lands inside the target rectangle."""

    value: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.value <= 1.0):
            raise ValueError(f"TapSuccessRate.value must be in [0, 1], got {self.value!r}")

    def __float__(self) -> float:
        return self.value


# --- Gauss error function -------------------------------------------------
#
# Piecewise rational approximation after FreeBSD libm's s_erf.c (SunPro,
# Sun Microsystems, 1993; freely redistributable).  Max error is a couple of
# ulps, far inside the 1e-10 budget the rest of the model requires.  Domains:
#
#   [0, 2^-28)        erf(x) ~ x + efx*x                 (first series term)
#   [2^-28, 0.84375)  erf(x) = x + x*P(x^2)/Q(x^2)
#   [0.84375, 1.25)   erf(x) = erx + Pa(s)/Qa(s),        s = x - 1
#   [1.25, 6)         erf(x) = 1 - erfc(x),  erfc via exp(-x^2-0.5625+R/S)/x
#   [6, inf)          erf(x) = 1              (erfc < 2.2e-17 < half an ulp)
#
# Sign symmetry erf(-x) = -erf(x) is applied last, so it is exact.

_ERX = 8.45062911510467529297e-01
_EFX = 1.28379167095512586316e-01
_EFX8 = 1.02703333676410069053e+00

_PP = (
    1.28379167095512558561e-01,
    -3.25042107247001499370e-01,
    -2.84817495755985104766e-02,
    -5.77027029648944159157e-03,
    -2.37630166566501626084e-05,
)
_QQ = (
    3.97917223959155352819e-01,
    6.50222499887672944485e-02,
    5.08130628187576562776e-03,
    1.32494738004321644526e-04,
    -3.96022827877536812320e-06,
)
_PA = (
    -2.36211856075265944077e-03,
    4.14856118683748331666e-01,
    -3.72207876035701323847e-01,
    3.18346619901161753674e-01,
    -1.10894694282396677476e-01,
    3.54783043256182359371e-02,
    -2.16637559486879084300e-03,
)
_QA = (
    1.06420880400844228286e-01,
    5.40397917702171048937e-01,
    7.18286544141962662868e-02,
    1.26171219808761642112e-01,
    1.36370839120290507362e-02,
    1.19844998467991074170e-02,
)
_RA = (
    -9.86494403484714822705e-03,
    -6.93858572707181764372e-01,
    -1.05586262253232909814e01,
    -6.23753324503260060396e01,
    -1.62396669462573470355e02,
    -1.84605092906711035994e02,
    -8.12874355063065934246e01,
    -9.81432934416914548592e00,
)
_SA = (
    1.96512716674392571292e01,
    1.37657754143519042600e02,
    4.34565877475229228821e02,
    6.45387271733267880336e02,
    4.29008140027567833386e02,
    1.08635005541779435134e02,
    6.57024977031928170135e00,
    -6.04244152148580987438e-02,
)
_RB = (
    -9.86494292470009928597e-03,
    -7.99283237680523006574e-01,
    -1.77579549177547519889e01,
    -1.60636384855821916062e02,
    -6.37566443368389627722e02,
    -1.02509513161107724954e03,
    -4.83519191608651397019e02,
)
_SB = (
    3.03380607434824582924e01,
    3.25792512996573918826e02,
    1.53672958608443695994e03,
    3.19985821950859553908e03,
    2.55305040643316442583e03,
    4.74528541206955367215e02,
    -2.24409524465858183362e01,
)

_TINY_CUTOFF = 2.0 ** -28
_SUBNORMAL_GUARD = 8.0 * 2.2250738585072014e-308  # 8 * DBL_MIN


def _poly(coeffs: tuple, x: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _drop_low_word(x: float) -> float:
    """x with the low 32 mantissa bits cleared (the libm accuracy trick)."""
    bits = struct.unpack("<Q", struct.pack("<d", x))[0]
    return struct.unpack("<d", struct.pack("<Q", bits & 0xFFFFFFFF00000000))[0]


def erf(z: float) -> float:
    """Gauss error function, (2/sqrt(pi)) * integral of exp(-t^2) from 0 to z.

    Accurate to well under 1e-10 absolute over the whole real line; exactly
    odd (erf(-z) == -erf(z)).  Raises ValueError for non-finite input.
    """
    z = float(z)
    if not math.isfinite(z):
        raise ValueError(f"erf requires a finite argument, got {z!r}")
    ax = abs(z)

    if ax < 0.84375:
        if ax < _TINY_CUTOFF:
            if ax < _SUBNORMAL_GUARD:
                return 0.125 * (8.0 * z + _EFX8 * z)
            return z + _EFX * z
        s = z * z
        y = _poly(_PP, s) / (1.0 + s * _poly(_QQ, s))
        return z + z * y

    if ax < 1.25:
        s = ax - 1.0
        p = _poly(_PA, s)
        q = 1.0 + s * _poly(_QA, s)
        return math.copysign(_ERX + p / q, z)

    if ax >= 6.0:
        return math.copysign(1.0, z)

    s = 1.0 / (ax * ax)
    if ax < 1.0 / 0.35:
        big_r = _poly(_RA, s)
        big_s = 1.0 + s * _poly(_SA, s)
    else:
        big_r = _poly(_RB, s)
        big_s = 1.0 + s * _poly(_SB, s)
    trunc = _drop_low_word(ax)
    r = math.exp(-trunc * trunc - 0.5625) * math.exp((trunc - ax) * (trunc + ax) + big_r / big_s)
    return math.copysign(1.0 - r / ax, z)


# --- Model ----------------------------------------------------------------


def endpoint_stddev(size_mm: float, a: float, b: float) -> float:
    """Standard deviation of the tap-endpoint distribution along one axis.

    Returns sqrt(a * size_mm^2 + b); always >= sqrt(b).
    """
    if not math.isfinite(size_mm):
        raise ValueError(f"size_mm must be finite, got {size_mm!r}")
    if size_mm < 0:
        raise ValueError(f"size_mm must be >= 0, got {size_mm!r}")
    return math.sqrt(a * size_mm * size_mm + b)


def axis_success_rate(size_mm: float, a: float, b: float) -> float:
    """Single-axis success factor erf(size / (2*sqrt(2)*sd))."""
    if not math.isfinite(size_mm):
        raise ValueError(f"size_mm must be finite, got {size_mm!r}")
    if size_mm < 0:
        raise ValueError(f"size_mm must be >= 0, got {size_mm!r}")
    if size_mm == 0.0:
        return 0.0
    if size_mm < 1.0:
        arg = size_mm / (_TWO_ROOT_TWO * endpoint_stddev(size_mm, a, b))
    else:
        # Algebraically identical; avoids overflow of size^2 for huge extents.
        arg = 1.0 / (_TWO_ROOT_TWO * math.sqrt(a + b / (size_mm * size_mm)))
    return erf(arg)


def success_rate(size: PhysicalSize, coeffs: ModelCoefficients = DEFAULT_COEFFICIENTS) -> TapSuccessRate:
    """Probability that a tap aimed at the rect center lands inside the rect.

    Separable by construction: the returned value is exactly the product of
    the two single-axis factors.
    """
    fx = axis_success_rate(size.width_mm, coeffs.a_x, coeffs.b_x)
    fy = axis_success_rate(size.height_mm, coeffs.a_y, coeffs.b_y)
    return TapSuccessRate(fx * fy)
