"""Color ramps: per-year identity colors and darker-is-higher value scales."""

import colorsys
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

from .errors import LayoutError

RGB = tuple[float, float, float]

# Fixed identity palette for shared-space scenes: blue, orange, green, purple
# (assigned to study years in chronological order, cycling past four).
IDENTITY_PALETTE: tuple[RGB, ...] = (
    (0.122, 0.467, 0.706),   # blue
    (1.000, 0.498, 0.055),   # orange
    (0.173, 0.627, 0.173),   # green
    (0.580, 0.404, 0.741),   # purple
)

DEFAULT_VALUE_HUE = 210.0 / 360.0  # steel blue
_LIGHTNESS_LO_VALUE = 0.93   # lightness at v_min (lightest)
_LIGHTNESS_HI_VALUE = 0.25   # lightness at v_max (darkest)
_SATURATION = 0.60


@dataclass(frozen=True)
class ColorRamp:
    """Color mapping config.

    mode "year_identity": base_hue is a year_label -> RGB mapping.
    mode "value_scale": base_hue is a single hue in [0, 1); colors run from
    light at v_min to dark at v_max (darker means higher value).
    """

    mode: str
    base_hue: Mapping[str, RGB] | float
    v_min: float = 0.0
    v_max: float = 1.0

    def __post_init__(self):
        if self.mode not in ("year_identity", "value_scale"):
            raise LayoutError(f"unknown ramp mode '{self.mode}'")
        if self.mode == "value_scale":
            if not isinstance(self.base_hue, (int, float)):
                raise LayoutError("value_scale ramp needs a single hue")
            if not self.v_max > self.v_min:
                raise LayoutError("value_scale ramp requires v_max > v_min")
        else:
            if not isinstance(self.base_hue, Mapping):
                raise LayoutError("year_identity ramp needs a year->RGB mapping")
            object.__setattr__(self, "base_hue", MappingProxyType(dict(self.base_hue)))


def value_ramp(v_min: float, v_max: float, hue: float = DEFAULT_VALUE_HUE) -> ColorRamp:
    return ColorRamp(mode="value_scale", base_hue=hue, v_min=v_min, v_max=v_max)


def identity_ramp(year_labels) -> ColorRamp:
    table = {
        label: IDENTITY_PALETTE[i % len(IDENTITY_PALETTE)]
        for i, label in enumerate(year_labels)
    }
    return ColorRamp(mode="year_identity", base_hue=table)


def _hls_at(fraction: float, hue: float) -> RGB:
    # fraction 0 -> lightest, 1 -> darkest; strict monotonicity comes from
    # hls_to_rgb being strictly increasing in lightness for saturation < 1.
    lightness = _LIGHTNESS_LO_VALUE + fraction * (_LIGHTNESS_HI_VALUE - _LIGHTNESS_LO_VALUE)
    return colorsys.hls_to_rgb(hue, lightness, _SATURATION)


def color_for_value(v: float, ramp: ColorRamp) -> RGB:
    """Map a value to an RGB color; darker colors mean higher values.

    Out-of-range values clamp to [v_min, v_max].
    """
    if ramp.mode != "value_scale":
        raise LayoutError("color_for_value requires a value_scale ramp")
    v = min(max(v, ramp.v_min), ramp.v_max)
    fraction = (v - ramp.v_min) / (ramp.v_max - ramp.v_min)
    return _hls_at(fraction, ramp.base_hue)


def identity_color(year_label: str, ramp: ColorRamp) -> RGB:
    if ramp.mode != "year_identity":
        raise LayoutError("identity_color requires a year_identity ramp")
    try:
        return ramp.base_hue[year_label]
    except KeyError:
        raise LayoutError(f"no identity color for year '{year_label}'") from None


def band_colors(n_bands: int, hue: float = DEFAULT_VALUE_HUE) -> tuple[RGB, ...]:
    """Discrete band palette, lightest for band 0 up to darkest for the top band."""
    if n_bands < 1:
        raise LayoutError("need at least one band")
    if n_bands == 1:
        return (_hls_at(1.0, hue),)
    return tuple(_hls_at(k / (n_bands - 1), hue) for k in range(n_bands))


def luminance(rgb: RGB) -> float:
    """Rec. 709 luminance; the monotonicity contract is stated against this."""
    r, g, b = rgb
    return 0.2126 * r + 0.7152 * g + 0.0722 * b
