"""Per-year space budgets and scene assembly for the three techniques.

The vertical budget each study year gets is:

    shared_surface   S + h
    small_multiple   S/N + h
    horizon          S/(N*2*B) + h

where S is the available vertical space, N the number of simultaneous study
years, B the horizon band count, and h the minimum height needed to read a
surface's depth. Split techniques stack their slots bottom-to-top in
chronological order with one z scale shared by every slot.
"""

from dataclasses import dataclass, field

from .colors import band_colors, identity_color, identity_ramp, value_ramp
from .errors import DegenerateDataError, LayoutError
from .horizon import BandParams, decompose
from .mesh import SurfaceMesh, triangulate
from .raster import Dataset

TECHNIQUES = ("shared_surface", "small_multiple", "horizon")

DEFAULT_S = 900.0
DEFAULT_BANDS = 4
# h is never valued by the layout formulas themselves; 5% of S is the default
H_FRACTION_DEFAULT = 0.05
# horizon slots get a small visible gap between slabs; small multiples are
# contiguous and rely on separator planes instead
HORIZON_GAP_FRACTION = 0.02


@dataclass(frozen=True)
class LayoutParams:
    """Space-budget inputs for one scene."""

    technique: str
    S: float
    h: float
    N: int
    B: int | None = None

    def __post_init__(self):
        if self.technique not in TECHNIQUES:
            raise LayoutError(f"unknown technique '{self.technique}'")
        if self.S <= 0:
            raise LayoutError("S must be > 0")
        if self.h < 0:
            raise LayoutError("h must be >= 0")
        if self.N < 2:
            raise LayoutError("N must be >= 2")
        if self.technique == "horizon":
            if self.B is None or self.B < 2:
                raise LayoutError("horizon technique requires B >= 2")


def default_layout(technique: str, n_years: int, S: float = DEFAULT_S,
                   h: float | None = None, B: int = DEFAULT_BANDS) -> LayoutParams:
    if h is None:
        h = H_FRACTION_DEFAULT * S
    return LayoutParams(
        technique=technique,
        S=S,
        h=h,
        N=n_years,
        B=B if technique == "horizon" else None,
    )


def slot_extent(params: LayoutParams) -> float:
    """Vertical space allocated to one study year."""
    if params.technique == "shared_surface":
        return params.S + params.h
    if params.technique == "small_multiple":
        return params.S / params.N + params.h
    return params.S / (params.N * 2 * params.B) + params.h


@dataclass(frozen=True)
class SceneSlot:
    """One study year placed in the scene."""

    year_label: str
    translation: tuple[float, float, float]
    z_scale: float
    mesh: SurfaceMesh


@dataclass(frozen=True)
class Scene:
    """Assembled scene: slots, legend, bounds, and the params that shaped it."""

    technique: str
    params: LayoutParams
    slots: tuple[SceneSlot, ...]
    legend: dict
    bounds_min: tuple[float, float, float]
    bounds_max: tuple[float, float, float]
    separators: tuple[float, ...] = field(default_factory=tuple)

    def slot(self, year_label: str) -> SceneSlot:
        for s in self.slots:
            if s.year_label == year_label:
                return s
        raise KeyError(year_label)


def _grid_extent(dataset: Dataset) -> tuple[float, float, float, float]:
    f = dataset.fields[0]
    x0, y0 = f.origin_lon, f.origin_lat
    return (x0, y0, x0 + (f.n_cols - 1) * f.cell_size, y0 + (f.n_rows - 1) * f.cell_size)


def assemble_scene(
    dataset: Dataset,
    params: LayoutParams,
    slot_gap: float | None = None,
) -> Scene:
    """Build the scene for one technique.

    shared_surface overlays every year at the origin with one identity color
    per year and z_scale = S / global_max. The split techniques stack slots
    bottom-to-top chronologically with one shared z_scale chosen so the
    tallest surface fills a slot's non-h budget exactly: S/N / global_max for
    small multiples and S / (2 * N * global_max) for the horizon (band height
    c = global_max / B makes the B factor cancel).
    """
    if len(dataset) != params.N:
        raise LayoutError(f"dataset has {len(dataset)} years, layout expects {params.N}")
    if dataset.global_max <= 0:
        raise DegenerateDataError("flat dataset: global_max is 0, nothing to scale")

    gap = slot_gap
    if gap is None:
        gap = HORIZON_GAP_FRACTION * params.S if params.technique == "horizon" else 0.0

    extent = slot_extent(params)
    x0, y0, x1, y1 = _grid_extent(dataset)
    slots: list[SceneSlot] = []
    separators: list[float] = []

    if params.technique == "shared_surface":
        z_scale = params.S / dataset.global_max
        ramp = identity_ramp(dataset.year_labels)
        for f in dataset.fields:
            mesh = triangulate(f, z_scale, color=identity_color(f.year_label, ramp))
            slots.append(SceneSlot(f.year_label, (0.0, 0.0, 0.0), z_scale, mesh))
        legend = {
            "mode": "year_identity",
            "entries": [
                {"year_label": f.year_label, "rgb": list(identity_color(f.year_label, ramp))}
                for f in dataset.fields
            ],
        }
        top = extent

    elif params.technique == "small_multiple":
        budget = params.S / params.N
        z_scale = budget / dataset.global_max
        ramp = value_ramp(0.0, dataset.global_max)
        for i, f in enumerate(dataset.fields):
            base = i * (extent + gap)
            mesh = triangulate(f, z_scale, color=ramp)
            slots.append(SceneSlot(f.year_label, (0.0, 0.0, base), z_scale, mesh))
            if i > 0:
                separators.append(base - gap / 2.0 if gap else base)
        legend = {
            "mode": "value_scale",
            "v_min": 0.0,
            "v_max": dataset.global_max,
            "note": "darker is higher",
        }
        top = (params.N - 1) * (extent + gap) + extent

    else:  # horizon
        budget = params.S / (params.N * 2 * params.B)
        band_params = BandParams.from_band_count(params.B, dataset.global_max)
        z_scale = budget / band_params.c
        for i, f in enumerate(dataset.fields):
            base = i * (extent + gap)
            surface = triangulate(f, z_scale)
            mesh = decompose(surface, band_params, z_scale)
            slots.append(SceneSlot(f.year_label, (0.0, 0.0, base), z_scale, mesh))
            if i > 0:
                separators.append(base - gap / 2.0 if gap else base)
        legend = {
            "mode": "band",
            "B": params.B,
            "band_height": band_params.c,
            "colors": [list(c) for c in band_colors(params.B)],
            "note": "darker band is higher",
        }
        top = (params.N - 1) * (extent + gap) + extent

    return Scene(
        technique=params.technique,
        params=params,
        slots=tuple(slots),
        legend=legend,
        bounds_min=(x0, y0, 0.0),
        bounds_max=(x1, y1, top),
        separators=tuple(separators),
    )


def max_slot_height(scene: Scene) -> float:
    """Highest mesh point above its slot base across all slots."""
    return max(float(s.mesh.vertices[:, 2].max()) for s in scene.slots)
