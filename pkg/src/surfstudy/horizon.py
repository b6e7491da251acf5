"""Horizon-band decomposition of surface meshes.

A surface is chunked into B value bands of height c = v_max / B. Triangles
are clipped along the iso-lines at c, 2c, ..., (B-1)c so every output
triangle lies inside one band, then each band is collapsed onto the base
plane at its residual height r = v - k*c. The result never rises above
c * z_scale, which is what buys the horizon technique its small space budget.
"""

import math
from dataclasses import dataclass

import numpy as np

from .colors import band_colors
from .errors import BandConfigError, DegenerateDataError, EmptyMeshError
from .mesh import SurfaceMesh

Piece = tuple[np.ndarray, np.ndarray]  # ((3, 2) xy, (3,) values)


@dataclass(frozen=True)
class BandParams:
    """Band layout: B bands of height c covering [0, v_max]."""

    B: int
    c: float
    v_max: float

    def __post_init__(self):
        if self.B < 1 or self.B != int(self.B):
            raise BandConfigError("band count must be a positive integer")
        if self.v_max <= 0:
            raise DegenerateDataError("v_max must be > 0")
        if self.c <= 0:
            raise BandConfigError("band height must be > 0")
        # B * c must reconstruct v_max up to float rounding
        if abs(self.B * self.c - self.v_max) > 4 * np.finfo(float).eps * self.v_max:
            raise BandConfigError(
                f"band height {self.c} * {self.B} bands does not equal v_max {self.v_max}"
            )

    @classmethod
    def from_band_count(cls, B: int, v_max: float) -> "BandParams":
        if B < 1:
            raise BandConfigError("band count must be >= 1")
        if v_max <= 0:
            raise DegenerateDataError("v_max must be > 0")
        return cls(B=B, c=v_max / B, v_max=v_max)

    def levels(self) -> list[float]:
        """Interior cut levels c, 2c, ..., (B-1)c."""
        return [k * self.c for k in range(1, self.B)]


class HorizonMesh(SurfaceMesh):
    """SurfaceMesh plus per-vertex band index and residual height.

    z = vertex_residual * z_scale; every triangle is band-pure and
    band * c + residual reconstructs the original value.
    """

    def __init__(self, *, vertices, triangles, vertex_value, vertex_color, z_scale,
                 vertex_band, vertex_residual, band_params, triangle_source):
        object.__setattr__(self, "vertex_band",
                           np.ascontiguousarray(np.asarray(vertex_band, dtype=np.int32)))
        object.__setattr__(self, "vertex_residual",
                           np.ascontiguousarray(np.asarray(vertex_residual, dtype=np.float64)))
        object.__setattr__(self, "band_params", band_params)
        object.__setattr__(self, "triangle_source",
                           np.ascontiguousarray(np.asarray(triangle_source, dtype=np.int64)))
        super().__init__(vertices=vertices, triangles=triangles,
                         vertex_value=vertex_value, vertex_color=vertex_color,
                         z_scale=z_scale)
        for name in ("vertex_band", "vertex_residual", "triangle_source"):
            getattr(self, name).setflags(write=False)

    def _validate(self):
        super()._validate()
        n = len(self.vertices)
        if self.vertex_band.shape != (n,) or self.vertex_residual.shape != (n,):
            raise BandConfigError("band/residual arrays must match vertex count")
        if self.triangle_source.shape != (len(self.triangles),):
            raise BandConfigError("triangle_source must match triangle count")
        p = self.band_params
        if self.vertex_band.min() < 0 or self.vertex_band.max() >= p.B:
            raise BandConfigError("band index out of range")
        if self.vertex_residual.min() < 0 or self.vertex_residual.max() > p.c:
            raise BandConfigError("residual outside [0, c]")
        tri_bands = self.vertex_band[self.triangles]
        if np.any(tri_bands[:, 0] != tri_bands[:, 1]) or np.any(tri_bands[:, 0] != tri_bands[:, 2]):
            raise BandConfigError("triangle spans a band boundary")

    def _check_z(self):
        expect = self.vertex_residual * self.z_scale
        if not np.array_equal(self.vertices[:, 2], expect):
            raise BandConfigError("vertex z must equal residual * z_scale")


def band_value(v: float, params: BandParams) -> tuple[int, float]:
    """Band index and residual for a scalar value.

    Bands are half-open [k*c, (k+1)*c); v = v_max lands in the top band with
    residual c instead of opening a phantom band B. Values above v_max clamp
    to v_max; negative values are a domain error.
    """
    if v < 0:
        raise ValueError(f"negative value {v} has no band")
    if v >= params.v_max:
        return params.B - 1, params.c
    k = min(int(math.floor(v / params.c)), params.B - 1)
    # guard against floor landing one band high/low from float division
    if k > 0 and v < k * params.c:
        k -= 1
    elif k + 1 < params.B and v >= (k + 1) * params.c:
        k += 1
    # the subtraction is exact (r and k*c are within a factor of 2 of v), so
    # k*c + r reconstructs v bit-for-bit; the clamp only engages in the
    # topmost ulp when B*c rounded below v_max
    r = v - k * params.c
    if r > params.c:
        r = params.c
    return k, r


def _canonical_lerp(a_xy, a_v, b_xy, b_v, level: float) -> np.ndarray:
    # order the endpoints so both triangles sharing an edge compute the
    # bitwise-identical cut point; the (1-t)a + tb form hits the endpoints
    # exactly at t = 0 and t = 1, so vertex-grazing cuts produce clean
    # zero-area slivers that get dropped
    if (b_xy[0], b_xy[1]) < (a_xy[0], a_xy[1]):
        a_xy, a_v, b_xy, b_v = b_xy, b_v, a_xy, a_v
    t = (level - a_v) / (b_v - a_v)
    return (1.0 - t) * a_xy + t * b_xy


def clip_triangle_at_level(
    xy: np.ndarray,
    values: np.ndarray,
    level: float,
) -> tuple[list[Piece], list[Piece]]:
    """Split one triangle along the value iso-line at `level`.

    xy is (3, 2) vertex positions, values their (3,) scalar attributes;
    interpolation along edges is linear. Returns (below, above) piece lists
    that partition the input's projected area. Vertices exactly on the level
    count as below, so flat plateaus at a cut level stay unsplit. Zero-area
    slivers (cuts through a vertex) are dropped.
    """
    xy = np.asarray(xy, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    below_mask = values <= level
    n_below = int(below_mask.sum())

    if n_below == 3:
        return [(xy, values)], []
    if n_below == 0:
        return [], [(xy, values)]

    # rotate so the lone vertex comes first, preserving winding
    lone_below = n_below == 1
    lone = int(np.flatnonzero(below_mask if lone_below else ~below_mask)[0])
    order = [(lone + i) % 3 for i in range(3)]
    p = xy[order]
    v = values[order]

    cut_ab = _canonical_lerp(p[0], v[0], p[1], v[1], level)
    cut_ca = _canonical_lerp(p[2], v[2], p[0], v[0], level)

    lone_piece: Piece = (np.array([p[0], cut_ab, cut_ca]), np.array([v[0], level, level]))
    quad_pieces: list[Piece] = [
        (np.array([cut_ab, p[1], p[2]]), np.array([level, v[1], v[2]])),
        (np.array([cut_ab, p[2], cut_ca]), np.array([level, v[2], level])),
    ]
    if lone_below:
        below, above = [lone_piece], quad_pieces
    else:
        below, above = quad_pieces, [lone_piece]
    return [t for t in below if _xy_area(t[0]) != 0.0], [t for t in above if _xy_area(t[0]) != 0.0]


def _xy_area(xy: np.ndarray) -> float:
    return 0.5 * abs(
        (xy[1, 0] - xy[0, 0]) * (xy[2, 1] - xy[0, 1])
        - (xy[1, 1] - xy[0, 1]) * (xy[2, 0] - xy[0, 0])
    )


def decompose(mesh: SurfaceMesh, params: BandParams, z_scale: float) -> HorizonMesh:
    """Decompose a surface mesh into collapsed horizon bands.

    Every input triangle is clipped at the interior band levels; each
    band-pure piece is re-homed to residual height r = v - k*c and colored by
    its band (darker = higher band). With B = 1 there are no cut levels and
    the output is geometrically identical to the input.

    Output ordering is deterministic: pieces appear by input triangle index,
    lowest band first within a triangle.
    """
    if z_scale <= 0:
        raise BandConfigError("z_scale must be > 0")
    values = mesh.vertex_value
    if values.min() < 0 or values.max() > params.v_max * (1 + 1e-12):
        raise DegenerateDataError(
            f"mesh values [{values.min()}, {values.max()}] exceed band range [0, {params.v_max}]"
        )

    palette = np.asarray(band_colors(params.B), dtype=np.float64)
    c = params.c

    vertex_key_to_index: dict[tuple, int] = {}
    out_xyz: list[tuple[float, float, float]] = []
    out_value: list[float] = []
    out_band: list[int] = []
    out_residual: list[float] = []
    out_tris: list[tuple[int, int, int]] = []
    out_source: list[int] = []

    def emit_vertex(x: float, y: float, value: float, band: int) -> int:
        key = (x, y, band)
        idx = vertex_key_to_index.get(key)
        if idx is not None:
            return idx
        r = value - band * c
        if r < 0.0:
            r = 0.0
        elif r > c:
            r = c
        idx = len(out_xyz)
        vertex_key_to_index[key] = idx
        out_xyz.append((x, y, r * z_scale))
        out_value.append(value)
        out_band.append(band)
        out_residual.append(r)
        return idx

    tri_xy = mesh.vertices[:, :2]
    for tri_index, tri in enumerate(mesh.triangles):
        xy = tri_xy[tri]
        vals = values[tri]
        # peel bands from the bottom: the below side of the cut at (k+1)*c is
        # band k, the above side moves on to the next level
        pending: list[Piece] = [(xy, vals)]
        band = 0
        while pending:
            if band == params.B - 1:
                finished, pending = pending, []
            else:
                level = (band + 1) * c
                finished = []
                carry: list[Piece] = []
                for piece_xy, piece_v in pending:
                    below, above = clip_triangle_at_level(piece_xy, piece_v, level)
                    finished.extend(below)
                    carry.extend(above)
                pending = carry
            for piece_xy, piece_v in finished:
                ids = tuple(
                    emit_vertex(piece_xy[i, 0], piece_xy[i, 1], float(piece_v[i]), band)
                    for i in range(3)
                )
                out_tris.append(ids)
                out_source.append(tri_index)
            band += 1

    if not out_tris:
        raise EmptyMeshError("decomposition produced no triangles")

    bands = np.asarray(out_band, dtype=np.int32)
    return HorizonMesh(
        vertices=np.asarray(out_xyz, dtype=np.float64),
        triangles=np.asarray(out_tris, dtype=np.int32),
        vertex_value=np.asarray(out_value, dtype=np.float64),
        vertex_color=palette[bands],
        z_scale=z_scale,
        vertex_band=bands,
        vertex_residual=np.asarray(out_residual, dtype=np.float64),
        band_params=params,
        triangle_source=np.asarray(out_source, dtype=np.int64),
    )
