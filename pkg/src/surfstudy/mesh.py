"""Height-field triangulation into renderable surface meshes."""

from dataclasses import dataclass

import numpy as np

from .colors import ColorRamp, color_for_value
from .errors import EmptyMeshError, LayoutError
from .raster import HeightField

NEUTRAL_COLOR = (0.78, 0.78, 0.78)


@dataclass(frozen=True, eq=False)
class SurfaceMesh:
    """Triangulated surface over the lon/lat base plane.

    vertices: (V, 3) float64 scene coordinates, z = vertex_value * z_scale.
    triangles: (T, 3) int32 vertex indices, counter-clockwise seen from +z.
    vertex_value: (V,) original thickness in meters.
    vertex_color: (V, 3) RGB in [0, 1].
    """

    vertices: np.ndarray
    triangles: np.ndarray
    vertex_value: np.ndarray
    vertex_color: np.ndarray
    z_scale: float

    def __post_init__(self):
        vertices = np.ascontiguousarray(np.asarray(self.vertices, dtype=np.float64))
        triangles = np.ascontiguousarray(np.asarray(self.triangles, dtype=np.int32))
        values = np.ascontiguousarray(np.asarray(self.vertex_value, dtype=np.float64))
        colors = np.ascontiguousarray(np.asarray(self.vertex_color, dtype=np.float64))
        for name, arr in (
            ("vertices", vertices),
            ("triangles", triangles),
            ("vertex_value", values),
            ("vertex_color", colors),
        ):
            object.__setattr__(self, name, arr)
        self._validate()
        for arr in (vertices, triangles, values, colors):
            arr.setflags(write=False)

    def _validate(self):
        v, t = self.vertices, self.triangles
        if v.ndim != 2 or v.shape[1] != 3:
            raise LayoutError("vertices must be (V, 3)")
        if t.ndim != 2 or t.shape[1] != 3:
            raise LayoutError("triangles must be (T, 3)")
        if len(t) == 0:
            raise EmptyMeshError("mesh has no triangles")
        if t.min() < 0 or t.max() >= len(v):
            raise LayoutError("triangle index out of range")
        if self.vertex_value.shape != (len(v),):
            raise LayoutError("vertex_value length mismatch")
        if self.vertex_color.shape != (len(v), 3):
            raise LayoutError("vertex_color shape mismatch")
        if np.any(_triangle_xy_areas(v, t) == 0.0):
            raise LayoutError("degenerate zero-area triangle")
        self._check_z()

    def _check_z(self):
        expect = self.vertex_value * self.z_scale
        if not np.allclose(self.vertices[:, 2], expect, rtol=0, atol=1e-9 * max(1.0, abs(self.z_scale))):
            raise LayoutError("vertex z must equal vertex_value * z_scale")

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        return self.vertices.min(axis=0), self.vertices.max(axis=0)


def _triangle_xy_areas(vertices: np.ndarray, triangles: np.ndarray) -> np.ndarray:
    a = vertices[triangles[:, 0], :2]
    b = vertices[triangles[:, 1], :2]
    c = vertices[triangles[:, 2], :2]
    cross = (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0])
    return 0.5 * np.abs(cross)


def triangulate(
    field: HeightField,
    z_scale: float,
    color: ColorRamp | tuple | None = None,
) -> SurfaceMesh:
    """Triangulate a height field into a surface mesh.

    Every non-nodata grid point becomes a vertex at
    (origin_lon + col*cell_size, origin_lat + row*cell_size, value*z_scale).
    Each grid cell whose four corners are valid contributes two triangles,
    split along the same (low-low to high-high) diagonal in every cell; cells
    touching a nodata corner contribute nothing.

    color may be a value_scale ColorRamp, a fixed (r, g, b) identity color,
    or None for neutral gray.
    """
    if z_scale <= 0:
        raise LayoutError("z_scale must be > 0")

    valid = ~field.nodata
    index = np.full(field.shape, -1, dtype=np.int64)
    index[valid] = np.arange(int(valid.sum()))

    rows, cols = np.nonzero(valid)
    x = field.origin_lon + cols * field.cell_size
    y = field.origin_lat + rows * field.cell_size
    values = field.values[valid]
    vertices = np.column_stack([x, y, values * z_scale])

    cell_ok = valid[:-1, :-1] & valid[:-1, 1:] & valid[1:, :-1] & valid[1:, 1:]
    if not cell_ok.any():
        raise EmptyMeshError("height field has no fully valid cells")
    cr, cc = np.nonzero(cell_ok)
    v00 = index[cr, cc]
    v01 = index[cr, cc + 1]
    v10 = index[cr + 1, cc]
    v11 = index[cr + 1, cc + 1]
    # both triangles wind counter-clockwise in the xy plane
    tri_a = np.column_stack([v00, v01, v11])
    tri_b = np.column_stack([v00, v11, v10])
    triangles = np.empty((2 * len(v00), 3), dtype=np.int32)
    triangles[0::2] = tri_a
    triangles[1::2] = tri_b

    if color is None:
        rgb = np.tile(NEUTRAL_COLOR, (len(vertices), 1))
    elif isinstance(color, ColorRamp):
        rgb = np.array([color_for_value(v, color) for v in values])
    else:
        rgb = np.tile(np.asarray(color, dtype=np.float64), (len(vertices), 1))

    return SurfaceMesh(
        vertices=vertices,
        triangles=triangles,
        vertex_value=values,
        vertex_color=rgb,
        z_scale=z_scale,
    )


def projected_area(mesh: SurfaceMesh) -> float:
    """Total XY-plane projected area of the mesh (independent of z)."""
    return float(np.sum(_triangle_xy_areas(mesh.vertices, mesh.triangles)))
