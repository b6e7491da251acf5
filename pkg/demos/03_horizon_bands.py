"""
Horizon bands: folding a tall surface flat
==========================================

The value range [0, v_max] is cut into B bands of height c = v_max / B.
Triangles are clipped along the iso-lines at c, 2c, ..., and every piece is
dropped to its residual height v - k*c, colored by band index (darker =
higher). The surface never rises above c, yet k*c + r recovers every value.
"""

import numpy as np

from surfstudy import (
    BandParams,
    band_colors,
    band_value,
    clip_triangle_at_level,
    decompose,
    luminance,
    projected_area,
    synthesize_field,
    triangulate,
)

params = BandParams.from_band_count(4, v_max=8.0)
print("band height c =", params.c, " cut levels:", params.levels())

# where single values land
for v in (0.0, 1.5, 2.0, 7.3, 8.0):
    k, r = band_value(v, params)
    print(f"  v={v:>4} -> band {k}, residual {r:.1f}")

# clipping one triangle: corner values 0, 0, 3 against level 2 leaves a
# small cap above (area 1/18 of the unit right triangle)
xy = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
below, above = clip_triangle_at_level(xy, np.array([0.0, 0.0, 3.0]), 2.0)
print("\npieces below:", len(below), " above:", len(above))


def area(tri_xy):
    (ax, ay), (bx, by), (cx, cy) = tri_xy
    return 0.5 * abs((bx - ax) * (cy - ay) - (by - ay) * (cx - ax))


print("above area = %.6f (1/18 = %.6f)"
      % (sum(area(p[0]) for p in above), 1 / 18))

# a full field: decompose, then confirm nothing was lost
field = synthesize_field(seed=11, n_rows=24, n_cols=24)
mesh = triangulate(field, z_scale=1.0)
params = BandParams.from_band_count(4, float(field.values.max()))
horizon = decompose(mesh, params, z_scale=1.0)
print("\ninput triangles:", mesh.n_triangles, "-> horizon pieces:", horizon.n_triangles)
print("max rendered height: %.3f (band height %.3f)"
      % (horizon.vertices[:, 2].max(), params.c))
print("XY area conserved: %.9f vs %.9f"
      % (projected_area(mesh), projected_area(horizon)))

# reconstruction: band * c + residual equals the original value
recon = horizon.vertex_band * params.c + horizon.vertex_residual
print("reconstruction spans %.3f .. %.3f (original %.3f .. %.3f)"
      % (recon.min(), recon.max(), field.values.min(), field.values.max()))

# the palette darkens with band index so height reads as ink density
shades = band_colors(4)
print("band luminances:", [round(luminance(c), 3) for c in shades])
