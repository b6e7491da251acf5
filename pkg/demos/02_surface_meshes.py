"""
Surface meshes: triangulating a height field
============================================

Each grid point becomes a vertex at (lon, lat, value * z_scale); each cell
with four valid corners contributes two triangles. The projected XY area is
the quantity conserved by every later geometry transform.
"""

import numpy as np

from surfstudy import projected_area, synthesize_field, triangulate, value_ramp

field = synthesize_field(seed=3, n_rows=16, n_cols=16)
mesh = triangulate(field, z_scale=2.0)
print("vertices:", mesh.n_vertices, " triangles:", mesh.n_triangles)
print("z range: %.2f .. %.2f" % (mesh.vertices[:, 2].min(), mesh.vertices[:, 2].max()))

# 15x15 cells of 0.05 degrees: area is a pure function of the base plane
print("projected area: %.6f (expected %.6f)"
      % (projected_area(mesh), (15 * 0.05) ** 2))

# the same geometry at a different exaggeration covers the same footprint
taller = triangulate(field, z_scale=9.0)
print("area independent of z_scale:",
      projected_area(taller) == projected_area(mesh))

# a value ramp colors vertices by height; darker ink for higher values
ramp = value_ramp(0.0, float(field.values.max()))
colored = triangulate(field, z_scale=2.0, color=ramp)
lows = colored.vertex_color[np.argsort(colored.vertex_value)[:5]]
highs = colored.vertex_color[np.argsort(colored.vertex_value)[-5:]]
print("mean RGB low values:", lows.mean(axis=0).round(3))
print("mean RGB high values:", highs.mean(axis=0).round(3))
