"""
Scene layouts: three ways to spend one vertical budget
======================================================

Every technique gets the same vertical space S plus a readability floor h
per year. Shared space spends S once for all years; small multiples split it
into N slots; horizon graphs shrink each slot further to S / (N * 2 * B) and
rely on band color to keep values readable.
"""

import tempfile
from pathlib import Path

from surfstudy import (
    assemble_scene,
    default_layout,
    export_scene,
    load_scene_dir,
    slot_extent,
    synthesize_dataset,
)

S, h = 900.0, 45.0
for technique in ("shared_surface", "small_multiple", "horizon"):
    for n in (2, 4):
        params = default_layout(technique, n, S=S, h=h, B=4)
        print(f"{technique:>15} N={n}: {slot_extent(params):7.2f} per year")

dataset = synthesize_dataset(seed=5, n_rows=20, n_cols=20)

# assemble all three scenes and compare their total height
for technique in ("shared_surface", "small_multiple", "horizon"):
    scene = assemble_scene(dataset, default_layout(technique, len(dataset)))
    top = scene.bounds_max[2]
    print(f"\n{technique}: {len(scene.slots)} slots, scene top {top:.1f}")
    for slot in scene.slots:
        peak = slot.translation[2] + slot.mesh.vertices[:, 2].max()
        print(f"  {slot.year_label}: base z {slot.translation[2]:7.1f}, "
              f"peak z {peak:7.1f}, z_scale {slot.z_scale:.3f}")

# exported scenes are plain files: scene.json plus one .glb per slot
out = Path(tempfile.mkdtemp(prefix="surfstudy-scene-")) / "horizon"
scene = assemble_scene(dataset, default_layout("horizon", len(dataset)))
manifest_path = export_scene(scene, out)
print("\nwrote", sorted(p.name for p in out.iterdir()))

loaded = load_scene_dir(out)
slot0 = loaded["manifest"]["slots"][0]
print("slot 0 reloads with", slot0["n_vertices"], "vertices,",
      slot0["n_triangles"], "triangles")
