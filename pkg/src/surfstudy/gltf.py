"""Deterministic glTF 2.0 binary export of scenes, plus a reader for round trips.

Each scene slot becomes one .glb with POSITION, COLOR_0, and uint32 indices
(all little-endian, positions/colors as IEEE-754 single precision), alongside
a scene.json manifest describing slot transforms, legend, separators, and
bounds. Identical inputs produce byte-identical files: no timestamps, no
generator strings with versions, fixed JSON key order.
"""

import json
import re
import struct
from pathlib import Path

import numpy as np

from .errors import LayoutError
from .layout import Scene
from .mesh import SurfaceMesh

GLB_MAGIC = 0x46546C67  # "glTF"
CHUNK_JSON = 0x4E4F534A
CHUNK_BIN = 0x004E4942
GL_TRIANGLES = 4
GL_ARRAY_BUFFER = 34962
GL_ELEMENT_ARRAY_BUFFER = 34963
COMPONENT_F32 = 5126
COMPONENT_U32 = 5125

MANIFEST_SCHEMA = "surfstudy-scene/1"
MAX_INDICES = 2**32 - 1


def _pad(data: bytes, alignment: int, fill: bytes) -> bytes:
    remainder = len(data) % alignment
    if remainder:
        data += fill * (alignment - remainder)
    return data


def mesh_to_glb(mesh: SurfaceMesh, translation=(0.0, 0.0, 0.0)) -> bytes:
    """Encode one mesh as a self-contained glTF 2.0 binary."""
    if mesh.n_vertices > MAX_INDICES:
        raise LayoutError("mesh exceeds uint32 index range")

    positions = np.asarray(mesh.vertices, dtype="<f4")
    colors = np.asarray(mesh.vertex_color, dtype="<f4")
    indices = np.asarray(mesh.triangles, dtype="<u4").reshape(-1)

    blob = b""
    views = []
    accessors = []

    def add_view(data: bytes, target: int) -> int:
        nonlocal blob
        blob = _pad(blob, 4, b"\x00")
        views.append(
            {"buffer": 0, "byteOffset": len(blob), "byteLength": len(data), "target": target}
        )
        blob += data
        return len(views) - 1

    # POSITION accessor min/max must describe the stored f32 data exactly
    pos_min = positions.min(axis=0)
    pos_max = positions.max(axis=0)
    accessors.append(
        {
            "bufferView": add_view(positions.tobytes(), GL_ARRAY_BUFFER),
            "componentType": COMPONENT_F32,
            "count": len(positions),
            "type": "VEC3",
            "min": [float(v) for v in pos_min],
            "max": [float(v) for v in pos_max],
        }
    )
    accessors.append(
        {
            "bufferView": add_view(colors.tobytes(), GL_ARRAY_BUFFER),
            "componentType": COMPONENT_F32,
            "count": len(colors),
            "type": "VEC3",
        }
    )
    accessors.append(
        {
            "bufferView": add_view(indices.tobytes(), GL_ELEMENT_ARRAY_BUFFER),
            "componentType": COMPONENT_U32,
            "count": len(indices),
            "type": "SCALAR",
        }
    )

    blob = _pad(blob, 4, b"\x00")
    document = {
        "asset": {"version": "2.0", "generator": "surfstudy"},
        "buffers": [{"byteLength": len(blob)}],
        "bufferViews": views,
        "accessors": accessors,
        "meshes": [
            {
                "primitives": [
                    {
                        "attributes": {"POSITION": 0, "COLOR_0": 1},
                        "indices": 2,
                        "mode": GL_TRIANGLES,
                    }
                ]
            }
        ],
        "nodes": [{"mesh": 0, "translation": [float(t) for t in translation]}],
        "scenes": [{"nodes": [0]}],
        "scene": 0,
    }
    json_chunk = _pad(json.dumps(document, sort_keys=True, separators=(",", ":")).encode(), 4, b" ")

    total = 12 + 8 + len(json_chunk) + 8 + len(blob)
    out = struct.pack("<III", GLB_MAGIC, 2, total)
    out += struct.pack("<II", len(json_chunk), CHUNK_JSON) + json_chunk
    out += struct.pack("<II", len(blob), CHUNK_BIN) + blob
    return out


def parse_glb(data: bytes) -> dict:
    """Decode a .glb produced by mesh_to_glb back into arrays.

    Returns {"positions", "colors", "triangles", "translation", "pos_min",
    "pos_max"}; used for manifest round-trip checks and by tests as the
    read-side of the export contract.
    """
    magic, version, total = struct.unpack_from("<III", data, 0)
    if magic != GLB_MAGIC or version != 2:
        raise LayoutError("not a glTF 2.0 binary")
    if total != len(data):
        raise LayoutError("glb length field does not match payload")

    offset = 12
    document = None
    blob = None
    while offset < len(data):
        length, kind = struct.unpack_from("<II", data, offset)
        offset += 8
        chunk = data[offset : offset + length]
        offset += length
        if kind == CHUNK_JSON:
            document = json.loads(chunk.decode())
        elif kind == CHUNK_BIN:
            blob = chunk
    if document is None or blob is None:
        raise LayoutError("glb missing JSON or BIN chunk")

    def read_accessor(index: int) -> np.ndarray:
        acc = document["accessors"][index]
        view = document["bufferViews"][acc["bufferView"]]
        start = view.get("byteOffset", 0)
        raw = blob[start : start + view["byteLength"]]
        dtype = {COMPONENT_F32: "<f4", COMPONENT_U32: "<u4"}[acc["componentType"]]
        width = {"VEC3": 3, "SCALAR": 1}[acc["type"]]
        arr = np.frombuffer(raw, dtype=dtype)
        if width > 1:
            arr = arr.reshape(-1, width)
        return arr[: acc["count"]] if width == 1 else arr[: acc["count"], :]

    primitive = document["meshes"][0]["primitives"][0]
    positions_acc = primitive["attributes"]["POSITION"]
    acc = document["accessors"][positions_acc]
    return {
        "positions": read_accessor(positions_acc),
        "colors": read_accessor(primitive["attributes"]["COLOR_0"]),
        "triangles": read_accessor(primitive["indices"]).reshape(-1, 3),
        "translation": document["nodes"][0].get("translation", [0.0, 0.0, 0.0]),
        "pos_min": acc["min"],
        "pos_max": acc["max"],
    }


def _slot_filename(index: int, year_label: str) -> str:
    safe = re.sub(r"[^A-Za-z0-9_.-]", "_", year_label)
    return f"slot{index:02d}_{safe}.glb"


def scene_manifest(scene: Scene, mesh_files: list[str]) -> dict:
    params = scene.params
    return {
        "schema": MANIFEST_SCHEMA,
        "technique": scene.technique,
        "layout": {
            "S": params.S,
            "h": params.h,
            "N": params.N,
            "B": params.B,
        },
        "slots": [
            {
                "year_label": s.year_label,
                "translation": list(s.translation),
                "z_scale": s.z_scale,
                "mesh": mesh_files[i],
                "n_vertices": s.mesh.n_vertices,
                "n_triangles": s.mesh.n_triangles,
            }
            for i, s in enumerate(scene.slots)
        ],
        "legend": scene.legend,
        "separators": list(scene.separators),
        "bounds": {"min": list(scene.bounds_min), "max": list(scene.bounds_max)},
    }


def export_scene(scene: Scene, out_dir: str | Path) -> Path:
    """Write scene.json plus one .glb per slot; returns the manifest path.

    Deterministic: exporting the same scene twice produces byte-identical
    files. Not safe for two concurrent exports into one directory.
    """
    if not scene.slots:
        raise LayoutError("scene has no slots to export")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    mesh_files = []
    for i, slot in enumerate(scene.slots):
        name = _slot_filename(i, slot.year_label)
        (out_dir / name).write_bytes(mesh_to_glb(slot.mesh, slot.translation))
        mesh_files.append(name)

    manifest = scene_manifest(scene, mesh_files)
    manifest_path = out_dir / "scene.json"
    manifest_path.write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n")
    return manifest_path


def load_scene_dir(scene_dir: str | Path) -> dict:
    """Read an exported scene directory: manifest dict plus decoded meshes."""
    scene_dir = Path(scene_dir)
    manifest = json.loads((scene_dir / "scene.json").read_text())
    meshes = [parse_glb((scene_dir / s["mesh"]).read_bytes()) for s in manifest["slots"]]
    return {"manifest": manifest, "meshes": meshes}
