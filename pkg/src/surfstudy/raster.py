"""Gridded height-field ingestion: ESRI ASCII grids, validation, synthetic terrain.

A height field holds one study year's saturated-thickness raster on a shared
lon/lat grid. All values are meters and nonnegative; missing cells live in a
boolean nodata mask and are never interpolated.
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Sequence

import numpy as np

from .errors import AsciiGridError, DatasetError

HEADER_KEYS = ("ncols", "nrows", "xllcorner", "yllcorner", "cellsize", "nodata_value")
REQUIRED_HEADER_KEYS = HEADER_KEYS[:5]
DEFAULT_NODATA = -9999.0


@dataclass(frozen=True)
class HeightField:
    """One study year's gridded thickness values.

    ``values`` is an (n_rows, n_cols) float array in meters; row 0 is the
    first (northernmost) data line of the source grid. Masked cells hold 0.0
    and are flagged in ``nodata``. Instances are immutable and safe to share.
    """

    year_label: str
    n_rows: int
    n_cols: int
    origin_lon: float
    origin_lat: float
    cell_size: float
    values: np.ndarray
    nodata: np.ndarray

    def __post_init__(self):
        values = np.ascontiguousarray(np.asarray(self.values, dtype=np.float64))
        nodata = np.ascontiguousarray(np.asarray(self.nodata, dtype=bool))
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "nodata", nodata)
        if self.n_rows <= 0 or self.n_cols <= 0:
            raise DatasetError("grid dimensions must be positive")
        if self.cell_size <= 0:
            raise DatasetError("cell_size must be > 0")
        if values.shape != (self.n_rows, self.n_cols):
            raise DatasetError(
                f"values shape {values.shape} does not match "
                f"{self.n_rows}x{self.n_cols}"
            )
        if nodata.shape != values.shape:
            raise DatasetError("nodata mask shape does not match values")
        valid = values[~nodata]
        if valid.size == 0:
            raise DatasetError("all cells are nodata")
        if not np.all(np.isfinite(valid)):
            raise DatasetError("non-nodata values must be finite")
        if np.any(valid < 0):
            raise DatasetError("thickness values must be >= 0")
        values.setflags(write=False)
        nodata.setflags(write=False)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_rows, self.n_cols)

    def max_value(self) -> float:
        return float(self.values[~self.nodata].max())

    def min_value(self) -> float:
        return float(self.values[~self.nodata].min())

    def grid_key(self) -> tuple:
        """Grid geometry tuple; equal keys mean fields share one grid."""
        return (self.n_rows, self.n_cols, self.origin_lon, self.origin_lat, self.cell_size)


@dataclass(frozen=True)
class Dataset:
    """Chronologically ordered study years sharing one grid."""

    fields: tuple[HeightField, ...]
    global_min: float
    global_max: float

    @property
    def year_labels(self) -> tuple[str, ...]:
        return tuple(f.year_label for f in self.fields)

    def field(self, year_label: str) -> HeightField:
        for f in self.fields:
            if f.year_label == year_label:
                return f
        raise KeyError(year_label)

    def __len__(self) -> int:
        return len(self.fields)


def _tokenize_lines(text: str) -> list[tuple[int, list[str]]]:
    out = []
    for i, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split()
        if tokens:
            out.append((i, tokens))
    return out


def parse_ascii_grid(text: str | IO[str], year_label: str) -> HeightField:
    """Parse an ESRI ASCII grid into a HeightField.

    Header keys (ncols, nrows, xllcorner, yllcorner, cellsize, optional
    NODATA_value) are case-insensitive. Row 0 of the result is the first data
    line, i.e. the northernmost row of the source raster. Cells equal to the
    NODATA_value are masked; negative or non-finite data values are rejected
    because saturated thickness is a physical thickness.

    Raises AsciiGridError naming the offending line/column on malformed input.
    """
    if hasattr(text, "read"):
        text = text.read()
    lines = _tokenize_lines(text)
    if not lines:
        raise AsciiGridError("empty grid file")

    header: dict[str, float] = {}
    data_start = 0
    for idx, (lineno, tokens) in enumerate(lines):
        key = tokens[0].lower()
        if key in HEADER_KEYS:
            if len(tokens) != 2:
                raise AsciiGridError(f"header key '{tokens[0]}' needs exactly one value", lineno)
            if key in header:
                raise AsciiGridError(f"duplicate header key '{tokens[0]}'", lineno)
            try:
                header[key] = float(tokens[1])
            except ValueError:
                raise AsciiGridError(
                    f"non-numeric header value '{tokens[1]}' for '{tokens[0]}'", lineno
                ) from None
            data_start = idx + 1
        else:
            break

    missing = [k for k in REQUIRED_HEADER_KEYS if k not in header]
    if missing:
        raise AsciiGridError(f"missing header key(s): {', '.join(missing)}", lines[0][0])

    n_cols = int(header["ncols"])
    n_rows = int(header["nrows"])
    if n_cols != header["ncols"] or n_rows != header["nrows"]:
        raise AsciiGridError("ncols/nrows must be integers")
    if n_cols <= 0 or n_rows <= 0:
        raise AsciiGridError("ncols/nrows must be positive")
    if header["cellsize"] <= 0:
        raise AsciiGridError("cellsize must be > 0")
    nodata_value = header.get("nodata_value")

    data_lines = lines[data_start:]
    if len(data_lines) != n_rows:
        raise AsciiGridError(
            f"expected {n_rows} data rows, found {len(data_lines)}",
            data_lines[-1][0] if data_lines else lines[data_start - 1][0],
        )

    values = np.zeros((n_rows, n_cols), dtype=np.float64)
    mask = np.zeros((n_rows, n_cols), dtype=bool)
    for r, (lineno, tokens) in enumerate(data_lines):
        if len(tokens) != n_cols:
            raise AsciiGridError(
                f"data row has {len(tokens)} values, expected {n_cols}", lineno
            )
        for c, tok in enumerate(tokens):
            try:
                v = float(tok)
            except ValueError:
                raise AsciiGridError(f"non-numeric token '{tok}'", lineno, c + 1) from None
            if nodata_value is not None and v == nodata_value:
                mask[r, c] = True
                continue
            if not np.isfinite(v):
                raise AsciiGridError(f"non-finite value '{tok}'", lineno, c + 1)
            if v < 0:
                raise AsciiGridError(f"negative thickness {tok}", lineno, c + 1)
            values[r, c] = v

    if mask.all():
        raise AsciiGridError("all cells are nodata")

    return HeightField(
        year_label=year_label,
        n_rows=n_rows,
        n_cols=n_cols,
        origin_lon=header["xllcorner"],
        origin_lat=header["yllcorner"],
        cell_size=header["cellsize"],
        values=values,
        nodata=mask,
    )


def format_ascii_grid(field: HeightField, nodata_value: float = DEFAULT_NODATA) -> str:
    """Serialize a HeightField back to ESRI ASCII text.

    Float values are written with repr so that parse(format(f)) == f exactly.
    """
    out = [
        f"ncols {field.n_cols}",
        f"nrows {field.n_rows}",
        f"xllcorner {field.origin_lon!r}",
        f"yllcorner {field.origin_lat!r}",
        f"cellsize {field.cell_size!r}",
        f"NODATA_value {nodata_value!r}",
    ]
    for r in range(field.n_rows):
        row = [
            repr(nodata_value) if field.nodata[r, c] else repr(float(field.values[r, c]))
            for c in range(field.n_cols)
        ]
        out.append(" ".join(row))
    return "\n".join(out) + "\n"


def read_ascii_grid(path: str | Path, year_label: str | None = None) -> HeightField:
    path = Path(path)
    label = year_label if year_label is not None else path.stem
    return parse_ascii_grid(path.read_text(), label)


def write_ascii_grid(field: HeightField, path: str | Path) -> None:
    Path(path).write_text(format_ascii_grid(field))


def validate_dataset(fields: Iterable[HeightField]) -> Dataset:
    """Combine per-year fields into a Dataset, enforcing the shared-grid rule.

    Input order is preserved and taken as chronological. Raises DatasetError
    for fewer than two fields, mismatched grids, or duplicate year labels.
    """
    fields = tuple(fields)
    if len(fields) < 2:
        raise DatasetError("at least 2 study years required")
    labels = [f.year_label for f in fields]
    if len(set(labels)) != len(labels):
        dupes = sorted({l for l in labels if labels.count(l) > 1})
        raise DatasetError(f"duplicate year label(s): {', '.join(dupes)}")
    ref = fields[0].grid_key()
    for f in fields[1:]:
        if f.grid_key() != ref:
            raise DatasetError(
                f"grid mismatch: '{f.year_label}' has {f.grid_key()}, "
                f"'{fields[0].year_label}' has {ref}"
            )
    global_min = min(f.min_value() for f in fields)
    global_max = max(f.max_value() for f in fields)
    return Dataset(fields=fields, global_min=global_min, global_max=global_max)


def subset_dataset(dataset: Dataset, year_labels: Sequence[str]) -> Dataset:
    """Dataset restricted to the given years, order preserved from the input.

    Global extremes are recomputed over the subset, so scenes built from it
    normalize against what is actually displayed.
    """
    return validate_dataset(dataset.field(y) for y in year_labels)


# Synthetic stand-in grids are placed over the Southern High Plains so demo
# coordinates look like the real data's lon/lat ranges.
SYNTH_ORIGIN_LON = -103.0
SYNTH_ORIGIN_LAT = 33.0
SYNTH_CELL_SIZE = 0.05


def synthesize_field(
    seed: int,
    n_rows: int = 64,
    n_cols: int = 64,
    n_bumps: int = 6,
    max_height: float = 100.0,
    year_label: str | None = None,
) -> HeightField:
    """Deterministic synthetic terrain: a sum of smooth radial bumps.

    The field is rescaled so its maximum equals max_height (n_bumps=0 yields
    a flat zero field). Bump widths are kept >= 2.5 cells so adjacent-cell
    differences stay well under max_height/2.
    """
    if n_rows < 8 or n_cols < 8:
        raise ValueError("synthetic grids must be at least 8x8")
    if max_height <= 0:
        raise ValueError("max_height must be > 0")
    if n_bumps < 0:
        raise ValueError("n_bumps must be >= 0")

    rng = np.random.default_rng(seed)
    rows = np.arange(n_rows, dtype=np.float64)[:, None]
    cols = np.arange(n_cols, dtype=np.float64)[None, :]
    field = np.zeros((n_rows, n_cols), dtype=np.float64)

    min_dim = min(n_rows, n_cols)
    sigma_lo = max(2.5, min_dim / 10.0)
    sigma_hi = max(sigma_lo + 1.0, min_dim / 4.0)
    for _ in range(n_bumps):
        cr = rng.uniform(0, n_rows - 1)
        cc = rng.uniform(0, n_cols - 1)
        sigma = rng.uniform(sigma_lo, sigma_hi)
        amp = rng.uniform(0.35, 1.0)
        d2 = (rows - cr) ** 2 + (cols - cc) ** 2
        field += amp * np.exp(-d2 / (2.0 * sigma * sigma))

    peak = field.max()
    if peak > 0:
        field *= max_height / peak

    return HeightField(
        year_label=year_label if year_label is not None else f"synthetic-{seed}",
        n_rows=n_rows,
        n_cols=n_cols,
        origin_lon=SYNTH_ORIGIN_LON,
        origin_lat=SYNTH_ORIGIN_LAT,
        cell_size=SYNTH_CELL_SIZE,
        values=field,
        nodata=np.zeros((n_rows, n_cols), dtype=bool),
    )


DEMO_YEAR_LABELS = ("2010", "2012", "2014", "2016")


def synthesize_dataset(
    seed: int,
    n_years: int = 4,
    n_rows: int = 64,
    n_cols: int = 64,
    n_bumps: int = 6,
    max_height: float = 100.0,
) -> Dataset:
    """N-year synthetic dataset; per-year seeds derive from the master seed."""
    if n_years < 2:
        raise DatasetError("at least 2 study years required")
    labels = [
        DEMO_YEAR_LABELS[i] if i < len(DEMO_YEAR_LABELS) else f"year-{i}"
        for i in range(n_years)
    ]
    fields = [
        synthesize_field(seed * 1000 + i, n_rows, n_cols, n_bumps, max_height, labels[i])
        for i in range(n_years)
    ]
    return validate_dataset(fields)


def load_dataset_manifest(manifest_path: str | Path) -> Dataset:
    """Load a dataset from a JSON manifest of {year_label, path} entries.

    Paths are resolved relative to the manifest's directory; entry order is
    chronological.
    """
    manifest_path = Path(manifest_path)
    try:
        entries = json.loads(manifest_path.read_text())
    except FileNotFoundError:
        raise DatasetError(f"no dataset manifest at {manifest_path}") from None
    except json.JSONDecodeError as e:
        raise DatasetError(f"manifest is not valid JSON: {e}") from None
    if not isinstance(entries, list) or not entries:
        raise DatasetError("manifest must be a non-empty JSON list")
    fields = []
    for i, entry in enumerate(entries):
        if not isinstance(entry, dict) or "year_label" not in entry or "path" not in entry:
            raise DatasetError(f"manifest entry {i} needs 'year_label' and 'path'")
        grid_path = manifest_path.parent / entry["path"]
        if not grid_path.exists():
            raise DatasetError(f"manifest entry {i}: no such file {grid_path}")
        fields.append(read_ascii_grid(grid_path, entry["year_label"]))
    return validate_dataset(fields)


def write_dataset(dataset: Dataset, out_dir: str | Path) -> Path:
    """Write per-year .asc files plus manifest.json; returns the manifest path."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    entries = []
    for f in dataset.fields:
        name = f"{f.year_label}.asc"
        write_ascii_grid(f, out_dir / name)
        entries.append({"year_label": f.year_label, "path": name})
    manifest = out_dir / "manifest.json"
    manifest.write_text(json.dumps(entries, indent=2, sort_keys=True) + "\n")
    return manifest
