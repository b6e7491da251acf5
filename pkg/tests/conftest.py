import numpy as np
import pytest

from surfstudy import HeightField, synthesize_dataset, validate_dataset


def make_field(values, nodata=None, year_label="2010",
               origin_lon=0.0, origin_lat=0.0, cell_size=1.0):
    values = np.asarray(values, dtype=np.float64)
    if nodata is None:
        nodata = np.zeros(values.shape, dtype=bool)
    else:
        nodata = np.asarray(nodata, dtype=bool)
    clean = np.where(nodata, 0.0, values)
    return HeightField(
        year_label=year_label,
        n_rows=values.shape[0],
        n_cols=values.shape[1],
        origin_lon=origin_lon,
        origin_lat=origin_lat,
        cell_size=cell_size,
        values=clean,
        nodata=nodata,
    )


def make_dataset(per_year_values, labels=None, **kwargs):
    labels = labels or [str(2010 + 2 * i) for i in range(len(per_year_values))]
    return validate_dataset(
        make_field(v, year_label=l, **kwargs) for v, l in zip(per_year_values, labels)
    )


@pytest.fixture(scope="session")
def demo_dataset():
    return synthesize_dataset(7)
