import numpy as np
import pytest

from surfstudy import EmptyMeshError, SurfaceMesh, projected_area, triangulate
from surfstudy.colors import value_ramp
from surfstudy.mesh import NEUTRAL_COLOR

from conftest import make_field


def test_single_cell_two_triangles():
    f = make_field([[1.0, 2.0], [3.0, 4.0]], cell_size=0.5)
    m = triangulate(f, 2.0)
    assert m.n_vertices == 4
    assert m.n_triangles == 2
    # vertex at grid (row, col) sits at origin + (col, row) * cell_size
    expect_xy = {(0.0, 0.0), (0.5, 0.0), (0.0, 0.5), (0.5, 0.5)}
    assert {(x, y) for x, y in m.vertices[:, :2]} == expect_xy
    assert np.array_equal(m.vertices[:, 2], m.vertex_value * 2.0)


def test_fixed_diagonal_split():
    f = make_field([[1.0, 2.0], [3.0, 4.0]])
    m = triangulate(f, 1.0)
    # both triangles share the v00-v11 diagonal
    edges = [frozenset(e) for t in m.triangles for e in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0]))]
    shared = {e for e in edges if edges.count(e) == 2}
    assert len(shared) == 1
    a, b = sorted(shared.pop())
    assert tuple(m.vertices[a, :2]) == (0.0, 0.0)
    assert tuple(m.vertices[b, :2]) == (1.0, 1.0)


def test_winding_counter_clockwise_from_above():
    f = make_field([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0], [7.0, 8.0, 9.0]])
    m = triangulate(f, 1.0)
    a = m.vertices[m.triangles[:, 0], :2]
    b = m.vertices[m.triangles[:, 1], :2]
    c = m.vertices[m.triangles[:, 2], :2]
    cross = (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0])
    assert np.all(cross > 0)


def test_nodata_corner_drops_cell():
    f = make_field(
        [[1.0, 2.0, 3.0], [4.0, 5.0, 6.0], [7.0, 8.0, 9.0]],
        nodata=[[True, False, False], [False, False, False], [False, False, False]],
    )
    m = triangulate(f, 1.0)
    assert m.n_vertices == 8
    assert m.n_triangles == 2 * 3


def test_single_cell_with_nodata_corner_is_empty():
    f = make_field([[1.0, 2.0], [3.0, 4.0]], nodata=[[True, False], [False, False]])
    with pytest.raises(EmptyMeshError):
        triangulate(f, 1.0)


def test_flat_field_area():
    f = make_field(np.zeros((3, 3)), cell_size=1.0)
    m = triangulate(f, 1.0)
    assert np.all(m.vertices[:, 2] == 0.0)
    assert projected_area(m) == pytest.approx(4.0, abs=1e-12)


def test_projected_area_single_right_triangle():
    m = SurfaceMesh(
        vertices=[[0.0, 0.0, 3.0], [1.0, 0.0, 3.0], [0.0, 1.0, 3.0]],
        triangles=[[0, 1, 2]],
        vertex_value=[3.0, 3.0, 3.0],
        vertex_color=np.tile(NEUTRAL_COLOR, (3, 1)),
        z_scale=1.0,
    )
    assert projected_area(m) == pytest.approx(0.5, abs=1e-15)


def test_projected_area_ignores_z_scale():
    f = make_field([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0], [7.0, 8.0, 9.0]], cell_size=0.3)
    assert projected_area(triangulate(f, 1.0)) == projected_area(triangulate(f, 250.0))


def test_counts_follow_valid_cells():
    nodata = np.zeros((4, 4), dtype=bool)
    nodata[1, 1] = True
    f = make_field(np.arange(16, dtype=float).reshape(4, 4), nodata=nodata)
    m = triangulate(f, 1.0)
    assert m.n_vertices == 15
    # the nodata point kills the 4 cells that touch it
    assert m.n_triangles == 2 * (9 - 4)


def test_z_scale_must_be_positive():
    f = make_field([[1.0, 2.0], [3.0, 4.0]])
    with pytest.raises(ValueError):
        triangulate(f, 0.0)


def test_color_modes():
    vals = [[0.0, 5.0], [10.0, 2.0]]
    f = make_field(vals)
    neutral = triangulate(f, 1.0)
    assert np.allclose(neutral.vertex_color, NEUTRAL_COLOR)

    fixed = triangulate(f, 1.0, color=(0.2, 0.4, 0.6))
    assert np.allclose(fixed.vertex_color, (0.2, 0.4, 0.6))

    ramped = triangulate(f, 1.0, color=value_ramp(0.0, 10.0))
    lum = ramped.vertex_color @ np.array([0.2126, 0.7152, 0.0722])
    order = np.argsort(ramped.vertex_value)
    assert np.all(np.diff(lum[order]) <= 0)


def test_mesh_arrays_immutable():
    f = make_field([[1.0, 2.0], [3.0, 4.0]])
    m = triangulate(f, 1.0)
    with pytest.raises(ValueError):
        m.vertices[0, 0] = 9.0


def test_mesh_rejects_bad_indices_and_degenerate_triangles():
    kwargs = dict(vertex_value=[1.0, 1.0, 1.0], vertex_color=np.ones((3, 3)), z_scale=1.0)
    with pytest.raises(ValueError):
        SurfaceMesh(vertices=np.ones((3, 3)), triangles=[[0, 1, 5]], **kwargs)
    with pytest.raises(ValueError):
        SurfaceMesh(
            vertices=[[0.0, 0.0, 1.0], [1.0, 0.0, 1.0], [2.0, 0.0, 1.0]],
            triangles=[[0, 1, 2]],
            **kwargs,
        )


def test_mesh_z_consistency_enforced():
    with pytest.raises(ValueError):
        SurfaceMesh(
            vertices=[[0.0, 0.0, 99.0], [1.0, 0.0, 1.0], [0.0, 1.0, 1.0]],
            triangles=[[0, 1, 2]],
            vertex_value=[1.0, 1.0, 1.0],
            vertex_color=np.ones((3, 3)),
            z_scale=1.0,
        )
