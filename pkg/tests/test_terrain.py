import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from uavmoead.terrain import (
    DEMParseError,
    DomainError,
    MountainObstacle,
    MountainSpec,
    Prism,
    TerrainError,
    TerrainGrid,
    UrbanSpec,
    base_surface,
    elevation_at,
    elevations_at,
    grid_points_within,
    load_dem,
    obstacle_surface,
    random_mountain_spec,
    random_urban_spec,
    save_dem,
    synth_mountain,
    synth_urban,
)


def test_base_surface_at_origin():
    # sin(3*pi) vanishes; 0.3*cos(0) + 0.9*cos(0) remains
    assert base_surface(0.0, 0.0) == pytest.approx(1.2, abs=1e-12)


def test_obstacle_peak_at_center():
    ob = MountainObstacle((30.0, 40.0), 250.0, 7.0, 9.0)
    assert obstacle_surface(30.0, 40.0, [ob]) == pytest.approx(250.0)


def test_obstacle_bump_decays_symmetrically():
    ob = MountainObstacle((50.0, 50.0), 100.0, 10.0, 10.0)
    left = obstacle_surface(40.0, 50.0, [ob])
    right = obstacle_surface(60.0, 50.0, [ob])
    assert left == pytest.approx(right)
    assert left == pytest.approx(100.0 * math.exp(-1.0))


def test_no_obstacles_gives_base_surface():
    g = synth_mountain(MountainSpec(), (11, 13), 2.5)
    xs, ys = g.node_coordinates()
    gx, gy = np.meshgrid(xs, ys)
    np.testing.assert_array_equal(g.elevations, base_surface(gx, gy))


def test_mountain_is_at_least_base(rng):
    spec = random_mountain_spec(rng, 5, 100.0, 50.0)
    g = synth_mountain(spec, (41, 41), 2.5)
    xs, ys = g.node_coordinates()
    gx, gy = np.meshgrid(xs, ys)
    assert np.all(g.elevations >= base_surface(gx, gy))
    assert g.elevations.max() > 10.0


def test_mountain_rejects_bad_obstacles():
    with pytest.raises(TerrainError):
        synth_mountain(MountainSpec(obstacles=(MountainObstacle((5, 5), -1.0, 1, 1),)), (5, 5), 1.0)
    with pytest.raises(TerrainError):
        synth_mountain(MountainSpec(obstacles=(MountainObstacle((50, 5), 1.0, 1, 1),)), (5, 5), 1.0)


def test_urban_single_prism_and_outside():
    spec = UrbanSpec((Prism(2.0, 2.0, 6.0, 6.0, 40.0),))
    g = synth_urban(spec, (11, 11), 1.0)
    assert elevation_at(g, 4.0, 4.0) == 40.0
    assert elevation_at(g, 9.0, 9.0) == 0.0


def test_urban_overlap_takes_max():
    spec = UrbanSpec((Prism(0.0, 0.0, 6.0, 6.0, 30.0), Prism(3.0, 3.0, 9.0, 9.0, 50.0)))
    g = synth_urban(spec, (11, 11), 1.0)
    assert elevation_at(g, 4.0, 4.0) == 50.0
    assert elevation_at(g, 1.0, 1.0) == 30.0


def test_urban_zero_outside_all_dilated_prisms(rng):
    spec = random_urban_spec(rng, 6, 200.0, 100.0, protected_width=4.0)
    g = synth_urban(spec, (101, 101), 2.0)
    xs, ys = g.node_coordinates()
    gx, gy = np.meshgrid(xs, ys)
    covered = np.zeros(g.shape, dtype=bool)
    for p in spec.prisms:
        covered |= (gx >= p.x_min - 4.0) & (gx <= p.x_max + 4.0) & (gy >= p.y_min - 4.0) & (gy <= p.y_max + 4.0)
    assert np.all(g.elevations[~covered] == 0.0)
    assert np.all(g.elevations[covered] > 0.0)


def test_protected_width_grows_footprint():
    prism = Prism(4.0, 4.0, 6.0, 6.0, 10.0)
    bare = synth_urban(UrbanSpec((prism,)), (11, 11), 1.0)
    grown = synth_urban(UrbanSpec((prism,), protected_width=1.0), (11, 11), 1.0)
    assert np.count_nonzero(bare.elevations) == 9
    assert np.count_nonzero(grown.elevations) == 25


def test_grid_is_read_only():
    g = TerrainGrid(np.zeros((3, 3)), 1.0)
    with pytest.raises(ValueError):
        g.elevations[0, 0] = 1.0


@pytest.mark.parametrize("bad", [np.zeros((1, 4)), np.zeros(4), np.full((2, 2), np.nan)])
def test_grid_rejects_bad_arrays(bad):
    with pytest.raises(TerrainError):
        TerrainGrid(bad, 1.0)


# ---------------------------------------------------------------------------
# Queries
# ---------------------------------------------------------------------------


def test_query_on_node_returns_node_value(rng):
    z = rng.random((6, 7))
    g = TerrainGrid(z, 3.0, (10.0, -5.0))
    for r in range(6):
        for c in range(7):
            assert elevation_at(g, 10.0 + 3 * c, -5.0 + 3 * r) == pytest.approx(z[r, c], abs=1e-12)


def test_bilinear_cell_midpoint():
    # corners 0,0 on the south edge and 4,4 on the north edge
    g = TerrainGrid(np.array([[0.0, 0.0], [4.0, 4.0]]), 1.0)
    assert elevation_at(g, 0.5, 0.5) == pytest.approx(2.0)


def test_bilinear_matches_scipy(rng):
    from scipy.interpolate import RegularGridInterpolator

    z = rng.random((9, 12)) * 100
    g = TerrainGrid(z, 2.0, (1.0, 3.0))
    xs, ys = g.node_coordinates()
    ref = RegularGridInterpolator((ys, xs), z, method="linear")
    qx = rng.uniform(xs[0], xs[-1], 500)
    qy = rng.uniform(ys[0], ys[-1], 500)
    np.testing.assert_allclose(elevations_at(g, qx, qy), ref(np.column_stack([qy, qx])), rtol=0, atol=1e-10)


@pytest.mark.parametrize("x,y", [(-0.01, 1.0), (1.0, 9.5), (float("nan"), 1.0)])
def test_query_outside_raises(x, y):
    g = TerrainGrid(np.zeros((5, 5)), 2.0)
    with pytest.raises(DomainError):
        elevation_at(g, x, y)


@given(st.integers(0, 4), st.floats(0, 1), st.floats(0, 8))
def test_continuity_across_vertical_cell_edges(c, frac, y):
    z = np.arange(30, dtype=float).reshape(5, 6) ** 1.5
    g = TerrainGrid(z, 2.0)
    edge = 2.0 * c + 2.0
    eps = 1e-12
    below = elevation_at(g, edge - eps, y)
    above = elevation_at(g, min(edge + eps, 10.0), y)
    assert below == pytest.approx(above, abs=1e-9)


def test_points_within_empty_when_radius_small():
    g = TerrainGrid(np.zeros((5, 5)), 10.0)
    assert grid_points_within(g, (15.0, 15.0), 4.0).shape == (0, 3)


def test_points_within_node_and_axis_neighbours():
    g = TerrainGrid(np.zeros((5, 5)), 10.0)
    pts = grid_points_within(g, (20.0, 20.0), 10.0)
    assert sorted(map(tuple, pts[:, :2])) == [(10.0, 20.0), (20.0, 10.0), (20.0, 20.0), (20.0, 30.0), (30.0, 20.0)]


def test_points_within_whole_grid():
    g = TerrainGrid(np.ones((4, 6)), 1.0)
    assert len(grid_points_within(g, (2.5, 1.5), 100.0)) == 24


@given(st.integers(2, 50), st.integers(2, 50), st.floats(-5, 60), st.floats(-5, 60), st.floats(0.1, 30))
def test_points_within_matches_brute_force(rows, cols, cx, cy, radius):
    z = np.add.outer(np.arange(rows), np.arange(cols)).astype(float)
    g = TerrainGrid(z, 1.0)
    got = {tuple(p) for p in grid_points_within(g, (cx, cy), radius)}
    want = {(float(c), float(r), z[r, c]) for r in range(rows) for c in range(cols)
            if (c - cx) ** 2 + (r - cy) ** 2 <= radius ** 2}
    assert got == want


# ---------------------------------------------------------------------------
# ASCII grid I/O
# ---------------------------------------------------------------------------


def test_load_small_dem(tmp_path):
    f = tmp_path / "g.asc"
    f.write_text("ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 5\nNODATA_value -9999\n1 2\n3 4\n")
    g = load_dem(f)
    assert g.cell_size == 5.0
    # the file lists the north row first
    np.testing.assert_array_equal(g.elevations, [[3.0, 4.0], [1.0, 2.0]])
    assert elevation_at(g, 0.0, 5.0) == 1.0


def test_dem_short_row(tmp_path):
    f = tmp_path / "g.asc"
    f.write_text("ncols 3\nnrows 2\ncellsize 1\n1 2 3\n4 5\n")
    with pytest.raises(DEMParseError) as err:
        load_dem(f)
    assert err.value.line == 5


def test_dem_empty_file(tmp_path):
    f = tmp_path / "g.asc"
    f.write_text("")
    with pytest.raises(DEMParseError):
        load_dem(f)


def test_dem_bad_token_reports_column(tmp_path):
    f = tmp_path / "g.asc"
    f.write_text("ncols 2\nnrows 2\ncellsize 1\n1 x\n3 4\n")
    with pytest.raises(DEMParseError) as err:
        load_dem(f)
    assert (err.value.line, err.value.column) == (4, 2)


def test_dem_nodata_rejected(tmp_path):
    f = tmp_path / "g.asc"
    f.write_text("ncols 2\nnrows 2\ncellsize 1\nNODATA_value -9999\n1 -9999\n3 4\n")
    with pytest.raises(DEMParseError, match="NODATA"):
        load_dem(f)


def test_dem_round_trip_is_exact(tmp_path, rng):
    g = TerrainGrid(rng.normal(size=(7, 9)) * 1e3, 0.1, (123.456, -7.25))
    save_dem(g, tmp_path / "a.asc")
    back = load_dem(tmp_path / "a.asc")
    np.testing.assert_array_equal(back.elevations, g.elevations)
    assert back.origin == g.origin and back.cell_size == g.cell_size
    save_dem(back, tmp_path / "b.asc")
    assert (tmp_path / "a.asc").read_bytes() == (tmp_path / "b.asc").read_bytes()
