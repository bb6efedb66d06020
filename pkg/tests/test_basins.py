import math
from collections import deque

import numpy as np
import pytest

from chebdyn.basins import (NONCONV, GridSpec, border_components, compute_basins, connectivity,
                            default_grid, imaginary_axis_analysis, immediate_basins,
                            iterate_points, julia_band, real_landmarks, real_line_analysis,
                            unbounded_components)
from chebdyn.fixpoints import attractors, fixed_points
from chebdyn.method import chebyshev_map
from helpers import SHOWCASE, Z, bundle, raster
from synthetic import half_plane, make_raster


def bfs_components(mask, diag=True):
    """Independent 8- (or 4-) connected component sizes."""
    h, w = mask.shape
    seen = np.zeros_like(mask, dtype=bool)
    steps = [(di, dj) for di in (-1, 0, 1) for dj in (-1, 0, 1) if (di or dj)]
    if not diag:
        steps = [(-1, 0), (1, 0), (0, -1), (0, 1)]
    sizes = []
    for si in range(h):
        for sj in range(w):
            if not mask[si, sj] or seen[si, sj]:
                continue
            seen[si, sj] = True
            q, n = deque([(si, sj)]), 0
            while q:
                i, j = q.popleft()
                n += 1
                for di, dj in steps:
                    a, b = i + di, j + dj
                    if 0 <= a < h and 0 <= b < w and mask[a, b] and not seen[a, b]:
                        seen[a, b] = True
                        q.append((a, b))
            sizes.append(n)
    return sizes


# grid

def test_grid_geometry():
    g = GridSpec(1 + 1j, 2.0, 100, 50)
    assert g.pixel_size == 0.04 and g.half_height == 1.0
    z = g.coords(0, 0)
    assert abs(z - (1 - 2 + 0.02 + 1j * (1 + 1 - 0.02))) < 1e-12
    i, j = g.pixel_of(g.coords(np.arange(50), np.arange(50)))
    assert (i == np.arange(50)).all() and (j == np.arange(50)).all()
    with pytest.raises(ValueError):
        GridSpec(0, 1.0, 8, 8)
    with pytest.raises(ValueError):
        GridSpec(0, 0.0, 32, 32)


def test_default_grid():
    g = default_grid(chebyshev_map(Z ** 3 - 1), 300)
    assert g.center == 0 and abs(g.half_extent - 4) < 1e-12 and g.width == g.height == 300


# iteration

def test_point_examples():
    for name, z0, target in [("z^2-1", 2, 1), ("z(z^2-1)", 3j, 0), ("z(z^3-1)", -5, 0)]:
        b = bundle(name)
        att = attractors(fixed_points(b))
        lab, it = iterate_points(b, [z0], att)
        assert lab[0] != NONCONV and abs(att[lab[0]] - target) < 1e-12 and it[0] > 0


def test_start_on_attractor_and_pole():
    b = bundle("z(z^2-1)")
    att = attractors(fixed_points(b))
    lab, it = iterate_points(b, [att[0], 1 / math.sqrt(3)], att, max_iter=50)
    assert lab[0] == 0 and it[0] == 0
    assert it[1] >= 1  # the pole goes to the infinity proxy first


def test_nonconvergence_budget():
    b = bundle("z^2-1")
    lab, it = iterate_points(b, [1j], attractors(fixed_points(b)), max_iter=30)
    # the imaginary axis is invariant for this map and never reaches +-1
    assert lab[0] == NONCONV and it[0] == 30


def test_compute_basins_requires_attractors():
    b = bundle("z^2-1")
    with pytest.raises(ValueError):
        compute_basins(b, [], default_grid(b, 32))


@pytest.mark.parametrize("jobs,tile", [(1, 7), (3, 32), (4, 5), (2, 200)])
def test_determinism_over_tiling(jobs, tile):
    b = bundle("z(z^3-1)")
    att = attractors(fixed_points(b))
    grid = default_grid(b, 96)
    ref = compute_basins(b, att, grid)
    other = compute_basins(b, att, grid, n_jobs=jobs, tile_rows=tile)
    assert np.array_equal(ref.labels, other.labels)
    assert np.array_equal(ref.iters, other.iters)


def test_raster_is_read_only():
    b = bundle("z^2-1")
    r = compute_basins(b, attractors(fixed_points(b)), default_grid(b, 32))
    with pytest.raises(ValueError):
        r.labels[0, 0] = 3


# band and components

def test_band_empty_for_uniform_raster():
    r = make_raster(lambda z: np.zeros(z.shape), [0])
    assert not julia_band(r).any()
    with pytest.raises(ValueError):
        connectivity(r, [])


def test_band_half_plane():
    band = julia_band(half_plane())
    cols = np.nonzero(band.any(axis=0))[0]
    assert list(cols) == [99, 100] and band[:, 99].all()


def test_band_includes_nonconv():
    r = make_raster(lambda z: np.where(np.abs(z) < 0.1, NONCONV, 0), [1])
    assert julia_band(r)[100, 100]


def test_connectivity_two_squares():
    def fn(z):
        out = np.zeros(z.shape, int)
        out[(np.abs(z.real + 1) < 0.4) & (np.abs(z.imag) < 0.4)] = 1
        out[(np.abs(z.real - 1) < 0.4) & (np.abs(z.imag) < 0.4)] = 1
        return out
    r = make_raster(fn, [0, 0.9 + 1.9j])
    rep = connectivity(r, [])
    assert rep.julia_component_count == 2 and rep.raw_component_count == 2
    assert not rep.unbounded_component_exists
    assert len(bfs_components(julia_band(r))) == 2


def test_connectivity_noise_threshold():
    def fn(z):
        out = np.zeros(z.shape, int)
        out[(np.abs(z.real) < 0.5) & (np.abs(z.imag) < 0.5)] = 1
        out[(np.abs(z.real - 1.5) < 0.005) & (np.abs(z.imag - 1.5) < 0.005)] = 1
        return out
    r = make_raster(fn, [0, 0.01j], size=400)
    rep = connectivity(r, [])
    assert rep.noise_threshold_pixels == 16
    # a 2x2 island leaves a 12-pixel band crumb
    assert sorted(bfs_components(julia_band(r))) == [12, 796]
    assert rep.raw_component_count == 1
    assert rep.julia_component_count == 1


@pytest.mark.slow
@pytest.mark.parametrize("name", ["z^2-1", "z(z^2-1)"])
def test_raw_count_matches_bfs(name):
    r = raster(name, size=600)
    rep = connectivity(r, [])
    sizes = bfs_components(julia_band(r))
    assert rep.raw_component_count == sum(s >= rep.noise_threshold_pixels for s in sizes)


@pytest.mark.slow
@pytest.mark.parametrize("name", sorted(SHOWCASE))
def test_showcase_connectivity(name):
    b = bundle(name)
    rep = connectivity(raster(name), [w for w, _ in b.map.poles])
    assert rep.julia_component_count == 1
    assert rep.unbounded_component_exists and rep.poles_in_unbounded
    assert all(rep.immediate_basins_unbounded)
    assert rep.resolution == (600, 600)


@pytest.mark.slow
@pytest.mark.parametrize("name", sorted(SHOWCASE))
def test_nonconvergent_fraction(name):
    assert np.mean(raster(name).labels == NONCONV) < 0.01


@pytest.mark.slow
def test_unbounded_components_one_per_root():
    r = raster("z(z^3-1)")
    assert sorted(unbounded_components(r)) == [0, 1, 2, 3]
    assert border_components(r) > 4  # clipped preimage basins also touch the border


def test_immediate_basins_half_plane():
    masks, unb = immediate_basins(half_plane())
    assert unb == [True, True]
    assert masks[0].sum() + masks[1].sum() == 200 * 200
    with pytest.raises(ValueError):
        immediate_basins(half_plane(), [5 + 0j])


# real line

def test_real_line_quadratic_left():
    rep = real_line_analysis(bundle("z^2-1"), -10, -1)
    assert rep.increasing and rep.sign_of_step == 1
    assert rep.monotone_case == 1 and rep.predicted_limit == -1
    assert rep.converged and all(abs(v + 1) < 1e-9 for v in rep.orbit_limits)


def test_real_line_quartic_right():
    rep = real_line_analysis(bundle("z(z^3-1)"), 1, 10)
    assert rep.monotone_case == 2 and rep.predicted_limit == 1
    assert all(abs(v - 1) < 1e-9 for v in rep.orbit_limits)


def test_real_line_quartic_left_goes_to_zero():
    b = bundle("z(z^3-1)")
    rep = real_line_analysis(b, -10, -1e-3)
    assert rep.converged and all(abs(v) < 1e-9 for v in rep.orbit_limits)


def test_real_line_rejects_poles():
    with pytest.raises(ValueError):
        real_line_analysis(bundle("z(z^2-1)"), 0, 1)
    with pytest.raises(ValueError):
        real_line_analysis(bundle("z^2-1"), 1, 1)


def test_real_landmarks_quartic():
    lm = real_landmarks(bundle("z(z^3-1)"))
    c = -(1 / 14) ** (1 / 3)
    assert len(lm["free_critical"]) == 1 and abs(lm["free_critical"][0] - c) < 1e-10
    ext = sorted(((7 + s * 3 * math.sqrt(3)) / 22) ** (1 / 3) for s in (1, -1))
    assert np.allclose(lm["extraneous"], ext, atol=1e-10)
    assert np.allclose(lm["poles"], [0.25 ** (1 / 3)], atol=1e-10)
    b = bundle("z(z^3-1)")
    for z0 in lm["zeros"]:
        assert abs(b.map(complex(z0))) < 1e-10
    assert lm["zeros"][0] < c < 0 < lm["critical_values"][0] < ext[0] < lm["poles"][0] < lm["zeros"][-1] < ext[1]


# imaginary axis

def phi_cubic(y):
    # C(iy) = i phi(y) for p = z^3 - z
    q = 3 * y * y + 1
    return y - (1 + 3 * y * y * (y * y + 1) / q ** 2) * y * (y * y + 1) / q


@pytest.mark.parametrize("y", [0.05, 0.5, 2.0, -3.0])
def test_phi_closed_form(y):
    v = complex(bundle("z(z^2-1)").map(1j * y))
    assert abs(v.real) < 1e-12 and abs(v.imag - phi_cubic(y)) < 1e-12 * (1 + abs(v))


@pytest.mark.parametrize("name", ["z(z^2-1)", "z^2(z^2-1)"])
def test_imaginary_axis_orbits_reach_zero(name):
    rep = imaginary_axis_analysis(bundle(name), [-5, -0.7, 0.3, 1.0, 4.0])
    assert rep.axis_invariance_residual < 1e-12
    assert all(v is not None and abs(v) < 1e-9 for v in rep.limits)
    for orbit in rep.orbits:
        assert all(abs(a) >= abs(b) - 1e-15 for a, b in zip(orbit, orbit[1:]))


def test_imaginary_axis_requires_odd_map():
    with pytest.raises(ValueError):
        imaginary_axis_analysis(bundle("z^3-1"), [1.0])
