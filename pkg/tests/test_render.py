import hashlib
from fractions import Fraction

import numpy as np
import pytest

from chebdyn.basins import NONCONV, BasinRaster, GridSpec, compute_basins, default_grid
from chebdyn.fixpoints import attractors, fixed_points
from chebdyn.render import (Palette, default_palette, encode_ppm, hsv_to_rgb8, ppm_header,
                            read_ppm, render_ppm, render_rgb)
from helpers import bundle


def tiny(labels, iters, n_att, max_iter=200):
    labels = np.asarray(labels, dtype=np.int32)
    h, w = labels.shape
    grid = GridSpec(0, 1.0, 16, 16)
    object.__setattr__(grid, "width", w)
    object.__setattr__(grid, "height", h)
    return BasinRaster(grid, labels, np.asarray(iters, dtype=np.int32),
                       tuple(range(n_att)), max_iter, 1e-8)


def oracle_pixel(color, it, M):
    s = 1 - Fraction(45, 100) * Fraction(min(it, M), M)
    return tuple(int(Fraction(c) * s + Fraction(1, 2)) for c in color)


def test_palette_examples():
    assert default_palette(1).basin_colors == ((242, 24, 24),)
    assert default_palette(3).basin_colors == ((242, 24, 24), (24, 242, 24), (24, 24, 242))
    assert default_palette(2).nonconv_color == (0, 0, 0)
    with pytest.raises(ValueError):
        default_palette(0)


def test_hsv_conversion():
    assert hsv_to_rgb8(0, 0, 1) == (255, 255, 255)
    assert hsv_to_rgb8(0, 1, 1) == (255, 0, 0)
    assert hsv_to_rgb8(Fraction(60), 1, 1) == (255, 255, 0)
    assert hsv_to_rgb8(Fraction(240), 1, Fraction(1, 2)) == (0, 0, 128)  # 127.5 rounds up
    assert hsv_to_rgb8(360, 1, 1) == hsv_to_rgb8(0, 1, 1)


def test_palette_validation():
    with pytest.raises(ValueError):
        Palette(((256, 0, 0),))
    with pytest.raises(ValueError):
        Palette(((1, 2, 3),), shading="smooth")


def test_header_and_size():
    assert ppm_header(2, 1) == b"P6\n2 1\n255\n" and len(ppm_header(2, 1)) == 11
    r = tiny([[0, 1]], [[0, 0]], 2)
    data = render_ppm(r, default_palette(2, shading="none"))
    assert len(data) == 17
    assert data[11:] == bytes([242, 24, 24, 24, 242, 242])


def test_all_nonconv_is_black():
    r = tiny(np.full((4, 5), NONCONV), np.full((4, 5), 200), 2)
    rgb = render_rgb(r, default_palette(2))
    assert rgb.shape == (4, 5, 3) and not rgb.any()


def test_palette_too_small():
    r = tiny([[0, 1, 2]], [[0, 0, 0]], 3)
    with pytest.raises(ValueError):
        render_rgb(r, default_palette(2))


def test_shading_matches_exact_oracle():
    M = 37
    its = np.arange(0, M + 3).reshape(1, -1)
    r = tiny(np.zeros_like(its), its, 1, max_iter=M)
    rgb = render_rgb(r, default_palette(1))
    for j, it in enumerate(its[0]):
        assert tuple(rgb[0, j]) == oracle_pixel((242, 24, 24), int(it), M)


def test_shading_monotone():
    M = 200
    its = np.arange(0, M + 1).reshape(1, -1)
    rgb = render_rgb(tiny(np.zeros_like(its), its, 1, M), default_palette(1)).astype(int)
    assert (np.diff(rgb[0, :, 0]) <= 0).all()
    assert tuple(rgb[0, -1]) == oracle_pixel((242, 24, 24), M, M) == (133, 13, 13)


def test_round_trip():
    rng = np.random.default_rng(0)
    rgb = rng.integers(0, 256, size=(7, 9, 3), dtype=np.uint8)
    assert np.array_equal(read_ppm(encode_ppm(rgb)), rgb)
    commented = b"P6\n# made by hand\n9 7\n255\n" + rgb.tobytes()
    assert np.array_equal(read_ppm(commented), rgb)
    with pytest.raises(ValueError):
        read_ppm(b"P5\n1 1\n255\n\x00")
    with pytest.raises(ValueError):
        read_ppm(ppm_header(2, 2) + b"\x00" * 3)


def test_full_render_matches_oracle_and_is_stable():
    b = bundle("z^3-1")
    att = attractors(fixed_points(b))
    r = compute_basins(b, att, default_grid(b, 48))
    data = render_ppm(r)
    pal = default_palette(len(att))
    img = read_ppm(data)
    for i in range(0, 48, 7):
        for j in range(0, 48, 5):
            lab, it = int(r.labels[i, j]), int(r.iters[i, j])
            want = (0, 0, 0) if lab == NONCONV else oracle_pixel(pal.basin_colors[lab], it, 200)
            assert tuple(img[i, j]) == want
    again = render_ppm(compute_basins(b, att, default_grid(b, 48), n_jobs=3, tile_rows=5))
    assert hashlib.sha256(data).hexdigest() == hashlib.sha256(again).hexdigest()
