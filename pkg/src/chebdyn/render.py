"""Bit-exact PPM rendering of basin rasters."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .basins import NONCONV, BasinRaster

SHADING_MODES = ("none", "iteration")


@dataclass(frozen=True)
class Palette:
    basin_colors: tuple
    nonconv_color: tuple = (0, 0, 0)
    shading: str = "iteration"

    def __post_init__(self):
        if self.shading not in SHADING_MODES:
            raise ValueError(f"shading must be one of {SHADING_MODES}")
        for c in (*self.basin_colors, self.nonconv_color):
            if len(c) != 3 or any(not 0 <= int(v) <= 255 for v in c):
                raise ValueError(f"bad RGB triple {c!r}")


def _round_half_up(x: Fraction) -> int:
    return int((x + Fraction(1, 2)) // 1)


def hsv_to_rgb8(h_deg: Fraction, s: Fraction, v: Fraction) -> tuple[int, int, int]:
    """Sector-formula HSV to 8-bit RGB using exact rationals."""
    h = Fraction(h_deg) % 360
    s, v = Fraction(s), Fraction(v)
    c = v * s
    hp = h / 60
    x = c * (1 - abs(hp % 2 - 1))
    sector = int(hp)
    r, g, b = [(c, x, 0), (x, c, 0), (0, c, x), (0, x, c), (x, 0, c), (c, 0, x)][sector]
    m = v - c
    return tuple(_round_half_up((Fraction(t) + m) * 255) for t in (r, g, b))


def default_palette(k: int, shading: str = "iteration") -> Palette:
    """``k`` evenly spaced hues at saturation 0.9 and value 0.95; black for NONCONV."""
    if k < 1:
        raise ValueError("palette needs k >= 1")
    s, v = Fraction(9, 10), Fraction(19, 20)
    colors = tuple(hsv_to_rgb8(Fraction(360 * i, k), s, v) for i in range(k))
    return Palette(colors, (0, 0, 0), shading)


def ppm_header(width: int, height: int) -> bytes:
    return f"P6\n{width} {height}\n255\n".encode("ascii")


def render_rgb(raster: BasinRaster, palette: Palette) -> np.ndarray:
    """``(height, width, 3)`` uint8 image."""
    k = len(raster.attractors)
    if len(palette.basin_colors) < k:
        raise ValueError(f"palette has {len(palette.basin_colors)} colours for {k} attractors")
    table = np.array(list(palette.basin_colors) + [palette.nonconv_color], dtype=np.int64)
    lab = np.where(raster.labels == NONCONV, len(palette.basin_colors), raster.labels)
    rgb = table[lab]
    if palette.shading == "iteration":
        M = int(raster.max_iter)
        if M <= 0:
            raise ValueError("max_iter must be positive for iteration shading")
        it = np.minimum(raster.iters.astype(np.int64), M)
        # s = 1 - 0.45 it/M = (100M - 45 it) / (100M); round half-up exactly
        num = rgb * (100 * M - 45 * it)[..., None]
        rgb = (2 * num + 100 * M) // (200 * M)
    return rgb.astype(np.uint8)


def encode_ppm(rgb: np.ndarray) -> bytes:
    rgb = np.ascontiguousarray(rgb, dtype=np.uint8)
    if rgb.ndim != 3 or rgb.shape[2] != 3:
        raise ValueError("expected an (height, width, 3) array")
    h, w, _ = rgb.shape
    return ppm_header(w, h) + rgb.tobytes()


def render_ppm(raster: BasinRaster, palette: Palette | None = None) -> bytes:
    palette = palette or default_palette(len(raster.attractors))
    return encode_ppm(render_rgb(raster, palette))


def read_ppm(data: bytes) -> np.ndarray:
    """Parse a binary P6 image with maxval 255 (comments allowed)."""
    pos = 0
    tokens = []
    while len(tokens) < 4:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b"#":
            pos += 1
        if start == pos:
            raise ValueError("truncated PPM header")
        tokens.append(data[start:pos])
    if tokens[0] != b"P6":
        raise ValueError(f"not a P6 image: {tokens[0]!r}")
    w, h, maxval = (int(t) for t in tokens[1:])
    if maxval != 255:
        raise ValueError("only maxval 255 is supported")
    pos += 1  # single whitespace byte after maxval
    payload = data[pos:]
    if len(payload) != 3 * w * h:
        raise ValueError(f"payload has {len(payload)} bytes, expected {3 * w * h}")
    return np.frombuffer(payload, dtype=np.uint8).reshape(h, w, 3)
