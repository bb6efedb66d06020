"""Polynomial symmetry groups and raster-based Julia symmetry tests."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce as _fold

import numpy as np

from .basins import NONCONV, BasinRaster, julia_band
from .poly import Polynomial, PolynomialError
from .scaling import AffineMap, centroid, normalize

MISMATCH_THRESHOLD = 0.01
LINE_THRESHOLD = 0.01
TRANSLATION_THRESHOLD = 0.99
ZERO_COEFF_RTOL = 1e-10
MIN_LINE_PIXELS = 100


@dataclass(frozen=True)
class SymmetryGroup:
    """Cyclic rotation group ``z -> center + exp(2 pi i k/order) (z - center)``."""

    center: complex
    order: int

    def __post_init__(self):
        if int(self.order) < 1:
            raise ValueError("group order must be >= 1")

    @property
    def trivial(self) -> bool:
        return self.order == 1

    def elements(self) -> list[AffineMap]:
        c = complex(self.center)
        out = []
        for k in range(self.order):
            w = complex(np.exp(2j * np.pi * k / self.order))
            out.append(AffineMap(w, c - w * c))
        return out


@dataclass(frozen=True)
class SymmetryReport:
    poly_group: SymmetryGroup
    julia_group_order: int
    julia_mismatch_rate: float
    line_residual: float
    translation_suspected: bool
    exploratory: bool = False


def _support_order(g: Polynomial) -> int:
    c = g.coeffs
    d = g.degree
    lower = [(j, abs(c[j])) for j in range(d)]
    rho = max(a ** (1.0 / (d - j)) for j, a in lower)
    if rho == 0:
        raise PolynomialError("monomial input: the symmetry group is not finite")
    support = [d - j for j, a in lower if a > ZERO_COEFF_RTOL * rho ** (d - j)]
    return _fold(math.gcd, support)


def _rotation_residual(g: Polynomial, order: int, n: int = 20, seed: int = 0) -> float:
    """max ``|g(w z) - w^d g(z)|`` relative to the coefficient-magnitude bound."""
    rng = np.random.default_rng(seed)
    z = rng.uniform(-2, 2, n) + 1j * rng.uniform(-2, 2, n)
    w = np.exp(2j * np.pi / order)
    lhs = g(w * z)
    rhs = w ** g.degree * g(z)
    scale = np.maximum(g.abs_eval(z), 1.0)
    return float(np.max(np.abs(lhs - rhs) / scale))


def poly_symmetry_group(p: Polynomial) -> SymmetryGroup:
    """Rotations about the centroid preserving ``p`` up to ``sigma^d``.

    The order is ``gcd{d - j : g_j != 0}`` for the normalized conjugate
    ``g``; coefficients small relative to the root scale count as zero.
    """
    if p.degree < 2 or p.is_monomial():
        raise PolynomialError("monomial input: the symmetry group is not finite")
    g = normalize(p).g
    order = _support_order(g)
    for m in sorted((k for k in range(1, order + 1) if order % k == 0), reverse=True):
        if _rotation_residual(g, m) <= 1e-10:
            return SymmetryGroup(centroid(p), m)
    return SymmetryGroup(centroid(p), 1)


def symmetry_transport(S: SymmetryGroup, T: AffineMap) -> SymmetryGroup:
    """Conjugate group ``T S T^-1``: same order, centre ``T(center)``."""
    return SymmetryGroup(complex(T(S.center)), S.order)


# --------------------------------------------------------------------------
# raster tests

def _band_or_raise(raster: BasinRaster) -> np.ndarray:
    band = julia_band(raster)
    if not band.any():
        raise ValueError("degenerate raster: no Julia-band pixels")
    return band


def _disk_pixels(raster: BasinRaster, center: complex):
    """Pixel indices whose centres lie in the largest disk about ``center``
    that fits in the raster."""
    grid = raster.grid
    c = complex(center)
    xs, ys = grid.xs(), grid.ys()
    half_w = grid.half_extent
    half_h = grid.half_height
    g0 = complex(grid.center)
    radius = min(g0.real + half_w - c.real, c.real - (g0.real - half_w),
                 g0.imag + half_h - c.imag, c.imag - (g0.imag - half_h)) - grid.pixel_size
    if radius <= 0:
        raise ValueError("rotation centre lies outside the raster")
    z = xs[None, :] + 1j * ys[:, None]
    inside = np.abs(z - c) <= radius
    return inside, z


def _rotated_lookup(raster: BasinRaster, z: np.ndarray, center: complex, angle: float):
    w = complex(center) + np.exp(1j * angle) * (z - complex(center))
    i, j = raster.grid.pixel_of(w)
    ok = raster.grid.contains_pixel(i, j)
    return np.clip(i, 0, raster.grid.height - 1), np.clip(j, 0, raster.grid.width - 1), ok


def label_permutation(raster: BasinRaster, center: complex, m: int):
    """Attractor index each attractor goes to under rotation by ``2 pi/m``,
    or ``None`` if some rotated attractor is not near any attractor."""
    att = np.asarray(raster.attractors, dtype=complex)
    rot = complex(center) + np.exp(2j * np.pi / m) * (att - complex(center))
    tol = 2.0 * raster.grid.pixel_size
    perm = []
    for r in rot:
        d = np.abs(att - r)
        k = int(np.argmin(d))
        if d[k] > tol:
            return None
        perm.append(k)
    return perm


def rotation_mismatch(raster: BasinRaster, center: complex, m: int, band=None) -> tuple[float, float]:
    """``(band mismatch, label mismatch)`` for rotation by ``2 pi/m``.

    Band mismatch is the fraction of band pixels in the inscribed disk whose
    rotated centre's nearest pixel is not in the band.  Label mismatch is the
    fraction of labelled, non-band disk pixels whose rotated pixel does not
    carry the permuted label (1.0 if attractors do not permute).
    """
    band = _band_or_raise(raster) if band is None else band
    inside, z = _disk_pixels(raster, center)
    src = band & inside
    n_src = int(src.sum())
    if n_src == 0:
        raise ValueError("no Julia-band pixels inside the inscribed disk")
    i, j, _ = _rotated_lookup(raster, z[src], center, 2 * np.pi / m)
    band_mis = float(np.count_nonzero(~band[i, j])) / n_src

    perm = label_permutation(raster, center, m)
    if perm is None:
        return band_mis, 1.0
    lab = raster.labels
    sel = inside & ~band & (lab != NONCONV)
    n_sel = int(sel.sum())
    if n_sel == 0:
        return band_mis, 0.0
    i, j, _ = _rotated_lookup(raster, z[sel], center, 2 * np.pi / m)
    expected = np.asarray(perm, dtype=lab.dtype)[lab[sel]]
    label_mis = float(np.count_nonzero(lab[i, j] != expected)) / n_sel
    return band_mis, label_mis


def julia_symmetry_detect(raster: BasinRaster, center: complex, max_order: int = 12):
    """Largest ``m`` in ``2..max_order`` whose rotation passes both checks.

    Returns ``(order, mismatch_rate)``; order 1 means no rotation passed, and
    the rate reported is then the smallest band mismatch seen.
    """
    if max_order < 2:
        raise ValueError("max_order must be >= 2")
    band = _band_or_raise(raster)
    best, best_rate, min_rate = 1, 0.0, 1.0
    for m in range(2, max_order + 1):
        band_mis, label_mis = rotation_mismatch(raster, center, m, band)
        min_rate = min(min_rate, band_mis)
        if band_mis < MISMATCH_THRESHOLD and label_mis < MISMATCH_THRESHOLD:
            best, best_rate = m, band_mis
    return (best, best_rate) if best > 1 else (1, min_rate)


def reflection_mismatch(raster: BasinRaster, axis_x: float = 0.0) -> float:
    """Band mismatch under the mirror ``x -> 2 axis_x - x``."""
    band = _band_or_raise(raster)
    grid = raster.grid
    i, j = np.nonzero(band)
    z = grid.coords(i, j)
    w = (2 * axis_x - z.real) + 1j * z.imag
    mi, mj = grid.pixel_of(w)
    ok = grid.contains_pixel(mi, mj)
    if not ok.any():
        raise ValueError("mirror axis leaves the raster")
    return float(np.count_nonzero(~band[mi[ok], mj[ok]])) / int(ok.sum())


def line_test(raster: BasinRaster) -> float:
    """RMS orthogonal distance of band pixels to their best-fit line,
    divided by the raster half extent."""
    band = julia_band(raster)
    n = int(band.sum())
    if n < MIN_LINE_PIXELS:
        raise ValueError(f"line test needs >= {MIN_LINE_PIXELS} band pixels, got {n}")
    i, j = np.nonzero(band)
    z = raster.grid.coords(i, j)
    pts = np.column_stack([z.real, z.imag])
    pts -= pts.mean(axis=0)
    smallest = np.linalg.svd(pts, compute_uv=False)[-1]
    return float(smallest / math.sqrt(n) / raster.grid.half_extent)


def is_line(residual: float) -> bool:
    return residual < LINE_THRESHOLD


def translation_test(raster: BasinRaster, candidates) -> bool:
    """True if some shift carries >= 99% of band pixels onto band pixels.

    Only pixels whose shifted position stays inside the raster are counted.
    """
    candidates = [complex(c) for c in candidates]
    if not candidates:
        return False
    band = _band_or_raise(raster)
    grid = raster.grid
    i, j = np.nonzero(band)
    for v in candidates:
        di = -int(round(v.imag / grid.pixel_size))
        dj = int(round(v.real / grid.pixel_size))
        if di == 0 and dj == 0:
            return True
        ti, tj = i + di, j + dj
        ok = grid.contains_pixel(ti, tj)
        if not ok.any():
            continue
        if np.count_nonzero(band[ti[ok], tj[ok]]) >= TRANSLATION_THRESHOLD * int(ok.sum()):
            return True
    return False


DEFAULT_SHIFTS_FRACTION = (0.25, 0.25j, 0.125 + 0.125j)


def symmetry_report(p: Polynomial, raster: BasinRaster, max_order: int = 12,
                    shifts=None) -> SymmetryReport:
    """Polynomial group next to raster evidence for the Julia group.

    Default translation candidates are a quarter of the raster width along
    the axes and an eighth along the diagonal.
    """
    S = poly_symmetry_group(p)
    order, rate = julia_symmetry_detect(raster, S.center, max_order)
    if shifts is None:
        h = raster.grid.half_extent
        shifts = [s * 2 * h for s in DEFAULT_SHIFTS_FRACTION]
    return SymmetryReport(S, order, rate, line_test(raster),
                          translation_test(raster, shifts), exploratory=S.trivial)
