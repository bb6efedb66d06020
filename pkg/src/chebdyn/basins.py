"""Basin rasters, Julia band, connectivity and real/imaginary axis dynamics."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .method import MethodBundle
from .poly import eval_map_array, is_infinite

NONCONV = -1
INF_PROXY = 1e12
NOISE_AREA_FRACTION = 1e-4

FOUR = ndimage.generate_binary_structure(2, 1)
EIGHT = ndimage.generate_binary_structure(2, 2)


@dataclass(frozen=True)
class GridSpec:
    """Square-pixel viewport; ``half_extent`` is half the width in the plane."""

    center: complex
    half_extent: float
    width: int
    height: int

    def __post_init__(self):
        if self.width < 16 or self.height < 16:
            raise ValueError("grid must be at least 16x16 pixels")
        if not self.half_extent > 0:
            raise ValueError("half_extent must be positive")

    @property
    def pixel_size(self) -> float:
        return 2.0 * self.half_extent / self.width

    @property
    def half_height(self) -> float:
        return self.half_extent * self.height / self.width

    def xs(self) -> np.ndarray:
        c = complex(self.center)
        return c.real - self.half_extent + (np.arange(self.width) + 0.5) * self.pixel_size

    def ys(self) -> np.ndarray:
        # row 0 is the top of the image
        c = complex(self.center)
        return c.imag + self.half_height - (np.arange(self.height) + 0.5) * self.pixel_size

    def points(self, rows: slice = slice(None)) -> np.ndarray:
        return self.xs()[None, :] + 1j * self.ys()[rows, None]

    def coords(self, i, j):
        """Plane coordinates of pixel centres ``(row, col)``."""
        c = complex(self.center)
        x = c.real - self.half_extent + (np.asarray(j) + 0.5) * self.pixel_size
        y = c.imag + self.half_height - (np.asarray(i) + 0.5) * self.pixel_size
        return x + 1j * y

    def pixel_of(self, z):
        """Nearest ``(row, col)`` for plane points (float arrays, not clipped)."""
        z = np.asarray(z, dtype=complex)
        c = complex(self.center)
        j = np.floor((z.real - (c.real - self.half_extent)) / self.pixel_size)
        i = np.floor(((c.imag + self.half_height) - z.imag) / self.pixel_size)
        return i.astype(np.int64), j.astype(np.int64)

    def contains_pixel(self, i, j):
        return (i >= 0) & (i < self.height) & (j >= 0) & (j < self.width)


@dataclass(frozen=True, eq=False)
class BasinRaster:
    grid: GridSpec
    labels: np.ndarray
    iters: np.ndarray
    attractors: tuple
    max_iter: int
    tol: float


@dataclass(frozen=True)
class ConnectivityReport:
    julia_component_count: int
    unbounded_component_exists: bool
    poles_in_unbounded: bool
    immediate_basins_unbounded: tuple
    noise_threshold_pixels: int
    raw_component_count: int = 0
    resolution: tuple = field(default=(0, 0))


def default_grid(bundle: MethodBundle, width: int = 600, height: int | None = None,
                 root_locations=None) -> GridSpec:
    """Viewport centred at the centroid with half extent ``2 (1 + max |root|)``."""
    from .poly import roots
    from .scaling import centroid

    p = bundle.p
    locs = root_locations if root_locations is not None else [r for r, _ in roots(p)]
    half = 2.0 * (1.0 + max(abs(r) for r in locs))
    return GridSpec(centroid(p), half, width, height or width)


def _step(num, den, z: np.ndarray) -> np.ndarray:
    w = eval_map_array(num, den, z)
    inf = np.isinf(w.real) | np.isinf(w.imag)
    if inf.any():
        zi = z[inf]
        mag = np.abs(zi)
        direction = np.where(mag > 0, zi / np.where(mag > 0, mag, 1.0), 1.0)
        w[inf] = INF_PROXY * direction
    return w


def iterate_points(bundle: MethodBundle, z0, attractors, max_iter: int = 200, tol: float = 1e-8):
    """Label each start point by the first attractor its orbit comes within ``tol`` of.

    Returns ``(labels, iters)``; unconverged points get ``NONCONV`` and
    ``max_iter``.  Each point's arithmetic is independent of the others.
    """
    z0 = np.asarray(z0, dtype=complex).ravel()
    att = np.asarray(list(attractors), dtype=complex)
    num, den = bundle.map.num, bundle.map.den
    labels = np.full(z0.size, NONCONV, dtype=np.int32)
    iters = np.full(z0.size, max_iter, dtype=np.int32)
    idx = np.arange(z0.size)
    z = z0.copy()
    for step in range(max_iter + 1):
        if idx.size == 0:
            break
        d = np.abs(z[:, None] - att[None, :])
        best = np.argmin(d, axis=1)
        hit = d[np.arange(z.size), best] < tol
        if hit.any():
            labels[idx[hit]] = best[hit]
            iters[idx[hit]] = step
            keep = ~hit
            idx, z = idx[keep], z[keep]
        if step == max_iter or idx.size == 0:
            break
        z = _step(num, den, z)
    return labels, iters


def compute_basins(bundle: MethodBundle, attractors, grid: GridSpec, max_iter: int = 200,
                   tol: float = 1e-8, n_jobs: int = 1, tile_rows: int = 32) -> BasinRaster:
    """Iterate the map over every pixel centre of ``grid``.

    Work is split into row tiles; results are written by position, so the
    raster does not depend on ``n_jobs`` or ``tile_rows``.
    """
    att = tuple(complex(a) for a in attractors)
    if not att:
        raise ValueError("need at least one attractor")
    labels = np.empty((grid.height, grid.width), dtype=np.int32)
    iters = np.empty((grid.height, grid.width), dtype=np.int32)
    tiles = [slice(r, min(r + tile_rows, grid.height)) for r in range(0, grid.height, tile_rows)]

    def run(rows):
        lab, it = iterate_points(bundle, grid.points(rows), att, max_iter, tol)
        shape = (rows.stop - rows.start, grid.width)
        labels[rows] = lab.reshape(shape)
        iters[rows] = it.reshape(shape)

    if n_jobs == 1:
        for rows in tiles:
            run(rows)
    else:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            list(pool.map(run, tiles))
    labels.flags.writeable = False
    iters.flags.writeable = False
    return BasinRaster(grid, labels, iters, att, max_iter, tol)


def julia_band(raster: BasinRaster) -> np.ndarray:
    """NONCONV pixels plus pixels with a 4-neighbour of a different label."""
    lab = raster.labels
    mask = lab == NONCONV
    dv = lab[1:, :] != lab[:-1, :]
    dh = lab[:, 1:] != lab[:, :-1]
    mask[1:, :] |= dv
    mask[:-1, :] |= dv
    mask[:, 1:] |= dh
    mask[:, :-1] |= dh
    return mask


def _touches_border(component: np.ndarray) -> bool:
    return bool(component[0, :].any() or component[-1, :].any()
                or component[:, 0].any() or component[:, -1].any())


def immediate_basins(raster: BasinRaster, attractors=None):
    """4-connected component of each attractor's pixel within its own label.

    Returns ``(masks, unbounded)``; a component is flagged unbounded when it
    reaches the raster border.
    """
    att = raster.attractors if attractors is None else tuple(attractors)
    grid = raster.grid
    masks, unbounded = [], []
    for k, a in enumerate(att):
        i, j = grid.pixel_of(a)
        if not grid.contains_pixel(i, j):
            raise ValueError(f"attractor {a} lies outside the raster")
        i, j = int(i), int(j)
        same = raster.labels == k
        if not same[i, j]:
            masks.append(np.zeros_like(same))
            unbounded.append(False)
            continue
        comp, _ = ndimage.label(same, structure=FOUR)
        mask = comp == comp[i, j]
        masks.append(mask)
        unbounded.append(_touches_border(mask))
    return masks, unbounded


def border_components(raster: BasinRaster) -> int:
    """Number of 4-connected same-label (non-NONCONV) regions touching the border."""
    total = 0
    for k in range(len(raster.attractors)):
        comp, _ = ndimage.label(raster.labels == k, structure=FOUR)
        edge = np.concatenate([comp[0], comp[-1], comp[:, 0], comp[:, -1]])
        total += np.unique(edge[edge > 0]).size
    return total


def unbounded_components(raster: BasinRaster, center: complex | None = None,
                         reach: float = 0.5) -> list[int]:
    """Labels of Fatou components that look unbounded.

    Within the inscribed disk about ``center`` a same-label 4-component is
    counted when it touches the disk's rim and also comes within
    ``reach * radius`` of the centre.  Bounded preimage basins clipped by the
    rim stay near it, which this radial-span test filters out.
    """
    grid = raster.grid
    c = complex(grid.center if center is None else center)
    g0 = complex(grid.center)
    radius = min(g0.real + grid.half_extent - c.real, c.real - g0.real + grid.half_extent,
                 g0.imag + grid.half_height - c.imag, c.imag - g0.imag + grid.half_height)
    rad = np.abs(grid.points() - c)
    disk = rad <= radius
    rim = disk & (rad > radius - 2 * grid.pixel_size)
    out = []
    for k in range(len(raster.attractors)):
        comp, _ = ndimage.label((raster.labels == k) & disk, structure=FOUR)
        ids = np.unique(comp[rim])
        ids = ids[ids > 0]
        if ids.size == 0:
            continue
        closest = ndimage.minimum(rad, comp, ids)
        out.extend([k] * int(np.count_nonzero(np.asarray(closest) < reach * radius)))
    return out


def connectivity(raster: BasinRaster, poles) -> ConnectivityReport:
    """Components of the Julia band under 8-connectivity, ignoring crumbs.

    Pieces that reach the raster border are unbounded, so their closures all
    contain infinity, which is a Julia point; they are merged into a single
    unbounded component before counting.  ``raw_component_count`` is the
    count without that merge.
    """
    band = julia_band(raster)
    if not band.any():
        raise ValueError("empty Julia band")
    grid = raster.grid
    comp, n = ndimage.label(band, structure=EIGHT)
    sizes = np.bincount(comp.ravel(), minlength=n + 1)
    threshold = int(np.ceil(NOISE_AREA_FRACTION * grid.width * grid.height))
    raw = int(np.count_nonzero(sizes[1:] >= threshold))
    edge = np.concatenate([comp[0], comp[-1], comp[:, 0], comp[:, -1]])
    border_ids = np.unique(edge[edge > 0])
    outer_size = int(sizes[border_ids].sum())
    inner = np.ones(n + 1, dtype=bool)
    inner[0] = False
    inner[border_ids] = False
    count = int(np.count_nonzero(sizes[inner] >= threshold))
    unbounded = outer_size >= threshold
    count += int(unbounded)
    border_set = set(border_ids.tolist())
    poles_ok = unbounded
    for w in poles:
        i, j = grid.pixel_of(w)
        if not grid.contains_pixel(i, j):
            continue
        if int(comp[int(i), int(j)]) not in border_set:
            poles_ok = False
    _, imm = immediate_basins(raster)
    return ConnectivityReport(count, bool(unbounded), bool(poles_ok), tuple(imm), threshold,
                              raw, (grid.width, grid.height))


# --------------------------------------------------------------------------
# one-dimensional dynamics

@dataclass(frozen=True)
class RealLineReport:
    interval: tuple
    increasing: bool
    sign_of_step: int  # +1 if F(x) > x on all interior samples, -1 if F(x) < x, 0 mixed
    monotone_case: int | None  # 1: orbits rise to x_hi, 2: orbits fall to x_lo
    predicted_limit: float | None
    orbit_seeds: tuple
    orbit_limits: tuple
    converged: bool


def real_poles(bundle: MethodBundle, tol: float = 1e-9) -> list[float]:
    return sorted(w.real for w, _ in bundle.map.poles if abs(w.imag) <= tol * (1 + abs(w)))


def _orbit_limit(bundle, z, max_iter, tol):
    for _ in range(max_iter):
        nz = complex(bundle.map(z))
        if is_infinite(nz):
            return None
        if abs(nz - z) <= tol * (1 + abs(nz)):
            return nz
        z = nz
    return None


def real_line_analysis(bundle: MethodBundle, x_lo: float, x_hi: float, n_samples: int = 200,
                       n_orbits: int = 10, max_iter: int = 500, tol: float = 1e-12) -> RealLineReport:
    """Check monotone convergence on ``[x_lo, x_hi]`` and iterate seed points.

    Case 1: ``F' > 0`` and ``F(x) > x`` below a fixed right endpoint; orbits
    rise to it.  Case 2: ``F' > 0`` and ``F(x) < x`` above a fixed left
    endpoint; orbits fall to it.
    """
    if not x_lo < x_hi:
        raise ValueError("need x_lo < x_hi")
    for w in real_poles(bundle):
        if x_lo <= w <= x_hi:
            raise ValueError(f"pole {w!r} lies inside [{x_lo}, {x_hi}]")
    xs = np.linspace(x_lo, x_hi, n_samples + 2)[1:-1]
    fx = bundle.map(xs.astype(complex)).real
    dfx = bundle.deriv(xs.astype(complex)).real
    increasing = bool(np.all(dfx > 0))
    step = fx - xs
    sign = 1 if np.all(step > 0) else (-1 if np.all(step < 0) else 0)

    def fixed(x):
        v = complex(bundle.map(complex(x)))
        return abs(v - x) <= 1e-10 * (1 + abs(x))

    case, limit = None, None
    if increasing and sign == 1 and fixed(x_hi):
        case, limit = 1, float(x_hi)
    elif increasing and sign == -1 and fixed(x_lo):
        case, limit = 2, float(x_lo)
    seeds = np.linspace(x_lo, x_hi, n_orbits)
    limits = []
    for s in seeds:
        lim = _orbit_limit(bundle, complex(s), max_iter, tol)
        limits.append(None if lim is None else float(lim.real))
    ok = all(v is not None for v in limits)
    return RealLineReport((float(x_lo), float(x_hi)), increasing, sign, case, limit,
                          tuple(float(s) for s in seeds), tuple(limits), ok)


@dataclass(frozen=True)
class ImaginaryAxisReport:
    seeds: tuple
    limits: tuple  # imaginary parts of the orbit limits
    axis_invariance_residual: float
    orbits: tuple = field(repr=False, default=())


def odd_real_residual(bundle: MethodBundle, n: int = 32, seed: int = 0) -> float:
    """max ``|F(-conj z) + conj F(z)|`` relative, over sample points."""
    rng = np.random.default_rng(seed)
    z = rng.uniform(-2, 2, n) + 1j * rng.uniform(-2, 2, n)
    a = bundle.map(-np.conj(z))
    b = -np.conj(bundle.map(z))
    ok = np.isfinite(a) & np.isfinite(b)
    return float(np.max(np.abs(a[ok] - b[ok]) / (1 + np.abs(b[ok]))))


def imaginary_axis_analysis(bundle: MethodBundle, seeds, max_iter: int = 500,
                            tol: float = 1e-12) -> ImaginaryAxisReport:
    """Iterate points ``i*y``; the map must be odd with real coefficients."""
    if odd_real_residual(bundle) > 1e-10:
        raise ValueError("imaginary-axis analysis needs an odd map with real coefficients")
    ys = [float(y) for y in seeds]
    limits, orbits = [], []
    resid = 0.0
    for y in ys:
        z = complex(0.0, y)
        orbit = [y]
        lim = None
        for _ in range(max_iter):
            nz = complex(bundle.map(z))
            if is_infinite(nz):
                break
            resid = max(resid, abs(nz.real) / (1 + abs(nz)))
            orbit.append(nz.imag)
            if abs(nz - z) <= tol * (1 + abs(nz)):
                lim = nz.imag
                break
            z = complex(0.0, nz.imag)
        limits.append(lim)
        orbits.append(tuple(orbit))
    return ImaginaryAxisReport(tuple(ys), tuple(limits), resid, tuple(orbits))


def _real(values, tol=1e-9):
    return sorted(v.real for v in values if abs(v.imag) <= tol * (1 + abs(v)))


def real_landmarks(bundle: MethodBundle) -> dict:
    """Real points that organise the dynamics on the real line.

    ``zeros``: nonzero real zeros of the map that are not roots of p;
    ``free_critical``: real critical points that are not roots or poles;
    ``critical_values``: their images; ``extraneous``: real extraneous fixed
    points; ``poles``: real poles.
    """
    from .fixpoints import critical_points, fixed_points
    from .poly import roots

    proots = [r for r, _ in roots(bundle.p)]
    poles = [w for w, _ in bundle.map.poles]

    def away(v, pts):
        return all(abs(v - w) > 1e-6 * (1 + abs(w)) for w in pts)

    zeros = [w for w, _ in roots(bundle.map.num) if away(w, proots)]
    crit = [c for c, _ in critical_points(bundle) if away(c, proots) and away(c, poles)]
    ext = [f.location for f in fixed_points(bundle) if f.extraneous]
    free = _real(crit)
    return {
        "zeros": _real(zeros),
        "free_critical": free,
        "critical_values": [float(complex(bundle.map(complex(c))).real) for c in free],
        "extraneous": _real(ext),
        "poles": _real(poles),
    }
