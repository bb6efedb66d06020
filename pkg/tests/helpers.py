"""Shared fixtures data: showcase polynomials and cached 600x600 rasters."""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from chebdyn.basins import compute_basins, default_grid
from chebdyn.fixpoints import attractors, fixed_points
from chebdyn.method import build_method
from chebdyn.poly import Polynomial

Z = Polynomial([0.0, 1.0])
ONE = Polynomial([1.0])

SHOWCASE = {
    "z^2-1": Z * Z - 1,
    "(z^2-1)^3": (Z * Z - 1) ** 3,
    "z^3-1": Z ** 3 - 1,
    "z^4-1": Z ** 4 - 1,
    "z(z^2-1)": Z * (Z * Z - 1),
    "z^2(z^2-1)": Z * Z * (Z * Z - 1),
    "z(z^3-1)": Z * (Z ** 3 - 1),
}

SIZE = 600


def poly_from_roots(*pairs, leading=1.0) -> Polynomial:
    return Polynomial.from_roots(pairs, leading)


@lru_cache(maxsize=None)
def bundle(name: str, method: str = "chebyshev"):
    return build_method(SHOWCASE[name], method)


@lru_cache(maxsize=None)
def raster(name: str, method: str = "chebyshev", size: int = SIZE):
    b = bundle(name, method)
    att = attractors(fixed_points(b))
    return compute_basins(b, att, default_grid(b, size), 200, 1e-8)


def rel_coeff_error(a: Polynomial, b: Polynomial) -> float:
    n = max(a.coeffs.size, b.coeffs.size)
    ca = np.zeros(n, complex)
    cb = np.zeros(n, complex)
    ca[:a.coeffs.size] = a.coeffs
    cb[:b.coeffs.size] = b.coeffs
    return float(np.max(np.abs(ca - cb)) / max(np.max(np.abs(cb)), 1e-300))


def map_error(rmap, num: Polynomial, den: Polynomial) -> float:
    """Coefficient mismatch after scaling both maps to a monic denominator."""
    a = rmap.normalized()
    lead = den.leading
    return max(rel_coeff_error(a.num, num.scale(1 / lead)), rel_coeff_error(a.den, den.scale(1 / lead)))
