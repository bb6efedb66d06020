"""Affine conjugation: centroid, normalization and the scaling identity."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .method import MethodKind, build_method
from .poly import Polynomial, PolynomialError, is_infinite


@dataclass(frozen=True)
class AffineMap:
    """``z -> a*z + b`` with ``a != 0``."""

    a: complex = 1.0
    b: complex = 0.0

    def __post_init__(self):
        if complex(self.a) == 0:
            raise ValueError("affine map needs a nonzero linear coefficient")

    def __call__(self, z):
        return self.a * np.asarray(z) + self.b if np.ndim(z) else self.a * complex(z) + self.b

    def inverse(self) -> "AffineMap":
        return AffineMap(1 / self.a, -self.b / self.a)

    def compose(self, other: "AffineMap") -> "AffineMap":
        """``self o other``."""
        return AffineMap(self.a * other.a, self.a * other.b + self.b)


@dataclass(frozen=True)
class NormalizationResult:
    g: Polynomial
    T: AffineMap
    lam: complex


def centroid(p: Polynomial) -> complex:
    """Mean of the roots, ``-a_{d-1} / (d a_d)``."""
    d = p.degree
    if d < 1:
        raise PolynomialError("centroid needs degree >= 1")
    c = p.coeffs
    return complex(-c[d - 1] / (d * c[d]))


def transform(p: Polynomial, T: AffineMap, lam: complex = 1.0) -> Polynomial:
    """``lam * p o T``."""
    return p.compose_affine(T.a, T.b).scale(lam)


def normalize(p: Polynomial) -> NormalizationResult:
    """Monic, centered conjugate ``g = (1/a_d) p(z + centroid)``."""
    if p.degree < 2:
        raise PolynomialError("normalize needs degree >= 2")
    T = AffineMap(1.0, centroid(p))
    lam = 1.0 / p.leading
    g = transform(p, T, lam)
    c = np.array(g.coeffs)
    # the subleading coefficient vanishes exactly in exact arithmetic
    c[-2] = 0.0
    c[-1] = 1.0
    return NormalizationResult(Polynomial(c), T, lam)


def conjugacy_residual(p: Polynomial, T: AffineMap, lam: complex, n_samples: int = 100,
                       method: MethodKind | str = MethodKind.CHEBYSHEV, seed: int = 0) -> float:
    """max ``|T^-1(F_p(T z)) - F_g(z)| / (1 + |F_g(z)|)`` with ``g = lam p o T``.

    Sample points are drawn (seeded) from a box around the roots of ``g`` and
    rejected where either denominator, made monic, is below ``1e-3``.
    """
    if complex(lam) == 0:
        raise ValueError("scale factor must be nonzero")
    g = transform(p, T, lam)
    Fp = build_method(p, method)
    Fg = build_method(g, method)
    Tinv = T.inverse()
    rng = np.random.default_rng(seed)
    radius = 1.0 + float(np.max(np.abs(g.coeffs[:-1] / g.leading)))
    dg = Fg.map.den.scale(1 / Fg.map.den.leading)
    dp = Fp.map.den.scale(1 / Fp.map.den.leading)
    worst = 0.0
    taken = 0
    attempts = 0
    while taken < n_samples:
        attempts += 1
        if attempts > 100 * n_samples:
            raise RuntimeError("could not find sample points away from the poles")
        z = complex(radius * rng.uniform(-1, 1), radius * rng.uniform(-1, 1))
        if abs(dg(z)) <= 1e-3 or abs(dp(T(z))) <= 1e-3:
            continue
        lhs = Tinv(Fp.map(T(z)))
        rhs = Fg.map(z)
        if is_infinite(lhs) or is_infinite(rhs):
            continue
        worst = max(worst, abs(lhs - rhs) / (1.0 + abs(rhs)))
        taken += 1
    return worst


def two_roots_to_pm1(p: Polynomial, r1: complex, r2: complex, tol: float = 1e-8):
    """Move roots ``r1, r2`` to ``1, -1``: returns ``(p o T, T)``."""
    r1, r2 = complex(r1), complex(r2)
    if abs(r1 - r2) <= tol * (1 + abs(r1)):
        raise ValueError("the two roots must be distinct")
    for r in (r1, r2):
        if abs(p(r)) > tol * max(1.0, float(p.abs_eval(r))):
            raise ValueError(f"{r} is not a root of the polynomial")
    T = AffineMap((r1 - r2) / 2, (r1 + r2) / 2)
    return transform(p, T), T
