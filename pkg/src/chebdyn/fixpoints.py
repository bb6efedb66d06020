"""Fixed points, multipliers, critical points and critical orbits."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .method import MethodBundle, MethodKind
from .poly import INF, Polynomial, PolynomialError, is_infinite, roots

SUPERATTRACTING_TOL = 1e-8
PARABOLIC_BAND = 1e-9
ROOT_MATCH_RTOL = 1e-6

SOURCE_ROOT = "root-of-p"
SOURCE_EXTRANEOUS = "L_p-equals-minus-2"
SOURCE_INFINITY = "infinity"


def classify(multiplier: complex) -> str:
    a = abs(multiplier)
    if a < SUPERATTRACTING_TOL:
        return "superattracting"
    if abs(a - 1.0) <= PARABOLIC_BAND:
        return "parabolic"
    if a < 1.0 - PARABOLIC_BAND:
        return "attracting"
    return "repelling"


@dataclass(frozen=True)
class FixedPointRecord:
    location: complex
    multiplier: complex
    kind: str
    extraneous: bool
    source: str
    multiplicity: int = 1

    @property
    def at_infinity(self) -> bool:
        return is_infinite(self.location)

    @property
    def attracting(self) -> bool:
        return abs(self.multiplier) < 1.0 - PARABOLIC_BAND


@dataclass(frozen=True)
class CriticalOrbitRecord:
    critical_point: complex
    multiplicity: int
    orbit_prefix: tuple = field(repr=False)
    verdict: str  # "converged", "non-converged" or "hit-pole"
    attractor: int | None = None
    steps: int | None = None


def _near_any(z: complex, pts, rtol: float = ROOT_MATCH_RTOL) -> bool:
    return any(abs(z - w) <= rtol * (1.0 + abs(w)) for w in pts)


def _pole_locations(bundle: MethodBundle) -> list[complex]:
    return [w for w, _ in bundle.map.poles]


def multiplier(bundle: MethodBundle, z: complex) -> complex:
    """Derivative of the iteration map at ``z``.

    Uses ``Lp^2/2 (3 - Lp')`` (Newton: ``Lp``) where both L-functions are
    finite; near roots of p this is far better conditioned than evaluating
    the expanded derivative, whose numerator cancels to rounding noise.
    """
    z = complex(z)
    if _near_any(z, _pole_locations(bundle), 1e-9):
        raise PolynomialError(f"z={z} is a pole of the iteration map")
    lp = complex(bundle.Lp(z))
    if bundle.kind is MethodKind.NEWTON:
        return lp if not is_infinite(lp) else complex(bundle.deriv(z))
    lpp = complex(bundle.Lpprime(z))
    if is_infinite(lp) or is_infinite(lpp):
        return complex(bundle.deriv(z))
    return lp * lp / 2.0 * (3.0 - lpp)


def extraneous_multiplier(bundle: MethodBundle, z: complex) -> complex:
    """``2(3 - L_{p'}(z))``: the Chebyshev multiplier at a solution of ``Lp = -2``."""
    return 2.0 * (3.0 - complex(bundle.Lpprime(z)))


def multiplier_at_infinity(bundle: MethodBundle) -> complex:
    num, den = bundle.map.num, bundle.map.den
    if num.degree != den.degree + 1:
        raise PolynomialError(
            f"map does not fix infinity with finite slope (deg num {num.degree}, deg den {den.degree})")
    return den.leading / num.leading


def extraneous_polynomial(p: Polynomial) -> Polynomial:
    """``p p'' + 2 p'^2``, whose non-root zeros solve ``Lp = -2``."""
    p1, p2 = p.derivative(), p.derivative(2)
    return p * p2 + 2.0 * (p1 * p1)


def fixed_points(bundle: MethodBundle) -> list[FixedPointRecord]:
    """Roots of p, the extraneous fixed points and infinity, with multipliers."""
    p = bundle.p
    proots = roots(p)
    records = []
    for r, m in proots:
        lam = multiplier(bundle, r)
        records.append(FixedPointRecord(r, lam, classify(lam), False, SOURCE_ROOT, m))
    root_locs = [r for r, _ in proots]
    poles = _pole_locations(bundle)
    if bundle.kind is MethodKind.CHEBYSHEV:
        q = extraneous_polynomial(p)
        for w, m in roots(q):
            if _near_any(w, root_locs) or _near_any(w, poles):
                continue
            lam = multiplier(bundle, w)
            records.append(FixedPointRecord(w, lam, classify(lam), True, SOURCE_EXTRANEOUS, m))
    lam_inf = multiplier_at_infinity(bundle)
    records.append(FixedPointRecord(INF, lam_inf, classify(lam_inf), False, SOURCE_INFINITY))
    return records


def attractors(records: list[FixedPointRecord]) -> list[complex]:
    """Finite attracting fixed points, roots of p first."""
    return [r.location for r in records if not r.at_infinity and r.attracting]


def critical_points(bundle: MethodBundle) -> list[tuple[complex, int]]:
    """Zeros of the derivative plus poles of order >= 2 (counted order - 1)."""
    out = []
    dnum = bundle.deriv.num
    if dnum.degree >= 1:
        out.extend(roots(dnum))
    for w, order in bundle.map.poles:
        if order >= 2:
            out.append((w, order - 1))
    return out


def postcritical_classify(bundle: MethodBundle, attractor_list, max_iter: int = 500,
                          tol: float = 1e-8, crit=None) -> list[CriticalOrbitRecord]:
    """Iterate every critical point and report where its orbit goes."""
    att = np.asarray(list(attractor_list), dtype=complex)
    crit = critical_points(bundle) if crit is None else crit
    poles = _pole_locations(bundle)
    out = []
    for c, m in crit:
        c = complex(c)
        if _near_any(c, poles, 1e-9):
            out.append(CriticalOrbitRecord(c, m, (c,), "hit-pole"))
            continue
        z = c
        orbit = [z]
        verdict, idx, steps = "non-converged", None, None
        for n in range(max_iter + 1):
            if is_infinite(z):
                verdict = "hit-pole"
                steps = n
                break
            d = np.abs(att - z) if att.size else np.array([])
            if d.size and d.min() < tol:
                verdict, idx, steps = "converged", int(np.argmin(d)), n
                break
            if n == max_iter:
                break
            z = complex(bundle.map(z))
            orbit.append(z)
        out.append(CriticalOrbitRecord(c, m, tuple(orbit), verdict, idx, steps))
    return out
