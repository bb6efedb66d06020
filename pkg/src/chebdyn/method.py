"""Construction of the Chebyshev iteration map and a Newton baseline."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .poly import FactoredPolynomial, Polynomial, PolynomialError, RationalMap, reduce, roots

Z = Polynomial([0.0, 1.0])


class MethodKind(str, enum.Enum):
    CHEBYSHEV = "chebyshev"
    NEWTON = "newton"


@dataclass(frozen=True, eq=False)
class MethodBundle:
    """An iteration map together with its derivative and the L-functions.

    ``Lp = p p''/p'^2`` and ``Lpprime = p' p'''/p''^2``; all four maps are
    reduced.
    """

    kind: MethodKind
    p: Polynomial
    map: RationalMap
    deriv: RationalMap
    Lp: RationalMap
    Lpprime: RationalMap

    @property
    def degree(self) -> int:
        return map_degree(self)

    def __call__(self, z):
        return self.map(z)


def _as_expanded(p) -> Polynomial:
    if isinstance(p, FactoredPolynomial):
        return p.expand()
    if not isinstance(p, Polynomial):
        return Polynomial(p)
    return p


def _check_input(p: Polynomial) -> None:
    if p.degree < 2:
        raise PolynomialError(
            f"degree {p.degree} polynomial: the iteration is constant or linear; need degree >= 2")
    if p.is_monomial():
        raise PolynomialError(
            "monomial input: the iteration of a monomial is a linear map")


class _Factored:
    """``f = g * h`` with ``h`` squarefree and ``f'/f = s/h``.

    ``h`` carries the leading coefficient; ``s`` and ``h`` are coprime, so
    maps built from them only need reducing at multiple roots of ``s``.
    """

    def __init__(self, f: Polynomial):
        rts = roots(f)
        lead = f.leading
        self.h = Polynomial.from_roots([(r, 1) for r, _ in rts], lead)
        s = Polynomial()
        for i, (_, k) in enumerate(rts):
            others = [(r, 1) for j, (r, _) in enumerate(rts) if j != i]
            s = s + Polynomial.from_roots(others, lead * k)
        self.s = s
        self.s_roots = roots(s) if s.degree >= 1 else []

    def candidates(self, power: int):
        return [(w, power * mu) for w, mu in self.s_roots]


def _l_function(f: Polynomial, fac: _Factored | None = None) -> RationalMap:
    """``f f''/f'^2`` written as ``(s'h - s h' + s^2)/s^2``."""
    if f.degree < 2:
        return RationalMap(Polynomial(), Polynomial([1.0]), True)
    fac = fac or _Factored(f)
    h, s = fac.h, fac.s
    num = s.derivative() * h - s * h.derivative() + s * s
    return reduce(RationalMap(num, s * s), fac.candidates(2))


def chebyshev_map(p) -> MethodBundle:
    """Chebyshev iteration ``z - (1 + Lp/2) p/p'`` as a reduced rational map.

    Mathematically this is ``[2z p'^3 - 2p p'^2 - p^2 p''] / [2 p'^3]``.  The
    common factor ``gcd(p, p')^3`` is removed up front by building the map
    as ``[2z s^3 - h(3s^2 + s'h - s h')] / (2 s^3)``; the derivative follows
    from the quotient rule on that form, ``(s N' - 3 N s') / (2 s^4)``.
    """
    p = _as_expanded(p)
    _check_input(p)
    fac = _Factored(p)
    h, s = fac.h, fac.s
    h1, s1 = h.derivative(), s.derivative()
    num = 2.0 * (Z * s * s * s) - h * (3.0 * (s * s) + s1 * h - s * h1)
    cmap = reduce(RationalMap(num, 2.0 * (s * s * s)), fac.candidates(3))
    dnum = s * num.derivative() - 3.0 * (num * s1)
    deriv = reduce(RationalMap(dnum, 2.0 * (s * s) * (s * s)), fac.candidates(4))
    return MethodBundle(MethodKind.CHEBYSHEV, p, cmap, deriv,
                        _l_function(p, fac), _l_function(p.derivative()))


def newton_map(p) -> MethodBundle:
    """Newton iteration ``z - p/p' = (z s - h)/s``; its derivative is ``Lp``."""
    p = _as_expanded(p)
    _check_input(p)
    fac = _Factored(p)
    nmap = reduce(RationalMap(Z * fac.s - fac.h, fac.s), fac.candidates(1))
    lp = _l_function(p, fac)
    return MethodBundle(MethodKind.NEWTON, p, nmap, lp, lp, _l_function(p.derivative()))


def chebyshev_raw(p) -> RationalMap:
    """Unreduced ``[2z p'^3 - 2p p'^2 - p^2 p''] / [2 p'^3]``."""
    p = _as_expanded(p)
    p1, p2 = p.derivative(), p.derivative(2)
    p1sq = p1 * p1
    num = 2.0 * (Z * p1sq * p1) - 2.0 * (p * p1sq) - (p * p) * p2
    return RationalMap(num, 2.0 * (p1sq * p1))


def chebyshev_deriv_closed_form(p, z):
    """Evaluate ``p^2 (3 p''^2 - p' p''') / (2 p'^4)`` pointwise."""
    p = _as_expanded(p)
    z = np.asarray(z, dtype=complex)
    v0, v1, v2, v3 = (p.derivative(k)(z) for k in range(4))
    return v0 ** 2 * (3 * v2 ** 2 - v1 * v3) / (2 * v1 ** 4)


def build_method(p, kind: MethodKind | str = MethodKind.CHEBYSHEV) -> MethodBundle:
    kind = MethodKind(kind)
    if kind is MethodKind.CHEBYSHEV:
        return chebyshev_map(p)
    return newton_map(p)


def map_degree(bundle: MethodBundle) -> int:
    return max(bundle.map.num.degree, bundle.map.den.degree)


def deriv_finite_difference(bundle: MethodBundle, z, h: float = 1e-6):
    """Central difference of the map, used to cross-check ``bundle.deriv``."""
    z = np.asarray(z, dtype=complex)
    return (bundle.map(z + h) - bundle.map(z - h)) / (2 * h)
