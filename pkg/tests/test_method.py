import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chebdyn.fixpoints import multiplier
from chebdyn.method import (MethodKind, build_method, chebyshev_deriv_closed_form,
                            chebyshev_map, chebyshev_raw, deriv_finite_difference, map_degree,
                            newton_map)
from chebdyn.poly import FactoredPolynomial, Polynomial, PolynomialError, is_infinite, reduce
from helpers import Z, map_error, poly_from_roots


def pair_family(k, m):
    """Closed-form map for (z-1)^k (z+1)^m written over one denominator."""
    s = k + m
    q = 3 * s - 1
    f = Polynomial([3 * (k - m) ** 2 - s, 2 * (k - m) * q, s * q])
    lin = Polynomial([k - m, s])
    den = 2 * lin ** 3
    num = Z * den - (Z * Z - 1) * f
    return num, den


def test_map_quadratic():
    b = chebyshev_map(Z * Z - 1)
    assert map_error(b.map, 3 * Z ** 4 + 6 * Z * Z - 1, 8 * Z ** 3) < 1e-12
    assert map_degree(b) == 4


def test_map_cubic_with_zero_root():
    b = chebyshev_map(Z * (Z * Z - 1))
    assert map_error(b.map, Z ** 3 * (15 * Z ** 4 - 6 * Z * Z - 1), (3 * Z * Z - 1) ** 3) < 1e-12
    assert map_degree(b) == 7


def test_map_quartic_z_z3_minus_1():
    b = chebyshev_map(Z * (Z ** 3 - 1))
    num = 3 * Z ** 4 * (14 * Z ** 6 - 4 * Z ** 3 - 1)
    assert map_error(b.map, num, (4 * Z ** 3 - 1) ** 3) < 1e-12
    assert (b.map.num.degree, b.map.den.degree) == (10, 9)


@pytest.mark.parametrize("k,m", [(1, 1), (2, 1), (3, 3), (4, 2), (1, 3)])
def test_pair_family(k, m):
    b = chebyshev_map(poly_from_roots((1, k), (-1, m)))
    num, den = pair_family(k, m)
    assert map_error(b.map, num, den) < 1e-10


@pytest.mark.parametrize("k", [2, 3, 4])
def test_equal_multiplicity_family(k):
    b = chebyshev_map((Z * Z - 1) ** k)
    num = (2 * k - 1) * (4 * k - 1) * Z ** 4 + 6 * k * Z * Z - 1
    assert map_error(b.map, num, 8 * k * k * Z ** 3) < 1e-10


@pytest.mark.parametrize("n", range(2, 9))
def test_unicritical_family(n):
    b = chebyshev_map(Z ** n - 1)
    num = (2 * n * n - 3 * n + 1) * Z ** (2 * n) + 2 * (2 * n - 1) * Z ** n - (n - 1)
    den = 2 * n * n * Z ** (2 * n - 1)
    assert map_error(b.map, num, den) < 1e-10
    assert map_degree(b) == 2 * n


@pytest.mark.parametrize("p", [Z * Z - 1, (Z * Z - 1) ** 3, Z * (Z ** 3 - 1),
                               poly_from_roots((1, 4), (-1, 2))])
def test_raw_construction_reduces_to_same_map(p):
    structured = chebyshev_map(p).map
    generic = reduce(chebyshev_raw(p))
    lead = structured.den.leading
    assert map_error(generic, structured.num.scale(1 / lead), structured.den.scale(1 / lead)) < 1e-8


def test_newton_maps():
    assert map_error(newton_map(Z * Z - 1).map, Z * Z + 1, 2 * Z) < 1e-12
    assert map_error(newton_map(Z ** 3 - 1).map, 2 * Z ** 3 + 1, 3 * Z * Z) < 1e-12


def test_rejects_monomials_and_low_degree():
    for bad in (Z, Z ** 3, 4 * Z * Z, Polynomial([1, 1])):
        with pytest.raises(PolynomialError):
            chebyshev_map(bad)
    with pytest.raises(PolynomialError):
        newton_map(Z ** 2)


def test_factored_input_is_expanded():
    f = FactoredPolynomial(1.0, ((1.0, 1), (-1.0, 1)))
    assert map_error(chebyshev_map(f).map, 3 * Z ** 4 + 6 * Z * Z - 1, 8 * Z ** 3) < 1e-12
    assert build_method(f, "newton").kind is MethodKind.NEWTON


def test_eval_examples():
    b = chebyshev_map(Z * Z - 1)
    assert b.map(1.0) == 1
    assert is_infinite(chebyshev_map(Z * (Z * Z - 1)).map(1 / math.sqrt(3)))
    big = b.map(1e150)
    assert not is_infinite(big)
    assert big / 1e150 == pytest.approx(3 / 8, rel=1e-12)


def _samples(bundle, n, seed):
    rng = np.random.default_rng(seed)
    den = bundle.map.den.scale(1 / bundle.map.den.leading)
    out = []
    while len(out) < n:
        z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        if abs(den(z)) > 1e-3 and abs(bundle.p.derivative()(z)) > 1e-3:
            out.append(z)
    return np.array(out)


POLYS = [Z * Z - 1, (Z * Z - 1) ** 3, Z ** 3 - 1, Z * (Z * Z - 1), Z * Z * (Z * Z - 1),
         Z * (Z ** 3 - 1), poly_from_roots((1, 4), (-1, 2)), Polynomial([1 + 2j, -0.5, 3j, 1])]


@pytest.mark.parametrize("p", POLYS)
def test_derivative_matches_closed_form_and_finite_differences(p):
    b = chebyshev_map(p)
    z = _samples(b, 100, 0)
    d = b.deriv(z)
    closed = chebyshev_deriv_closed_form(p, z)
    fd = deriv_finite_difference(b, z)
    assert np.max(np.abs(d - closed) / (1 + np.abs(closed))) < 1e-8
    assert np.max(np.abs(d - fd) / (1 + np.abs(d))) < 1e-5


@pytest.mark.parametrize("p", POLYS[:4])
def test_derivative_identity_with_l_functions(p):
    b = chebyshev_map(p)
    z = _samples(b, 50, 1)
    lp, lpp = b.Lp(z), b.Lpprime(z)
    ok = np.isfinite(lp) & np.isfinite(lpp)
    ident = lp[ok] ** 2 / 2 * (3 - lpp[ok])
    assert np.max(np.abs(b.deriv(z[ok]) - ident) / (1 + np.abs(ident))) < 1e-8


def test_newton_derivative_is_lp():
    b = newton_map(Z ** 3 - 1)
    z = _samples(b, 30, 2)
    assert np.max(np.abs(b.deriv(z) - deriv_finite_difference(b, z))) < 1e-6


@settings(max_examples=25, deadline=None)
@given(st.lists(st.builds(complex, st.floats(-2, 2), st.floats(-2, 2)), min_size=2, max_size=5))
def test_simple_roots_are_superattracting(rts):
    if any(abs(a - b) < 0.2 for i, a in enumerate(rts) for b in rts[i + 1:]):
        return
    p = Polynomial.from_roots([(r, 1) for r in rts])
    if p.is_monomial():
        return
    b = chebyshev_map(p)
    for r in rts:
        assert abs(b.map(r) - r) < 1e-9 * (1 + abs(r))
        assert abs(multiplier(b, r)) < 1e-10


@pytest.mark.parametrize("k", [2, 3, 4])
def test_multiple_root_multiplier(k):
    p = poly_from_roots((1, k), (-1, 1))
    b = chebyshev_map(p)
    expected = (k - 1) * (2 * k - 1) / (2 * k * k)
    assert abs(b.deriv(1.0) - expected) < 1e-6
    assert abs(multiplier(b, 1.0) - expected) < 1e-6
    # finite differences near the root as an independent check
    h = 1e-4
    fd = (b.map(1 + h) - b.map(1 - h)) / (2 * h)
    assert abs(fd - expected) < 1e-6
