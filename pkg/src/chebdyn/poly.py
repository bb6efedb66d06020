"""Complex polynomial and rational-function arithmetic.

Coefficients are stored low-to-high (index ``j`` holds the coefficient of
``z**j``) in binary64 complex.  The root finder is a simultaneous
Aberth-Ehrlich iteration with a Durand-Kerner fallback, followed by a
validated clustering step that recovers multiple roots.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

EPS = float(np.finfo(float).eps)
INF = complex(np.inf, 0.0)
TRIM_RTOL = 1e-12
GOLDEN_ANGLE = np.pi * (3.0 - np.sqrt(5.0))

# noise multiplier used when deciding that a computed value is zero
NOISE_FACTOR = 1e4


class PolynomialError(ValueError):
    """Invalid polynomial input for the requested operation."""


class RootFindingError(ArithmeticError):
    """Simultaneous iteration failed to converge."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals


class UnreducedMapError(ZeroDivisionError):
    """0/0 encountered while evaluating a rational map."""


def is_infinite(z) -> bool:
    z = complex(z)
    return bool(np.isinf(z.real) or np.isinf(z.imag))


def _trim(c: np.ndarray) -> np.ndarray:
    if c.size == 0:
        return c
    mags = np.abs(c)
    top = mags.max()
    if top == 0.0:
        return c[:0]
    keep = np.nonzero(mags > TRIM_RTOL * top)[0]
    return c[: keep[-1] + 1]


def _horner(c: np.ndarray, z):
    z = np.asarray(z, dtype=complex)
    if c.size == 0:
        return np.zeros_like(z)
    acc = np.full_like(z, c[-1])
    for a in c[-2::-1]:
        acc = acc * z + a
    return acc


def _taylor_coeffs(c: np.ndarray, x: complex) -> np.ndarray:
    """Coefficients of ``p(x + t)`` in ``t`` (repeated synthetic division)."""
    b = np.array(c, dtype=complex)
    n = b.size
    for k in range(n):
        for j in range(n - 2, k - 1, -1):
            b[j] += x * b[j + 1]
    return b


class Polynomial:
    """Immutable complex polynomial with low-to-high coefficients.

    Leading coefficients smaller than ``1e-12`` relative to the largest
    coefficient are dropped on construction, so ``Polynomial([])`` and
    ``Polynomial([0])`` are both the zero polynomial.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[complex] = ()):
        c = _trim(np.array(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs,
                           dtype=complex).ravel().copy())
        c.flags.writeable = False
        self._c = c

    @classmethod
    def from_roots(cls, roots: Iterable[tuple[complex, int]], leading: complex = 1.0) -> "Polynomial":
        c = np.array([leading], dtype=complex)
        for r, m in roots:
            if int(m) < 1:
                raise PolynomialError(f"multiplicity must be positive, got {m}")
            for _ in range(int(m)):
                c = np.convolve(c, [-complex(r), 1.0])
        return cls(c)

    @classmethod
    def monomial(cls, degree: int, coeff: complex = 1.0) -> "Polynomial":
        c = np.zeros(degree + 1, dtype=complex)
        c[-1] = coeff
        return cls(c)

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def degree(self) -> int:
        """Degree; ``-1`` for the zero polynomial."""
        return self._c.size - 1

    @property
    def is_zero(self) -> bool:
        return self._c.size == 0

    @property
    def leading(self) -> complex:
        return complex(self._c[-1]) if self._c.size else 0j

    def is_monomial(self) -> bool:
        return self._c.size > 0 and np.count_nonzero(self._c) == 1

    def __call__(self, z):
        with np.errstate(over="ignore", invalid="ignore"):
            v = _horner(self._c, z)
        bad = ~np.isfinite(v)
        if np.ndim(v) == 0:
            return INF if bad else complex(v)
        if bad.any():
            v = np.where(bad, INF, v)
        return v

    def abs_eval(self, r):
        """Evaluate the polynomial with coefficients ``|a_j|`` at ``|z|``."""
        return _horner(np.abs(self._c).astype(complex), np.abs(np.asarray(r))).real

    def derivative(self, order: int = 1) -> "Polynomial":
        c = self._c
        for _ in range(order):
            if c.size <= 1:
                return Polynomial()
            c = c[1:] * np.arange(1, c.size)
        return Polynomial(c)

    def taylor(self, x: complex) -> np.ndarray:
        """Return ``t`` with ``p(x + s) = sum t_j s**j``."""
        return _taylor_coeffs(self._c, complex(x))

    def compose_affine(self, a: complex, b: complex) -> "Polynomial":
        """Return ``z -> p(a*z + b)``."""
        t = self.taylor(b)
        return Polynomial(t * complex(a) ** np.arange(t.size))

    def scale(self, lam: complex) -> "Polynomial":
        return Polynomial(self._c * complex(lam))

    def __add__(self, other):
        other = _as_poly(other)
        n = max(self._c.size, other._c.size)
        c = np.zeros(n, dtype=complex)
        c[: self._c.size] += self._c
        c[: other._c.size] += other._c
        return Polynomial(c)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-self._c)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            if self.is_zero or other.is_zero:
                return Polynomial()
            return Polynomial(np.convolve(self._c, other._c))
        return self.scale(other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Polynomial([1.0])
        for _ in range(int(k)):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return np.array_equal(self._c, other._c)

    def __hash__(self):
        return hash(self._c.tobytes())

    def allclose(self, other: "Polynomial", rtol: float = 1e-10) -> bool:
        """Coefficient-wise comparison relative to the largest coefficient."""
        a, b = self._c, _as_poly(other)._c
        if a.size != b.size:
            return False
        if a.size == 0:
            return True
        scale = max(np.abs(a).max(), np.abs(b).max())
        return bool(np.abs(a - b).max() <= rtol * scale)

    def __repr__(self):
        return f"Polynomial({np.array2string(self._c, precision=6, separator=', ')})"


def _as_poly(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    return Polynomial([complex(x)])


def eval_poly(p: Polynomial, z):
    return p(z)


def derivative(p: Polynomial) -> Polynomial:
    return p.derivative()


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    return p + q


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def scale(p: Polynomial, lam: complex) -> Polynomial:
    return p.scale(lam)


@dataclass(frozen=True)
class FactoredPolynomial:
    leading: complex
    roots: tuple[tuple[complex, int], ...]

    def __post_init__(self):
        for _, m in self.roots:
            if int(m) < 1:
                raise PolynomialError(f"multiplicity must be positive, got {m}")

    def expand(self) -> Polynomial:
        return Polynomial.from_roots(self.roots, self.leading)

    @property
    def degree(self) -> int:
        return sum(int(m) for _, m in self.roots)


# --------------------------------------------------------------------------
# root finding

def _noise_bound(c: np.ndarray, z) -> np.ndarray:
    """Rounding-error bound for Horner evaluation of ``c`` at ``z``."""
    n = max(c.size - 1, 1)
    return 4.0 * n * EPS * _horner(np.abs(c).astype(complex), np.abs(z)).real


def _initial_guesses(c: np.ndarray) -> tuple[np.ndarray, float]:
    n = c.size - 1
    radius = 1.0 + float(np.max(np.abs(c[:-1] / c[-1])))
    angles = GOLDEN_ANGLE * np.arange(n) + 0.25
    return radius * np.exp(1j * angles), radius


def _aberth(c: np.ndarray, max_iter: int = 500):
    n = c.size - 1
    dc = c[1:] * np.arange(1, n + 1)
    z, radius = _initial_guesses(c)
    active = np.ones(n, dtype=bool)
    for _ in range(max_iter):
        za = z[active]
        pz = _horner(c, za)
        dpz = _horner(dc, za)
        exact = pz == 0
        diff = za[:, None] - z[None, :]
        diff[diff == 0] = np.inf
        s = (1.0 / diff).sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            w = 1.0 / (dpz / pz - s)
        w[exact] = 0.0
        bad = ~np.isfinite(w)
        if bad.any():
            # perturb stalled approximations off a critical point
            w[bad] = -1e-3 * radius * np.exp(1j * GOLDEN_ANGLE * np.nonzero(bad)[0])
        z_new = za - w
        z[active] = z_new
        done = (np.abs(w) < 1e-13 * radius) | exact
        done |= np.abs(_horner(c, z_new)) <= _noise_bound(c, z_new)
        idx = np.nonzero(active)[0]
        active[idx[done]] = False
        if not active.any():
            return z, True
    return z, False


def _durand_kerner(c: np.ndarray, max_iter: int = 500):
    n = c.size - 1
    a = c / c[-1]
    z, radius = _initial_guesses(c)
    for _ in range(max_iter):
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        w = _horner(a, z) / diff.prod(axis=1)
        z = z - w
        if np.all((np.abs(w) < 1e-13 * radius)
                  | (np.abs(_horner(c, z)) <= _noise_bound(c, z))):
            return z, True
    return z, False


def multiplicity_at(c, x: complex, max_mult: int | None = None,
                    factor: float = NOISE_FACTOR) -> int:
    """Number of leading Taylor coefficients of ``c`` at ``x`` that are noise.

    ``c`` is a coefficient array or a Polynomial.  The returned count is the
    numerical multiplicity of ``x`` as a root, capped at ``max_mult``.
    """
    c = c.coeffs if isinstance(c, Polynomial) else np.asarray(c, dtype=complex)
    t = _taylor_coeffs(c, complex(x))
    # each coefficient carries noise relative to itself and to the largest one
    weights = np.abs(c) + np.abs(c).max()
    bound = _taylor_coeffs(weights.astype(complex), abs(complex(x))).real
    limit = c.size - 1 if max_mult is None else min(max_mult, c.size - 1)
    k = 0
    while k < limit and abs(t[k]) <= factor * EPS * bound[k] * c.size:
        k += 1
    return k


def _refine_cluster(c: np.ndarray, center: complex, m: int, spread: float) -> complex:
    """Newton steps on the (m-1)-th derivative, which has a simple root there."""
    x = center
    for _ in range(3):
        t = _taylor_coeffs(c, x)
        if t[m] == 0:
            break
        step = t[m - 1] / (m * t[m])
        if not np.isfinite(step) or abs(step) > 10.0 * spread + 1e-12 * (1 + abs(x)):
            break
        x = x - step
        if abs(step) <= 4 * EPS * (1 + abs(x)):
            break
    return complex(x)


def _polish_simple(c: np.ndarray, x: complex) -> complex:
    dc = c[1:] * np.arange(1, c.size)
    best = x
    best_res = abs(_horner(c, best))
    for _ in range(3):
        d = _horner(dc, best)
        if d == 0 or best_res == 0:
            break
        cand = complex(best - _horner(c, best) / d)
        res = abs(_horner(c, cand))
        if res < best_res:
            best, best_res = cand, res
        else:
            break
    return complex(best)


def _mst_split(z: np.ndarray, idx: list[int]) -> tuple[list[int], list[int]]:
    """Split ``idx`` in two by dropping the longest single-linkage edge."""
    pts = z[idx]
    n = len(idx)
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    dist = np.abs(pts - pts[0])
    parent = np.zeros(n, dtype=int)
    edges = []
    for _ in range(n - 1):
        d = np.where(in_tree, np.inf, dist)
        j = int(np.argmin(d))
        edges.append((d[j], parent[j], j))
        in_tree[j] = True
        nd = np.abs(pts - pts[j])
        upd = nd < dist
        dist = np.where(upd, nd, dist)
        parent = np.where(upd, j, parent)
    longest = max(range(len(edges)), key=lambda e: edges[e][0])
    adj = {i: [] for i in range(n)}
    for k, (_, a, b) in enumerate(edges):
        if k != longest:
            adj[a].append(b)
            adj[b].append(a)
    seen = {edges[longest][1]}
    stack = [edges[longest][1]]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    left = [idx[i] for i in range(n) if i in seen]
    right = [idx[i] for i in range(n) if i not in seen]
    return left, right


def _cluster(c: np.ndarray, z: np.ndarray) -> list[tuple[complex, int]]:
    out: list[tuple[complex, int]] = []
    stack = [list(range(z.size))]
    while stack:
        idx = stack.pop()
        m = len(idx)
        if m == 1:
            out.append((_polish_simple(c, complex(z[idx[0]])), 1))
            continue
        pts = z[idx]
        center = complex(pts.mean())
        spread = float(np.abs(pts - center).max())
        # cheap reject: clusters wider than the root scale are never multiple roots
        if spread <= 0.1 * (1.0 + abs(center)):
            refined = _refine_cluster(c, center, m, spread)
            if multiplicity_at(c, refined, m) >= m:
                out.append((refined, m))
                continue
        stack.extend(_mst_split(z, idx))
    return out


def _merge_close(roots: list[tuple[complex, int]], rtol: float = 1e-6) -> list[tuple[complex, int]]:
    """Merge roots closer than ``rtol * (1 + |root|)`` (weighted mean)."""
    roots = list(roots)
    merged = True
    while merged:
        merged = False
        for i in range(len(roots)):
            for j in range(i + 1, len(roots)):
                (a, ma), (b, mb) = roots[i], roots[j]
                if abs(a - b) < rtol * (1.0 + max(abs(a), abs(b))):
                    roots[i] = ((a * ma + b * mb) / (ma + mb), ma + mb)
                    del roots[j]
                    merged = True
                    break
            if merged:
                break
    return roots


def _sort_roots(roots):
    return sorted(roots, key=lambda rm: (round(rm[0].real, 9), round(rm[0].imag, 9)))


def roots(p: Polynomial, max_iter: int = 500) -> list[tuple[complex, int]]:
    """Roots of ``p`` with multiplicities, sorted by real then imaginary part.

    Raises RootFindingError when neither Aberth-Ehrlich nor Durand-Kerner
    converges within ``max_iter`` sweeps.
    """
    if p.degree < 1:
        raise PolynomialError("roots() needs a polynomial of degree >= 1")
    c = p.coeffs
    nz = int(np.argmax(c != 0))
    found: list[tuple[complex, int]] = [(0j, nz)] if nz else []
    c = c[nz:]
    if c.size > 1:
        if c.size == 2:
            found.append((complex(-c[0] / c[1]), 1))
        else:
            z, ok = _aberth(c, max_iter)
            if not ok or not np.all(np.isfinite(z)):
                z, ok = _durand_kerner(c, max_iter)
            if not ok or not np.all(np.isfinite(z)):
                res = np.abs(_horner(c, z)) / np.maximum(_noise_bound(c, z), np.finfo(float).tiny)
                raise RootFindingError(
                    f"root finder did not converge in {max_iter} iterations; "
                    f"max residual/noise ratio {np.nanmax(res):.3g}", residuals=res)
            found.extend(_cluster(c, z))
    return _sort_roots(_merge_close(found))


def reconstruction_residual(p: Polynomial, rts: Sequence[tuple[complex, int]],
                            n_samples: int = 64, seed: int = 0) -> float:
    """max |p(z) - lead * prod (z - r)^m| / scale over sample points."""
    rng = np.random.default_rng(seed)
    radius = 1.0 + max(abs(r) for r, _ in rts)
    z = radius * (rng.uniform(-1, 1, n_samples) + 1j * rng.uniform(-1, 1, n_samples))
    q = np.full(z.shape, p.leading, dtype=complex)
    for r, m in rts:
        q = q * (z - r) ** m
    scale = p.abs_eval(z)
    return float(np.max(np.abs(p(z) - q) / scale))


def deflate(p: Polynomial, x: complex, times: int = 1) -> Polynomial:
    """Divide ``p`` by ``(z - x)**times`` discarding the remainder."""
    c = np.array(p.coeffs)
    for _ in range(times):
        n = c.size - 1
        q = np.zeros(n, dtype=complex)
        if abs(x) <= 1.0:
            acc = 0j
            for j in range(n, 0, -1):
                acc = acc * x + c[j]
                q[j - 1] = acc
        else:
            # backward deflation is stable for large |x|
            acc = 0j
            for j in range(0, n):
                acc = (acc - c[j]) / x
                q[j] = acc
        c = q
    return Polynomial(c)


# --------------------------------------------------------------------------
# rational maps

@dataclass(frozen=True, eq=False)
class RationalMap:
    num: Polynomial
    den: Polynomial
    reduced: bool = False

    def __post_init__(self):
        if self.den.is_zero:
            raise PolynomialError("rational map with zero denominator")

    @property
    def degree(self) -> int:
        return max(self.num.degree, self.den.degree, 0)

    @cached_property
    def poles(self) -> list[tuple[complex, int]]:
        if self.den.degree < 1:
            return []
        return roots(self.den)

    def __call__(self, z):
        if np.ndim(z) == 0:
            return eval_map_safe(self, z)
        return eval_map_array(self.num, self.den, z)

    def normalized(self) -> "RationalMap":
        """Same map with the denominator made monic."""
        lead = self.den.leading
        return RationalMap(self.num.scale(1 / lead), self.den.scale(1 / lead), self.reduced)

    def __repr__(self):
        return f"RationalMap(num={self.num!r}, den={self.den!r}, reduced={self.reduced})"


def reduce(r: RationalMap, candidates=None) -> RationalMap:
    """Cancel every root shared by numerator and denominator.

    Denominator roots are found with multiplicity; each one is then tested
    against the numerator's Taylor expansion to get the shared order.  When
    the caller already knows where the denominator vanishes, ``candidates``
    (pairs ``(w, max_order)``) replaces the root search.
    """
    num, den = r.num, r.den
    if num.is_zero:
        return RationalMap(Polynomial(), Polynomial([1.0]), True)
    if den.degree >= 1 and num.degree >= 1:
        if candidates is None:
            candidates = roots(den)
        for w, mu in candidates:
            nu = min(multiplicity_at(num, w, mu), multiplicity_at(den, w, mu))
            if nu:
                num = deflate(num, w, nu)
                den = deflate(den, w, nu)
            if num.degree < 1 or den.degree < 1:
                break
    return RationalMap(num, den, True)


def eval_map_safe(r: RationalMap, z) -> complex:
    """Evaluate ``num/den`` without overflow; poles give ``INF``.

    Raises UnreducedMapError at a common zero of numerator and denominator.
    """
    z = complex(z)
    if is_infinite(z):
        dn, dd = r.num.degree, r.den.degree
        if dn > dd:
            return INF
        if dn < dd:
            return 0j
        return r.num.leading / r.den.leading
    num, den = r.num.coeffs, r.den.coeffs
    if abs(z) > 1.0:
        w = 1.0 / z
        n_val = _horner(num[::-1], w)
        d_val = _horner(den[::-1], w)
        n_noise = _noise_bound(num[::-1], w)
        d_noise = _noise_bound(den[::-1], w)
    else:
        n_val = _horner(num, z)
        d_val = _horner(den, z)
        n_noise = _noise_bound(num, z)
        d_noise = _noise_bound(den, z)
    n_zero = abs(n_val) <= NOISE_FACTOR * float(n_noise)
    d_zero = abs(d_val) <= NOISE_FACTOR * float(d_noise)
    if d_zero:
        if n_zero:
            raise UnreducedMapError(f"0/0 at z={z}; reduce the map first")
        return INF
    val = complex(n_val / d_val)
    if abs(z) > 1.0:
        k = r.num.degree - r.den.degree
        with np.errstate(over="ignore", invalid="ignore"):
            val = val * z ** k
    return val if np.isfinite(val) else INF


def eval_map_array(num: Polynomial, den: Polynomial, z) -> np.ndarray:
    """Vectorized ``num/den``; poles and overflow map to ``INF``."""
    z = np.asarray(z, dtype=complex)
    out = np.empty_like(z)
    big = np.abs(z) > 1.0
    small = ~big
    nc, dc = num.coeffs, den.coeffs
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        if small.any():
            zs = z[small]
            out[small] = _horner(nc, zs) / _horner(dc, zs)
        if big.any():
            zb = z[big]
            w = 1.0 / zb
            k = num.degree - den.degree
            val = _horner(nc[::-1], w) / _horner(dc[::-1], w)
            if k == 1:
                val = val * zb
            elif k != 0:
                val = val * zb ** k
            out[big] = val
    bad = ~np.isfinite(out)
    if bad.any():
        out[bad] = INF
    return out
