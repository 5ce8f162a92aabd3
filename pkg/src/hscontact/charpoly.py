"""Characteristic polynomial ``det(lambda H + S)`` of a hyperboloid/sphere pair.

``-a^2`` is always a root, so the work is done on the monic residual cubic
``g`` with ``f(lambda) = (a^2 + lambda) g(lambda) / (a^4 c^2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qcore import Sphere, StdHyperboloid, hyperboloid_matrix, sphere_matrix

EPS_CLUSTER = 1e-7
EPS_DELTA = 1e-10
EPS_AXIS = 1e-9
EPS_COND = 1e-9
_ROUNDING = 8.0 * np.finfo(float).eps

_SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class CubicPoly:
    """Monic cubic ``lambda^3 + a2 lambda^2 + a1 lambda + a0``."""

    a2: float
    a1: float
    a0: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.a2, self.a1, self.a0)):
            raise ValueError("cubic coefficients must be finite")

    def __call__(self, x):
        return ((x + self.a2) * x + self.a1) * x + self.a0

    def deriv(self, x):
        return (3.0 * x + 2.0 * self.a2) * x + self.a1

    def deriv2(self, x):
        return 6.0 * x + 2.0 * self.a2

    @property
    def coeffs(self) -> tuple[float, float, float, float]:
        return (1.0, self.a2, self.a1, self.a0)


@dataclass(frozen=True)
class QuarticPoly:
    """``c4 lambda^4 + ... + c0``, highest degree first in :attr:`coeffs`."""

    c4: float
    c3: float
    c2: float
    c1: float
    c0: float

    @property
    def coeffs(self) -> tuple[float, float, float, float, float]:
        return (self.c4, self.c3, self.c2, self.c1, self.c0)

    def __call__(self, x):
        return (((self.c4 * x + self.c3) * x + self.c2) * x + self.c1) * x + self.c0


@dataclass(frozen=True)
class Discriminant:
    Q: float
    R: float
    delta: float
    noise: float = 0.0

    def band(self, eps: float = EPS_DELTA) -> float:
        """Half-width of the band treated as ``delta == 0``.

        ``eps`` relative to ``|Q|^3 + R^2``, which scales like ``delta`` itself,
        plus the rounding error of ``delta``. Both parts are unit-free, so the
        verdict does not depend on the unit of length.
        """
        return eps * (abs(self.Q) ** 3 + self.R**2) + self.noise

    def sign(self, eps: float = EPS_DELTA) -> int:
        band = self.band(eps)
        if self.delta > band:
            return 1
        if self.delta < -band:
            return -1
        return 0


@dataclass(frozen=True)
class Root:
    value: float
    multiplicity: int


@dataclass(frozen=True)
class CubicRoots:
    """Roots of the residual cubic: clustered reals plus an optional complex pair.

    ``complex_pair`` is ``(re, im)`` with ``im > 0``.
    """

    real: tuple[Root, ...]
    complex_pair: tuple[float, float] | None = None

    def __post_init__(self):
        count = sum(r.multiplicity for r in self.real) + (2 if self.complex_pair else 0)
        if count != 3:
            raise ValueError(f"a cubic has 3 roots with multiplicity, got {count}")

    def values(self) -> list[complex]:
        out: list[complex] = []
        for r in self.real:
            out.extend([complex(r.value)] * r.multiplicity)
        if self.complex_pair is not None:
            re, im = self.complex_pair
            out.extend([complex(re, im), complex(re, -im)])
        return out

    @property
    def has_multiple(self) -> bool:
        return any(r.multiplicity > 1 for r in self.real)


@dataclass(frozen=True)
class RootSet:
    """All four characteristic roots: the fixed ``-a^2`` and the cubic's three.

    ``clusters`` lists every real root of ``f`` with its total multiplicity
    (the fixed root merged in when the cubic also vanishes at ``-a^2``).
    """

    fixed_root: float
    cubic: CubicRoots
    eps: float

    @property
    def cubic_real(self) -> tuple[Root, ...]:
        return self.cubic.real

    @property
    def complex_pair(self) -> tuple[float, float] | None:
        return self.cubic.complex_pair

    @property
    def clusters(self) -> tuple[Root, ...]:
        merged = [Root(r.value, r.multiplicity) for r in self.cubic.real]
        for i, r in enumerate(merged):
            if r.value == self.fixed_root:
                merged[i] = Root(r.value, r.multiplicity + 1)
                break
        else:
            merged.append(Root(self.fixed_root, 1))
        return tuple(sorted(merged, key=lambda r: r.value))

    def values(self) -> list[complex]:
        return [complex(self.fixed_root)] + self.cubic.values()

    def product(self) -> float:
        prod = self.fixed_root
        for r in self.cubic.real:
            prod *= r.value**r.multiplicity
        if self.complex_pair is not None:
            re, im = self.complex_pair
            prod *= re * re + im * im
        return prod

    def scale(self) -> float:
        """Largest root modulus; never zero since ``-a^2`` is a root."""
        return max(abs(v) for v in self.values())


def residual_cubic(h: StdHyperboloid, s: Sphere) -> CubicPoly:
    a2, c2, r2 = h.a**2, h.c**2, s.r**2
    xc, yc, zc = s.center
    rho2 = xc * xc + yc * yc
    z2 = zc * zc
    return CubicPoly(
        a2 - c2 + r2 - rho2 - z2,
        -(a2 * c2 - a2 * r2 + c2 * r2 - c2 * rho2 + a2 * z2),
        -a2 * c2 * r2,
    )


def full_quartic(h: StdHyperboloid, s: Sphere) -> QuarticPoly:
    g = residual_cubic(h, s)
    a2 = h.a**2
    k = 1.0 / (h.a**4 * h.c**2)
    return QuarticPoly(
        k,
        k * (g.a2 + a2),
        k * (g.a1 + a2 * g.a2),
        k * (g.a0 + a2 * g.a1),
        -(s.r**2),  # a^2 * a0 / (a^4 c^2) == -r^2 exactly
    )


def cardano(cubic: CubicPoly) -> Discriminant:
    a2, a1, a0 = cubic.a2, cubic.a1, cubic.a0
    Q = (3.0 * a1 - a2 * a2) / 9.0
    R = (9.0 * a2 * a1 - 27.0 * a0 - 2.0 * a2**3) / 54.0
    # Q and R cancel heavily near a triple root; bound the error they carry into delta
    err_q = (3.0 * abs(a1) + a2 * a2) / 9.0
    err_r = (9.0 * abs(a2 * a1) + 27.0 * abs(a0) + 2.0 * abs(a2) ** 3) / 54.0
    noise = _ROUNDING * (3.0 * Q * Q * err_q + 2.0 * abs(R) * err_r)
    return Discriminant(Q, R, Q**3 + R**2, noise)


def _newton(f, df, x: float, steps: int = 2) -> float:
    for _ in range(steps):
        d = df(x)
        if d == 0 or not math.isfinite(d):
            break
        step = f(x) / d
        if not math.isfinite(step):
            break
        x -= step
    return x


def _raw_roots(cubic: CubicPoly, disc: Discriminant) -> list[complex]:
    """Unpolished roots; trigonometric form when ``delta <= 0``."""
    shift = cubic.a2 / 3.0
    Q, R = disc.Q, disc.R
    if disc.delta <= 0 and Q < 0:
        sq = math.sqrt(-Q)
        arg = max(-1.0, min(1.0, R / (sq**3)))
        theta = math.acos(arg)
        return [complex(2.0 * sq * math.cos((theta + 2.0 * math.pi * k) / 3.0) - shift) for k in range(3)]
    sd = math.sqrt(max(disc.delta, 0.0))
    # pick the larger-magnitude branch first to avoid cancellation
    big = R + math.copysign(sd, R) if R != 0 else sd
    S = math.copysign(abs(big) ** (1.0 / 3.0), big)
    T = -Q / S if S != 0 else 0.0
    x1 = S + T - shift
    re = -0.5 * (S + T) - shift
    im = 0.5 * _SQRT3 * abs(S - T)
    return [complex(x1), complex(re, im), complex(re, -im)]


def _deflate(cubic: CubicPoly, x1: float) -> tuple[float, float]:
    """Sum and product of the two roots other than ``x1``."""
    total = -cubic.a2 - x1
    if abs(x1) > 1.0 and x1 != 0:
        prod = -cubic.a0 / x1
    else:
        prod = cubic.a1 - x1 * total
    return total, prod


def _pair_from(total: float, prod: float) -> tuple[tuple[float, float] | None, list[float]]:
    disc = total * total - 4.0 * prod
    if disc < 0:
        return (0.5 * total, 0.5 * math.sqrt(-disc)), []
    sq = math.sqrt(disc)
    big = 0.5 * (total + math.copysign(sq, total)) if total != 0 else 0.5 * sq
    small = prod / big if big != 0 else -big
    return None, sorted([big, small])


def _cluster_bound(values, eps: float) -> float:
    # purely relative, so clustering does not depend on the unit of length
    return eps * max(abs(v) for v in values)


def solve_cubic(cubic: CubicPoly, eps: float = EPS_CLUSTER, eps_delta: float = EPS_DELTA) -> CubicRoots:
    """Roots of a monic cubic, clustered into multiplicities.

    The Cardano discriminant decides the structure: outside the band of
    :meth:`Discriminant.band` the roots are three distinct reals
    (``delta < 0``) or one real and a complex pair (``delta > 0``);
    inside the band the closest pair is merged into a double root, and into a
    triple root when the third root lies within the ``eps`` cluster bound.
    """
    disc = cardano(cubic)
    sign = disc.sign(eps_delta)
    raw = _raw_roots(cubic, disc)

    if sign < 0:
        reals = sorted(_newton(cubic, cubic.deriv, z.real) for z in raw)
        return CubicRoots(tuple(Root(x, 1) for x in reals))

    if sign > 0:
        x1 = _newton(cubic, cubic.deriv, raw[0].real)
        pair, reals = _pair_from(*_deflate(cubic, x1))
        if pair is None:
            # round-off pushed a tiny imaginary part to zero
            re = 0.5 * sum(reals)
            pair = (re, 0.0)
        if pair[1] <= _cluster_bound([x1, pair[0]], eps):
            return _from_double(cubic, pair[0], x1, eps)
        return CubicRoots((Root(x1, 1),), pair)

    # multiple-root band: merge the closest pair
    if abs(raw[1].imag) > 0:
        return _from_double(cubic, raw[1].real, raw[0].real, eps)
    vals = sorted(z.real for z in raw)
    if vals[1] - vals[0] <= vals[2] - vals[1]:
        return _from_double(cubic, 0.5 * (vals[0] + vals[1]), vals[2], eps)
    return _from_double(cubic, 0.5 * (vals[1] + vals[2]), vals[0], eps)


def _from_double(cubic: CubicPoly, double: float, simple: float, eps: float) -> CubicRoots:
    # a double root of g is a simple root of g'
    double = _newton(cubic.deriv, cubic.deriv2, double)
    simple = -cubic.a2 - 2.0 * double
    simple = _newton(cubic, cubic.deriv, simple)
    if abs(simple - double) <= _cluster_bound([simple, double], eps):
        return CubicRoots((Root(-cubic.a2 / 3.0, 3),))
    roots = sorted([Root(double, 2), Root(simple, 1)], key=lambda r: r.value)
    return CubicRoots(tuple(roots))


def on_axis(h: StdHyperboloid, s: Sphere, eps: float = EPS_AXIS) -> bool:
    return s.rho_c <= eps * _length_scale(h, s)


def on_equator(h: StdHyperboloid, s: Sphere, eps: float = EPS_AXIS) -> bool:
    return abs(s.z_c) <= eps * _length_scale(h, s)


def _length_scale(h: StdHyperboloid, s: Sphere) -> float:
    return max(h.a, h.c, s.r, *(abs(v) for v in s.center))


def axis_roots(h: StdHyperboloid, s: Sphere) -> tuple[float, float]:
    """``(lambda_-, lambda_+)`` for a sphere centred on OZ (beside ``-a^2``)."""
    c2, r2, z2 = h.c**2, s.r**2, s.z_c**2
    b = c2 - r2 + z2
    sq = math.sqrt(b * b + 4.0 * c2 * r2)
    if b >= 0:
        plus = 0.5 * (b + sq)
        minus = -c2 * r2 / plus
    else:
        minus = 0.5 * (b - sq)
        plus = -c2 * r2 / minus
    return minus, plus


def tic_condition(h: StdHyperboloid, s: Sphere, eps: float = EPS_COND) -> bool:
    """True when ``r^2 = a^2 + a^2 z_c^2 / (a^2 + c^2)``: ``-a^2`` is a triple root."""
    a2 = h.a**2
    target = a2 + a2 * s.z_c**2 / (a2 + h.c**2)
    return abs(s.r**2 - target) <= eps * max(s.r**2, target)


def root_set(
    h: StdHyperboloid,
    s: Sphere,
    eps: float = EPS_CLUSTER,
    eps_delta: float = EPS_DELTA,
) -> RootSet:
    """Solve the characteristic polynomial with landmark roots kept exact.

    Centres on the axis (``x_c = y_c = 0``) use the closed forms for the two
    non-fixed roots and make ``-a^2`` a double root of the cubic exactly when
    the triple-root identity holds. Centres on the equatorial plane
    (``z_c = 0``) factor ``c^2`` out of the cubic and solve the remaining
    quadratic in closed form; multiplicity there is still decided by the
    cubic's discriminant band, as in :func:`solve_cubic`.
    """
    cubic = residual_cubic(h, s)
    fixed = -(h.a**2)
    c2 = h.c**2

    if on_axis(h, s):
        if on_equator(h, s):
            minus, plus = -(s.r**2), c2
            if abs(minus - fixed) <= _cluster_bound([minus, fixed], eps) or tic_condition(h, s):
                minus = fixed
        else:
            minus, plus = axis_roots(h, s)
            if tic_condition(h, s):
                minus = fixed
        roots = [Root(minus, 1), Root(fixed, 1)] if minus != fixed else [Root(fixed, 2)]
        roots.append(Root(plus, 1))
        return RootSet(fixed, CubicRoots(tuple(sorted(roots, key=lambda r: r.value))), eps)

    if on_equator(h, s):
        return RootSet(fixed, _equator_roots(h, s, cubic, eps, eps_delta), eps)

    return RootSet(fixed, solve_cubic(cubic, eps, eps_delta), eps)


def _equator_roots(h: StdHyperboloid, s: Sphere, cubic: CubicPoly, eps: float, eps_delta: float) -> CubicRoots:
    # g = -(c^2 - lambda) (lambda^2 + B lambda + a^2 r^2)
    c2 = h.c**2
    ar2 = (h.a * s.r) ** 2
    b = h.a**2 + s.r**2 - s.rho_c**2
    pair, reals = _pair_from(-b, ar2)
    disc = cardano(cubic)
    if disc.sign(eps_delta) != 0:
        if pair is not None:
            return CubicRoots((Root(c2, 1),), pair)
        return CubicRoots(tuple(sorted([Root(c2, 1)] + [Root(x, 1) for x in reals], key=lambda r: r.value)))

    # inside the multiple-root band: merge the closest of the three pairs
    if pair is not None:
        double, other = pair[0], c2
    else:
        lo, hi = reals
        gaps = {"pair": hi - lo, "lo": abs(lo - c2), "hi": abs(hi - c2)}
        nearest = min(gaps, key=gaps.get)
        if nearest == "pair":
            double, other = 0.5 * (lo + hi), c2
        else:
            double, other = c2, (hi if nearest == "lo" else lo)
    if abs(double - other) <= _cluster_bound([double, other], eps):
        return CubicRoots((Root(c2, 3),))
    return CubicRoots(tuple(sorted([Root(double, 2), Root(other, 1)], key=lambda r: r.value)))


def char_roots_numeric(h: StdHyperboloid, s: Sphere, hmat=None, smat=None) -> np.ndarray:
    """Eigenvalues of ``-H^{-1} S``: an independent route to the four roots."""
    H = hyperboloid_matrix(h).m if hmat is None else np.asarray(hmat)
    S = sphere_matrix(s).m if smat is None else np.asarray(smat)
    return np.linalg.eigvals(-np.linalg.solve(H, S))


def root_margin(h: StdHyperboloid, s: Sphere, roots: RootSet | None = None) -> float:
    """Smallest root-root or cubic-root-landmark gap, relative to ``max|root|``.

    Landmarks are ``-a^2``, ``0``, ``c^2`` and ``ar``. A configuration whose
    margin is a few ``EPS_CLUSTER`` or more is far from every tangency and
    every table boundary.
    """
    if roots is None:
        roots = root_set(h, s)
    values = roots.values()
    cubic = values[1:]
    landmarks = (-(h.a**2), 0.0, h.c**2, h.a * s.r)
    gaps = [abs(x - y) for i, x in enumerate(values) for y in values[i + 1 :]]
    gaps += [abs(x - mark) for x in cubic for mark in landmarks]
    return min(gaps) / roots.scale()
