"""Relative position of a hyperboloid and a sphere from their root configuration.

Every verdict is read off the ordering of the four characteristic roots
against the landmarks ``-a^2``, ``0``, ``c^2`` (and ``ar`` for one type).
Coincidences are decided with the cluster bound of the root set, so a
near-tangent input reports the tangent type.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass


from .charpoly import (
    EPS_CLUSTER,
    EPS_DELTA,
    RootSet,
    cardano,
    on_axis,
    on_equator,
    residual_cubic,
    root_set,
)
from .qcore import Sphere, StdHyperboloid


class UnclassifiableRoots(ArithmeticError):
    """No root pattern matched; signals a conflict between numerical bands."""


class RegimeViolation(ValueError):
    """The discriminant fast path was called outside ``r < a`` and ``ar < c^2``."""


class NotTangent(ValueError):
    pass


class PositionType(enum.Enum):
    I = "I"
    E = "E"
    TI = "TI"
    TE = "TE"
    C = "C"
    TIc = "TIc"
    Td = "Td"
    Ca = "Ca"
    TEs = "TEs"
    TEs1 = "TEs1"
    TEs2 = "TEs2"
    Cm = "Cm"
    TEpointBoundary = "TEpointBoundary"

    @property
    def is_tangent(self) -> bool:
        return self in _TANGENT

    @property
    def has_transversal_contact(self) -> bool:
        """Tangent types that also cross the surface elsewhere."""
        return self in (PositionType.Td, PositionType.TEs1, PositionType.TEs2)

    @property
    def description(self) -> str:
        return _DESCRIPTIONS[self]


_TANGENT = frozenset(
    {
        PositionType.TI,
        PositionType.TE,
        PositionType.TIc,
        PositionType.Td,
        PositionType.TEs,
        PositionType.TEs1,
        PositionType.TEs2,
        PositionType.TEpointBoundary,
    }
)

_DESCRIPTIONS = {
    PositionType.I: "sphere interior to the hyperboloid",
    PositionType.E: "sphere exterior to the hyperboloid",
    PositionType.TI: "tangent, sphere centre interior",
    PositionType.TE: "tangent, sphere centre exterior",
    PositionType.C: "non-tangent contact along one curve",
    PositionType.TIc: "tangent along a circle",
    PositionType.Td: "tangent with extra non-tangent contact (interior)",
    PositionType.Ca: "non-tangent contact along two curves around the axis",
    PositionType.TEs: "exterior tangency at two points of one vertical ray",
    PositionType.TEs1: "tangent at the throat with extra non-tangent contact",
    PositionType.TEs2: "exterior tangency with extra non-tangent contact",
    PositionType.Cm: "non-tangent contact along two curves outside the axis",
    PositionType.TEpointBoundary: "single tangency on the throat plane (c^2 = ar)",
}


class Regime(enum.Enum):
    STANDARD = "Standard"
    WIDE_SPHERE = "WideSphere"
    FLAT_THROAT = "FlatThroat"
    BOTH = "Both"


@dataclass(frozen=True)
class RegimeInfo:
    regime: Regime
    wide_sphere: bool
    flat_throat: bool
    kappa_h: float
    kappa_c: float


class Side(enum.Enum):
    INTERIOR = "interior"
    EXTERIOR = "exterior"


class LocusKind(enum.Enum):
    CIRCLE = "circle"
    POINT = "point"
    VERTICAL_PAIR = "vertical_pair"
    POINT_PLUS_CURVE = "point_plus_curve"


@dataclass(frozen=True)
class TangentLocus:
    """Where the two surfaces touch, in the hyperboloid's standard frame.

    For a circle ``points`` holds four samples of it and ``z``/``rho`` give
    its height and radius.
    """

    kind: LocusKind
    points: tuple[tuple[float, float, float], ...]
    z: float | None = None
    rho: float | None = None


@dataclass(frozen=True)
class ContactStatus:
    kind: str  # "none" | "tangent" | "transversal"
    position: PositionType
    side: Side | None = None
    components: int | None = None
    locus: TangentLocus | None = None
    transversal: bool = False

    @property
    def in_contact(self) -> bool:
        return self.kind != "none"


def regime(h: StdHyperboloid, s: Sphere) -> RegimeInfo:
    wide = h.a <= s.r
    flat = h.c**2 < h.a * s.r
    kind = {
        (False, False): Regime.STANDARD,
        (True, False): Regime.WIDE_SPHERE,
        (False, True): Regime.FLAT_THROAT,
        (True, True): Regime.BOTH,
    }[(wide, flat)]
    return RegimeInfo(kind, wide, flat, h.a / h.c**2, 1.0 / s.r)


def classify(h: StdHyperboloid, s: Sphere, tol: float = EPS_CLUSTER) -> PositionType:
    return classify_roots(h, s, root_set(h, s, eps=tol))


def classify_roots(h: StdHyperboloid, s: Sphere, roots: RootSet) -> PositionType:
    """Match a solved root set against the position tables."""
    a2, c2, ar = h.a**2, h.c**2, h.a * s.r
    bound = roots.eps * roots.scale()

    def near(x, y):
        return abs(x - y) <= bound

    if roots.complex_pair is not None:
        return PositionType.C

    real = roots.cubic_real
    if len(real) == 1:
        (only,) = real
        if near(only.value, c2):
            return PositionType.TEpointBoundary
        raise UnclassifiableRoots(f"triple root {only.value!r} of the cubic is not c^2 = {c2!r}")

    flat = c2 < ar * (1.0 + roots.eps)
    wide = h.a <= s.r * (1.0 + roots.eps)
    values = [r.value for r in real for _ in range(r.multiplicity)]
    double = next((r.value for r in real if r.multiplicity == 2), None)
    negatives = [v for v in values if v < 0]

    if len(negatives) == 2:
        n1, n2 = negatives
        if double is not None or (near(n1, -a2) and near(n2, -a2)):
            d = double if double is not None else 0.5 * (n1 + n2)
            if near(d, -a2):
                return _guard(PositionType.TIc, wide)
            if d > -a2:
                return PositionType.TI
            return _guard(PositionType.Td, wide)
        if n1 >= -a2 - bound:
            return PositionType.I
        if n2 <= -a2 + bound:
            return _guard(PositionType.Ca, wide)
        raise UnclassifiableRoots(f"-a^2 = {-a2!r} lies strictly between negative roots {n1!r}, {n2!r}")

    if len(negatives) != 0:
        raise UnclassifiableRoots(f"cubic roots {values!r} have an impossible sign pattern")

    p1, p2, p3 = values
    if near(p1, c2) and near(p3, c2):
        return PositionType.TEpointBoundary
    if double is not None:
        lower = real[0].multiplicity == 2
        if lower:
            if near(double, c2):
                return _guard(PositionType.TEs, flat)
            if double < c2:
                return PositionType.TE
            return _guard(PositionType.TEs2, flat)
        # double above the simple root
        if near(double, c2):
            # c^2 double above the other root only when c^2 > ar: the common
            # tangent points are complex, the sphere stays outside
            if flat:
                raise UnclassifiableRoots("upper double root at c^2 with c^2 < ar")
            return PositionType.E
        if near(p1, c2):
            return _guard(PositionType.TEs1, flat)
        if p1 > c2:
            return _guard(PositionType.TEs2, flat)
        raise UnclassifiableRoots(f"c^2 = {c2!r} lies strictly between roots {p1!r} and a double {double!r}")

    if p1 >= c2 - bound and not near(p2, c2):
        return _guard(PositionType.Cm, flat)
    if p2 <= c2 + bound and c2 <= p3 + bound:
        return PositionType.E
    raise UnclassifiableRoots(f"positive roots {values!r} straddle c^2 = {c2!r}")


def _guard(kind: PositionType, allowed: bool) -> PositionType:
    if not allowed:
        raise UnclassifiableRoots(f"type {kind.value} reached outside its regime")
    return kind


def multiple_root_pattern(roots: RootSet) -> bool:
    """A multiple root other than ``-a^2``, or ``-a^2`` of multiplicity three."""
    for r in roots.clusters:
        if r.value == roots.fixed_root:
            if r.multiplicity >= 3:
                return True
        elif r.multiplicity >= 2:
            return True
    return False


def contact_status(h: StdHyperboloid, s: Sphere, tol: float = EPS_CLUSTER) -> ContactStatus:
    t = classify(h, s, tol)
    if t is PositionType.I:
        return ContactStatus("none", t, side=Side.INTERIOR)
    if t is PositionType.E:
        return ContactStatus("none", t, side=Side.EXTERIOR)
    if t is PositionType.C:
        return ContactStatus("transversal", t, components=1)
    if t in (PositionType.Ca, PositionType.Cm):
        return ContactStatus("transversal", t, components=2)
    return ContactStatus(
        "tangent",
        t,
        locus=tangent_locus(h, s, t, tol),
        transversal=t.has_transversal_contact,
    )


def fast_contact(h: StdHyperboloid, s: Sphere, eps_delta: float = EPS_DELTA) -> str:
    """Contact verdict from the sign of the cubic's discriminant alone.

    Only valid for ``r < a`` and ``ar < c^2``. Returns ``"none"``,
    ``"tangent"`` or ``"contact"``.

    A near-zero discriminant can also come from a landmark root touching a
    cubic root without tangency: ``-a^2`` on the axis (``r < a`` rules out the
    triple) or a double ``c^2`` with ``c^2 > ar``. Both are reported as no
    contact.
    """
    if not (s.r < h.a and h.a * s.r < h.c**2):
        raise RegimeViolation("fast path needs r < a and ar < c^2")
    cubic = residual_cubic(h, s)
    disc = cardano(cubic)
    sign = disc.sign(eps_delta)
    if sign > 0:
        return "contact"
    if sign < 0:
        return "none"
    double = _double_root_estimate(cubic, disc)
    simple = -cubic.a2 - 2.0 * double
    landmarks = []
    if on_axis(h, s):
        landmarks.append(-(h.a**2))
    if on_equator(h, s):
        landmarks.append(h.c**2)
    for landmark in landmarks:
        if abs(double - landmark) < abs(simple - landmark):
            return "none"
    return "tangent"


def _double_root_estimate(cubic, disc) -> float:
    # Q^3 = -R^2 gives the depressed double root R/Q
    if disc.Q == 0:
        return -cubic.a2 / 3.0
    return disc.R / disc.Q - cubic.a2 / 3.0


def _double_value(roots: RootSet) -> float:
    for r in roots.cubic_real:
        if r.multiplicity >= 2:
            return r.value
    raise NotTangent("root set has no multiple root")


def _kernel_point(h: StdHyperboloid, s: Sphere, lam: float) -> tuple[float, float, float]:
    # (lam H + S) X = 0 with X = (x, y, z, 1); the 3x3 block is diagonal
    a2, c2 = h.a**2, h.c**2
    xc, yc, zc = s.center
    k = a2 / (lam + a2)
    z = c2 * zc / (c2 - lam) if c2 != lam else 0.0
    return (k * xc, k * yc, z)


def tangent_locus(h: StdHyperboloid, s: Sphere, t: PositionType, tol: float = EPS_CLUSTER) -> TangentLocus:
    """Tangency points for a tangent verdict ``t`` (standard frame)."""
    if not t.is_tangent:
        raise NotTangent(f"type {t.value} is not a tangent configuration")
    a2, c2 = h.a**2, h.c**2
    cos_t, sin_t = math.cos(s.theta_c), math.sin(s.theta_c)

    if t is PositionType.TIc:
        z = s.z_c * c2 / (a2 + c2)
        rho = h.a * math.sqrt(1.0 + z * z / c2)
        pts = tuple((rho * math.cos(k * math.pi / 2), rho * math.sin(k * math.pi / 2), z) for k in range(4))
        return TangentLocus(LocusKind.CIRCLE, pts, z=z, rho=rho)

    if t is PositionType.TEs:
        rho = a2 * s.rho_c / (a2 + c2)
        z = math.sqrt(max(0.0, c2 * (a2 * s.rho_c**2 / (a2 + c2) ** 2 - 1.0)))
        pts = ((rho * cos_t, rho * sin_t, z), (rho * cos_t, rho * sin_t, -z))
        return TangentLocus(LocusKind.VERTICAL_PAIR, pts, z=z, rho=rho)

    if t is PositionType.TEs1:
        return TangentLocus(LocusKind.POINT_PLUS_CURVE, ((h.a * cos_t, h.a * sin_t, 0.0),))

    if t is PositionType.TEpointBoundary:
        rho = a2 * s.rho_c / (a2 + c2)
        return TangentLocus(LocusKind.POINT, ((rho * cos_t, rho * sin_t, 0.0),), z=0.0, rho=rho)

    lam = _double_value(root_set(h, s, eps=tol))
    kind = LocusKind.POINT_PLUS_CURVE if t.has_transversal_contact else LocusKind.POINT
    return TangentLocus(kind, (_kernel_point(h, s, lam),))
