"""Track the position type of a sphere whose centre moves along a path.

The type is piecewise constant in the path parameter and changes only where
the characteristic polynomial acquires a multiple root or a root crosses a
landmark. ``sweep`` samples the path, brackets each change by bisection and,
when two non-tangent types meet, recovers the tangent type passed through at
the frontier.
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .charpoly import EPS_CLUSTER, EPS_DELTA, CubicRoots, Root, RootSet, cardano, residual_cubic, root_set
from .classify import PositionType, UnclassifiableRoots, classify, classify_roots
from .qcore import Sphere, StdHyperboloid

log = logging.getLogger(__name__)

BISECT_WIDTH = 1e-10


class CenterPath:
    """Continuous map ``t in [0, 1] -> sphere centre``.

    Built either from waypoints (piecewise linear, each leg taking an equal
    share of the parameter range) or from a callable.
    """

    def __init__(self, waypoints=None, func: Callable[[float], np.ndarray] | None = None):
        if (waypoints is None) == (func is None):
            raise ValueError("give exactly one of waypoints or func")
        self.func = func
        self.waypoints = None
        if waypoints is not None:
            pts = np.array(waypoints, dtype=float)
            if pts.ndim != 2 or pts.shape[1] != 3 or len(pts) < 2:
                raise ValueError("a path needs at least 2 waypoints with 3 coordinates each")
            if not np.all(np.isfinite(pts)):
                raise ValueError("waypoints must be finite")
            pts.setflags(write=False)
            self.waypoints = pts

    @classmethod
    def line(cls, start, end) -> CenterPath:
        return cls([start, end])

    def __call__(self, t: float) -> np.ndarray:
        if self.func is not None:
            return np.asarray(self.func(t), dtype=float)
        legs = len(self.waypoints) - 1
        u = min(max(t, 0.0), 1.0) * legs
        k = min(int(u), legs - 1)
        frac = u - k
        return (1.0 - frac) * self.waypoints[k] + frac * self.waypoints[k + 1]

    def reversed(self) -> CenterPath:
        if self.func is not None:
            f = self.func
            return CenterPath(func=lambda t: f(1.0 - t))
        return CenterPath(self.waypoints[::-1])


@dataclass(frozen=True)
class Segment:
    t0: float
    t1: float
    kind: PositionType


@dataclass(frozen=True)
class Event:
    t: float
    before: PositionType
    after: PositionType
    width: float


@dataclass(frozen=True)
class SweepReport:
    segments: tuple[Segment, ...]
    events: tuple[Event, ...]

    def kinds(self) -> list[PositionType]:
        return [seg.kind for seg in self.segments]


class _Classifier:
    def __init__(self, h: StdHyperboloid, r: float, path: CenterPath, tol: float):
        self.h, self.r, self.path, self.tol = h, r, path, tol

    def sphere(self, t: float) -> Sphere:
        return Sphere(tuple(self.path(t)), self.r)

    def __call__(self, t: float) -> PositionType:
        return classify(self.h, self.sphere(t), self.tol)

    def delta(self, t: float) -> float:
        """``Delta(t)`` relative to ``|Q|^3 + R^2``; zero at a multiple root."""
        d = cardano(residual_cubic(self.h, self.sphere(t)))
        size = abs(d.Q) ** 3 + d.R**2 + d.noise
        return d.delta / size if size > 0 else 0.0

    def landmark_gap(self, t: float, mark: float) -> float:
        """Signed gap ``lambda(t) - mark`` of the real cubic root nearest ``mark``.

        One root sitting exactly on ``mark`` (the axis root at ``-a^2``) is a
        fixed part of the configuration, not the crossing root, and is skipped.
        """
        rs = root_set(self.h, self.sphere(t), eps=self.tol)
        real = [r.value for r in rs.cubic_real for _ in range(r.multiplicity)]
        if mark in real:
            real.remove(mark)
        if not real:
            return 0.0
        return min(real, key=lambda v: abs(v - mark)) - mark

    def gaps(self, t: float) -> dict:
        """Every root-root and root-landmark gap at ``t``, keyed by its pair."""
        rs = root_set(self.h, self.sphere(t), eps=self.tol)
        cubic = rs.values()[1:]
        marks = {"-a2": -(self.h.a**2), "c2": self.h.c**2}
        out = {}
        for i in range(3):
            for j in range(i + 1, 3):
                out[(i, j)] = abs(cubic[i] - cubic[j])
            for name, mark in marks.items():
                out[(i, name)] = abs(cubic[i] - mark)
        return out, rs, cubic, marks


def _bisect(cls: _Classifier, lo: float, hi: float, kind_lo: PositionType) -> tuple[float, float]:
    """Shrink ``[lo, hi]`` keeping ``kind_lo`` at ``lo`` and a different type at ``hi``."""
    while hi - lo > BISECT_WIDTH:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if cls(mid) is kind_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def _forced_tangent(cls: _Classifier, lo: float, hi: float, t_prev: float, t_next: float) -> PositionType | None:
    """Tangent type at a frontier between two non-tangent types.

    The roots at the bracket midpoint are nearly coincident, or nearly on a
    landmark. The closest such pair is forced to coincide and the resulting
    root set is classified. Pairs that are already coincident at both sample
    ends (for instance the axis root fixed at ``-a^2`` on an axis path) are
    not the event and are skipped.
    """
    mid = 0.5 * (lo + hi)
    gaps, rs, cubic, marks = cls.gaps(mid)
    ends = [cls.gaps(t_prev)[0], cls.gaps(t_next)[0]]
    scale = rs.scale()
    band = cls.tol * scale
    candidates = [key for key in gaps if not (ends[0][key] <= band and ends[1][key] <= band)]
    if not candidates:
        return None
    key = min(candidates, key=lambda k: gaps[k])
    i, j = key
    values = list(cubic)
    if isinstance(j, str):
        values[i] = complex(marks[j])
    else:
        values[i] = values[j] = complex((cubic[i] + cubic[j]).real / 2.0)
    # a conjugate pair not involved in the coincidence stays complex
    pair = next(((v.real, abs(v.imag)) for v in values if v.imag != 0.0), None)
    roots = []
    for v in sorted(v.real for v in values if v.imag == 0.0):
        if roots and roots[-1].value == v:
            roots[-1] = Root(v, roots[-1].multiplicity + 1)
        else:
            roots.append(Root(v, 1))
    forced = RootSet(rs.fixed_root, CubicRoots(tuple(roots), pair), rs.eps)
    try:
        kind = classify_roots(cls.h, cls.sphere(mid), forced)
    except UnclassifiableRoots:
        log.debug("forced coincidence %s at t=%.12g is unclassifiable", key, mid)
        return None
    return kind if kind.is_tangent else None


def sweep(
    h: StdHyperboloid,
    r: float,
    path: CenterPath,
    n_steps: int = 200,
    tol: float = EPS_CLUSTER,
) -> SweepReport:
    """Classify along ``path`` and bracket every change of position type.

    Changes are bracketed to a parameter width of 1e-10. A change that
    happens and reverts between two samples is not seen: the sampling step
    is the resolution of the sweep.
    """
    if n_steps < 2:
        raise ValueError(f"n_steps must be >= 2, got {n_steps}")
    cls = _Classifier(h, r, path, tol)
    ts = np.linspace(0.0, 1.0, n_steps + 1)
    kinds = [cls(float(t)) for t in ts]

    # boundaries as (end of previous segment, start of next, next kind)
    cuts: list[tuple[float, float, PositionType]] = []
    for k in range(n_steps):
        t_prev, t_next = float(ts[k]), float(ts[k + 1])
        lo, cur = t_prev, kinds[k]
        while cls(t_next) is not cur:
            lo, hi = _bisect(cls, lo, t_next, cur)
            after = cls(hi)
            if not cur.is_tangent and not after.is_tangent:
                tangent = _forced_tangent(cls, lo, hi, t_prev, t_next)
                if tangent is not None and tangent not in (cur, after):
                    # the tangent segment is the bracket itself
                    cuts.append((lo, lo, tangent))
                    cuts.append((hi, hi, after))
                    cur, lo = after, hi
                    continue
            cuts.append((lo, hi, after))
            cur, lo = after, hi

    segments = []
    start, kind = 0.0, kinds[0]
    for t_end, t_next, nxt in cuts:
        segments.append(Segment(start, t_end, kind))
        start, kind = t_next, nxt
    segments.append(Segment(start, 1.0, kind))
    segments, times = _pin_tangencies(cls, segments, 1.0 / n_steps)

    events = []
    for k in range(len(segments) - 1):
        left, right = segments[k], segments[k + 1]
        t_event, width = times.get(k, (0.5 * (left.t1 + right.t0), right.t0 - left.t1))
        events.append(Event(t_event, left.kind, right.kind, width))
    report = SweepReport(tuple(segments), tuple(events))
    log.debug("sweep: %d segments, %d events", len(segments), len(events))
    return report


def _pin_tangencies(cls: _Classifier, segments: list[Segment], step: float):
    """Collapse each short tangent segment onto the zero of the discriminant.

    A tangency is an instant, but the cluster tolerance classifies a small
    parameter window around it as tangent. Between two non-tangent types
    every tangent type carries a multiple root of the residual cubic, so the
    tangency is where ``Delta(t)`` vanishes; it is located to ``BISECT_WIDTH``
    inside the bracket spanned by the neighbouring segments.

    Returns the new segments and ``{boundary index: (t, width)}``.
    """
    out = list(segments)
    times = {}
    for k in range(1, len(out) - 1):
        seg, left, right = out[k], out[k - 1], out[k + 1]
        if not seg.kind.is_tangent or left.kind.is_tangent or right.kind.is_tangent:
            continue
        if seg.t1 - seg.t0 >= step:
            continue
        lo, hi = left.t1, right.t0
        if hi - lo <= 0.0:
            continue
        t_star = _tangency_time(cls, lo, hi)
        if t_star is None:
            log.debug("no tangency located in [%.12g, %.12g]; keeping the classified window", lo, hi)
            continue
        width = min(BISECT_WIDTH, hi - lo)
        out[k - 1] = Segment(left.t0, t_star, left.kind)
        out[k] = Segment(t_star, t_star, seg.kind)
        out[k + 1] = Segment(t_star, right.t1, right.kind)
        times[k - 1] = times[k] = (t_star, width)
    return out, times


def _tangency_time(cls: _Classifier, lo: float, hi: float) -> float | None:
    """Parameter of the tangency inside ``[lo, hi]``.

    A real/complex change flips the sign of ``Delta``. When ``Delta`` only
    touches zero (a root passing through ``-a^2`` on the axis), the signed
    landmark gap flips instead. Failing both, ``|Delta|`` is minimised.
    """
    xtol = BISECT_WIDTH / 4
    if cls.delta(lo) * cls.delta(hi) < 0:
        return brentq(cls.delta, lo, hi, xtol=xtol)
    for mark in (-(cls.h.a**2), cls.h.c**2):
        if cls.landmark_gap(lo, mark) * cls.landmark_gap(hi, mark) < 0:
            return brentq(cls.landmark_gap, lo, hi, args=(mark,), xtol=xtol)
    res = minimize_scalar(lambda t: abs(cls.delta(t)), bounds=(lo, hi), method="bounded", options={"xatol": xtol})
    if res.success and res.fun <= EPS_DELTA:
        return float(res.x)
    return None
