"""Brute-force contact check by sampling the sphere function on the hyperboloid.

The one-sheet hyperboloid has the global chart
``P(theta, t) = (a cosh t cos theta, a cosh t sin theta, c sinh t)``, so the
sign of ``q = |P - center|^2 - r^2`` on a (theta, t) grid tells whether the
sphere cuts the surface, and the connected components of the sign-change
cells count the intersection curves.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .classify import ContactStatus, Side, contact_status
from .qcore import Sphere, StdHyperboloid, classify_points

log = logging.getLogger(__name__)

DEFAULT_RESOLUTION = 512


class InconclusiveNearTangent(RuntimeError):
    """No sign change on the grid, but a zero may hide between nodes."""


@dataclass(frozen=True)
class SampleGrid:
    n_theta: int
    n_t: int
    t_max: float
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.n_theta < 8 or self.n_t < 8:
            raise ValueError(f"grid needs at least 8x8 nodes, got {self.n_theta}x{self.n_t}")
        if not self.t_max > 0:
            raise ValueError(f"t_max must be > 0, got {self.t_max!r}")
        if self.values.shape != (self.n_theta, self.n_t):
            raise ValueError("values shape does not match (n_theta, n_t)")

    @property
    def d_theta(self) -> float:
        return 2.0 * math.pi / self.n_theta

    @property
    def d_t(self) -> float:
        return 2.0 * self.t_max / (self.n_t - 1)


@dataclass(frozen=True)
class NoContactOutside:
    """The sphere function is positive on every node."""


@dataclass(frozen=True)
class NoContactStraddle:
    """The sphere function is negative on every node (grid too short in t)."""


@dataclass(frozen=True)
class Contact:
    components: int


OracleVerdict = NoContactOutside | NoContactStraddle | Contact


class OracleSide(enum.Enum):
    INTERIOR = "interior"
    EXTERIOR = "exterior"
    MIXED = "mixed"


def auto_t_max(h: StdHyperboloid, s: Sphere) -> float:
    return math.asinh((abs(s.z_c) + s.r) / h.c) + 1.0


def sample_surface(h: StdHyperboloid, s: Sphere, grid=(DEFAULT_RESOLUTION, DEFAULT_RESOLUTION, None)) -> SampleGrid:
    """Evaluate ``|P(theta, t) - center|^2 - r^2`` on a periodic theta grid.

    ``grid`` is ``(n_theta, n_t, t_max)``; ``t_max=None`` picks a range that
    contains the whole sphere with one unit of padding.
    """
    n_theta, n_t, t_max = grid
    if t_max is None:
        t_max = auto_t_max(h, s)
    theta = np.arange(n_theta) * (2.0 * math.pi / n_theta)
    t = np.linspace(-t_max, t_max, n_t)
    ch, sh = np.cosh(t), np.sinh(t)
    xc, yc, zc = s.center
    # expand the square: the theta dependence is a single cosine term
    along_t = (h.a * ch) ** 2 + (h.c * sh) ** 2 - 2.0 * h.c * zc * sh + (xc * xc + yc * yc + zc * zc - s.r * s.r)
    radial = 2.0 * h.a * s.rho_c * np.cos(theta - s.theta_c)
    values = np.multiply.outer(radial, ch)
    np.subtract(along_t, values, out=values)
    return SampleGrid(n_theta, n_t, float(t_max), values)


def _crossing_cells(values: np.ndarray) -> np.ndarray:
    """Cells whose four corners do not share a sign; theta wraps around."""
    pos = values > 0
    nxt = np.roll(pos, -1, axis=0)
    lo_all = pos[:, :-1] & pos[:, 1:] & nxt[:, :-1] & nxt[:, 1:]
    lo_any = pos[:, :-1] | pos[:, 1:] | nxt[:, :-1] | nxt[:, 1:]
    return lo_any & ~lo_all


def _count_components(cells: np.ndarray) -> int:
    labels, n = ndimage.label(cells)
    if n <= 1:
        return n
    parent = list(range(n + 1))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    # the last theta row of cells is adjacent to the first
    first, last = labels[0], labels[-1]
    for a, b in zip(first[(first > 0) & (last > 0)], last[(first > 0) & (last > 0)]):
        ra, rb = find(int(a)), find(int(b))
        if ra != rb:
            parent[ra] = rb
            n -= 1
    return n


def _valley_nodes(q: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Minimum over theta for every t column, and over t for every theta row."""
    n_theta, n_t = q.shape
    rows = np.concatenate([np.argmin(q, axis=0), np.arange(n_theta)])
    cols = np.concatenate([np.arange(n_t), np.argmin(q, axis=1)])
    return rows, cols


def _taylor_band(q: np.ndarray, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    """Upper bound on how far ``q`` can drop within one cell of the given nodes.

    First and second differences stand in for the derivatives; the band is the
    second-order Taylor remainder over one full step in each direction. Theta
    wraps; nodes on the t boundary use one-sided neighbours clamped to the grid.
    """
    n_theta, n_t = q.shape
    up, down = (rows + 1) % n_theta, (rows - 1) % n_theta
    right, left = np.minimum(cols + 1, n_t - 1), np.maximum(cols - 1, 0)
    mid = q[rows, cols]
    q_up, q_down = q[up, cols], q[down, cols]
    q_right, q_left = q[rows, right], q[rows, left]
    band = 0.5 * np.abs(q_up - q_down) + 0.5 * np.abs(q_right - q_left)
    band += 0.5 * (np.abs(q_up - 2.0 * mid + q_down) + np.abs(q_right - 2.0 * mid + q_left))
    band += 0.25 * np.abs(q[up, right] - q[up, left] - q[down, right] + q[down, left])
    return band


def oracle_contact(grid: SampleGrid) -> OracleVerdict:
    """Contact verdict and component count from the sign pattern of ``grid``.

    Raises
    ------
    InconclusiveNearTangent
        If no node changes sign but a valley floor (minimum along a grid
        line) is within its local Taylor band of zero, so a touching point
        could sit between nodes.
    """
    q = grid.values
    lo, hi = float(q.min()), float(q.max())
    if lo > 0:
        # a zero hidden between nodes sits in a valley of q; test the valley floors
        rows, cols = _valley_nodes(q)
        if np.any(q[rows, cols] <= _taylor_band(q, rows, cols)):
            raise InconclusiveNearTangent(f"min sample {lo:.3e} is inside the resolution band")
        return NoContactOutside()
    if hi < 0:
        return NoContactStraddle()
    return Contact(_count_components(_crossing_cells(q)))


def fibonacci_sphere(s: Sphere, n: int) -> np.ndarray:
    k = np.arange(n) + 0.5
    z = 1.0 - 2.0 * k / n
    phi = math.pi * (3.0 - math.sqrt(5.0)) * k
    rho = np.sqrt(1.0 - z * z)
    unit = np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])
    return np.asarray(s.center) + s.r * unit


def oracle_side(h: StdHyperboloid, s: Sphere, n: int = 1000) -> OracleSide:
    """Side of the hyperboloid holding ``n`` evenly spread points of the sphere."""
    classes = classify_points(h, fibonacci_sphere(s, n))
    if np.all(classes < 0):
        return OracleSide.INTERIOR
    if np.all(classes > 0):
        return OracleSide.EXTERIOR
    return OracleSide.MIXED


@dataclass(frozen=True)
class Agreement:
    status: ContactStatus
    verdict: OracleVerdict | None
    side: OracleSide | None
    agrees: bool
    exempt: bool
    reason: str = ""


def check_agreement(
    h: StdHyperboloid,
    s: Sphere,
    resolution: int = DEFAULT_RESOLUTION,
    n_side: int = 1000,
    status: ContactStatus | None = None,
) -> Agreement:
    """Compare the algebraic contact status with the sampling oracle.

    Tangent verdicts and grids that cannot resolve a near-touch are exempt:
    sampling cannot confirm tangency.
    """
    if status is None:
        status = contact_status(h, s)
    if status.kind == "tangent":
        return Agreement(status, None, None, True, True, "tangency is not decidable by sampling")
    try:
        verdict = oracle_contact(sample_surface(h, s, (resolution, resolution, None)))
    except InconclusiveNearTangent as exc:
        return Agreement(status, None, None, True, True, str(exc))

    if status.kind == "none":
        if not isinstance(verdict, NoContactOutside):
            return Agreement(status, verdict, None, False, False, "oracle found contact")
        side = oracle_side(h, s, n_side)
        expected = OracleSide.INTERIOR if status.side is Side.INTERIOR else OracleSide.EXTERIOR
        ok = side is expected
        return Agreement(status, verdict, side, ok, False, "" if ok else f"oracle side is {side.value}")

    if not isinstance(verdict, Contact):
        return Agreement(status, verdict, None, False, False, "oracle found no contact")
    ok = verdict.components == status.components
    reason = "" if ok else f"oracle counts {verdict.components} components, expected {status.components}"
    return Agreement(status, verdict, None, ok, False, reason)
