"""Geometric primitives for a circular hyperboloid of one sheet and a sphere.

Homogeneous coordinates are used throughout: a point ``(x, y, z)`` is the
column ``(x, y, z, 1)`` and a quadric is the zero set of ``X^t M X``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

EPS_ON = 1e-10
EPS_ORTHO = 1e-12
EPS_CIRCULAR = 1e-9


class NotCircular(ValueError):
    """The two equatorial semi-axes of a recovered hyperboloid differ."""


class WrongSignature(ValueError):
    """A matrix is not the matrix of a one-sheet hyperboloid."""


class PointClass(enum.Enum):
    INTERIOR = "interior"
    ON_SURFACE = "on_surface"
    EXTERIOR = "exterior"


@dataclass(frozen=True)
class StdHyperboloid:
    """``x^2/a^2 + y^2/a^2 - z^2/c^2 = 1`` centred at the origin, axis OZ."""

    a: float
    c: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and self.a > 0):
            raise ValueError(f"hyperboloid semi-axis a must be > 0, got {self.a!r}")
        if not (math.isfinite(self.c) and self.c > 0):
            raise ValueError(f"hyperboloid semi-axis c must be > 0, got {self.c!r}")
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "c", float(self.c))

    def point(self, theta, t):
        """Surface point for angle ``theta`` and hyperbolic parameter ``t``."""
        ch = np.cosh(t)
        return np.array([self.a * ch * np.cos(theta), self.a * ch * np.sin(theta), self.c * np.sinh(t)])


@dataclass(frozen=True)
class Sphere:
    center: tuple[float, float, float]
    r: float

    def __post_init__(self):
        center = tuple(float(v) for v in self.center)
        if len(center) != 3 or not all(math.isfinite(v) for v in center):
            raise ValueError(f"sphere center must be three finite numbers, got {self.center!r}")
        if not (math.isfinite(self.r) and self.r > 0):
            raise ValueError(f"sphere radius r must be > 0, got {self.r!r}")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "r", float(self.r))

    @property
    def rho_c(self) -> float:
        """Distance of the centre from the OZ axis."""
        return math.hypot(self.center[0], self.center[1])

    @property
    def theta_c(self) -> float:
        return math.atan2(self.center[1], self.center[0])

    @property
    def z_c(self) -> float:
        return self.center[2]

    def moved_to(self, center) -> Sphere:
        return Sphere(tuple(center), self.r)


@dataclass(frozen=True)
class SymQuadric4:
    """Symmetric 4x4 matrix of a quadric in homogeneous coordinates."""

    m: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.array(self.m, dtype=float)
        if m.shape != (4, 4):
            raise ValueError(f"quadric matrix must be 4x4, got shape {m.shape}")
        scale = max(1.0, float(np.max(np.abs(m))))
        if np.max(np.abs(m - m.T)) > 1e-12 * scale:
            raise ValueError("quadric matrix is not symmetric")
        # keep the upper triangle as the source of truth
        m = np.triu(m) + np.triu(m, 1).T
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    def __call__(self, p) -> float:
        """Evaluate ``P^t M P`` at a Cartesian point."""
        x = np.append(np.asarray(p, dtype=float), 1.0)
        return float(x @ self.m @ x)

    def gradient(self, p) -> np.ndarray:
        x = np.append(np.asarray(p, dtype=float), 1.0)
        return 2.0 * (self.m @ x)[:3]


@dataclass(frozen=True)
class RigidPose:
    """World placement ``p_world = rotation @ p_std + translation``."""

    rotation: np.ndarray = field(default_factory=lambda: np.eye(3))
    translation: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        rot = np.array(self.rotation, dtype=float)
        tr = np.array(self.translation, dtype=float).reshape(-1)
        if rot.shape != (3, 3) or tr.shape != (3,):
            raise ValueError("pose needs a 3x3 rotation and a 3-vector translation")
        if np.max(np.abs(rot.T @ rot - np.eye(3))) > EPS_ORTHO:
            raise ValueError("pose rotation is not orthonormal")
        if abs(np.linalg.det(rot) - 1.0) > EPS_ORTHO:
            raise ValueError("pose rotation must have determinant +1")
        rot.setflags(write=False)
        tr.setflags(write=False)
        object.__setattr__(self, "rotation", rot)
        object.__setattr__(self, "translation", tr)

    @classmethod
    def identity(cls) -> RigidPose:
        return cls()

    def to_world(self, p) -> np.ndarray:
        return self.rotation @ np.asarray(p, dtype=float) + self.translation

    def to_standard(self, p) -> np.ndarray:
        return self.rotation.T @ (np.asarray(p, dtype=float) - self.translation)

    def homogeneous(self) -> np.ndarray:
        """4x4 matrix mapping standard homogeneous points to world ones."""
        t = np.eye(4)
        t[:3, :3] = self.rotation
        t[:3, 3] = self.translation
        return t


def hyperboloid_matrix(h: StdHyperboloid) -> SymQuadric4:
    return SymQuadric4(np.diag([h.a**-2, h.a**-2, -(h.c**-2), -1.0]))


def sphere_matrix(s: Sphere) -> SymQuadric4:
    xc, yc, zc = s.center
    m = np.eye(4)
    m[:3, 3] = m[3, :3] = (-xc, -yc, -zc)
    m[3, 3] = -s.r**2 + xc**2 + yc**2 + zc**2
    return SymQuadric4(m)


def world_matrix(q: SymQuadric4, pose: RigidPose) -> SymQuadric4:
    """Matrix of the quadric ``q`` after moving it by ``pose``."""
    tinv = np.linalg.inv(pose.homogeneous())
    return SymQuadric4(tinv.T @ q.m @ tinv)


def classify_point(h: StdHyperboloid, p) -> PointClass:
    x, y, z = (float(v) for v in p)
    radial = (x * x + y * y) / h.a**2
    axial = z * z / h.c**2
    value = radial - axial - 1.0
    if abs(value) <= EPS_ON * (radial + axial + 1.0):
        return PointClass.ON_SURFACE
    return PointClass.INTERIOR if value < 0 else PointClass.EXTERIOR


def classify_points(h: StdHyperboloid, points) -> np.ndarray:
    """Vectorised ``classify_point``: -1 interior, 0 on the surface, +1 exterior."""
    p = np.asarray(points, dtype=float)
    radial = (p[:, 0] ** 2 + p[:, 1] ** 2) / h.a**2
    axial = p[:, 2] ** 2 / h.c**2
    value = radial - axial - 1.0
    out = np.sign(value).astype(int)
    out[np.abs(value) <= EPS_ON * (radial + axial + 1.0)] = 0
    return out


def normalize(world_h: tuple[StdHyperboloid, RigidPose], s: Sphere) -> tuple[StdHyperboloid, Sphere]:
    """Express the sphere in the hyperboloid's standard frame.

    The characteristic roots are invariant under the rigid motion, so the
    returned pair classifies exactly like the world pair.
    """
    h, pose = world_h
    return h, Sphere(tuple(pose.to_standard(s.center)), s.r)


def recover_standard_form(q: SymQuadric4) -> tuple[StdHyperboloid, RigidPose]:
    """Recover ``(a, c)`` and the pose of a circular one-sheet hyperboloid.

    Raises
    ------
    WrongSignature
        If the quadratic part is singular, the quadric is a cone, or the
        eigenvalue signature of the scaled quadratic part is not ``(+, +, -)``.
    NotCircular
        If the two positive eigenvalues differ by more than 1e-9 relative.
    """
    m = q.m
    block, b, d = m[:3, :3], m[:3, 3], m[3, 3]
    try:
        center = -np.linalg.solve(block, b)
    except np.linalg.LinAlgError:
        raise WrongSignature("quadratic part is singular; not a central quadric") from None
    k = d + b @ center
    scale = max(np.max(np.abs(block)), abs(d), np.max(np.abs(b)))
    if abs(k) <= 1e-12 * scale:
        raise WrongSignature("quadric is a cone (zero constant at the centre)")
    evals, evecs = np.linalg.eigh(block / -k)
    if not (evals[0] < 0 < evals[1]):
        raise WrongSignature(f"eigenvalue signature {np.sign(evals)} is not (+, +, -)")
    lam1, lam2 = evals[1], evals[2]
    if abs(lam2 - lam1) > EPS_CIRCULAR * max(abs(lam1), abs(lam2)):
        raise NotCircular(f"equatorial eigenvalues {lam1:.12g} and {lam2:.12g} differ")
    lam = 0.5 * (lam1 + lam2)
    rot = np.column_stack([evecs[:, 1], evecs[:, 2], evecs[:, 0]])
    if np.linalg.det(rot) < 0:
        rot[:, 2] = -rot[:, 2]
    # re-orthonormalise to keep RigidPose's 1e-12 contract under round-off
    u, _, vt = np.linalg.svd(rot)
    rot = u @ vt
    h = StdHyperboloid(lam**-0.5, (-evals[0]) ** -0.5)
    return h, RigidPose(rot, center)
