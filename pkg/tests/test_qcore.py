import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hscontact.qcore import (
    NotCircular,
    PointClass,
    RigidPose,
    Sphere,
    StdHyperboloid,
    SymQuadric4,
    WrongSignature,
    classify_point,
    classify_points,
    hyperboloid_matrix,
    normalize,
    recover_standard_form,
    sphere_matrix,
    world_matrix,
)

positive = st.floats(0.1, 10.0)
angle = st.floats(0.0, 2 * math.pi)
param = st.floats(-2.0, 2.0)
coord = st.floats(-10.0, 10.0)


def rotation_from(angles):
    a, b, c = angles
    rz = np.array([[math.cos(a), -math.sin(a), 0], [math.sin(a), math.cos(a), 0], [0, 0, 1]])
    ry = np.array([[math.cos(b), 0, math.sin(b)], [0, 1, 0], [-math.sin(b), 0, math.cos(b)]])
    rx = np.array([[1, 0, 0], [0, math.cos(c), -math.sin(c)], [0, math.sin(c), math.cos(c)]])
    return rz @ ry @ rx


@pytest.mark.parametrize("a, c", [(0, 1), (1, -1), (float("nan"), 1), (1, float("inf"))])
def test_hyperboloid_rejects_bad_axes(a, c):
    with pytest.raises(ValueError):
        StdHyperboloid(a, c)


@pytest.mark.parametrize("center, r", [((0, 0, 0), 0), ((0, 0, 0), -1), ((0, 0), 1), ((0, float("nan"), 0), 1)])
def test_sphere_rejects_bad_input(center, r):
    with pytest.raises(ValueError):
        Sphere(center, r)


def test_sphere_cylindrical_coordinates():
    s = Sphere((2.1, 2.2, 0.3), 1.4)
    assert s.rho_c == pytest.approx(math.hypot(2.1, 2.2))
    assert s.theta_c == pytest.approx(math.atan2(2.2, 2.1))
    assert s.z_c == 0.3


def test_sym_quadric_rejects_asymmetric():
    m = np.eye(4)
    m[0, 1] = 1.0
    with pytest.raises(ValueError):
        SymQuadric4(m)
    with pytest.raises(ValueError):
        SymQuadric4(np.eye(3))


def test_sym_quadric_is_read_only():
    q = SymQuadric4(np.eye(4))
    with pytest.raises(ValueError):
        q.m[0, 0] = 2.0


def test_pose_rejects_reflection_and_skew():
    with pytest.raises(ValueError):
        RigidPose(np.diag([1.0, 1.0, -1.0]), np.zeros(3))
    with pytest.raises(ValueError):
        RigidPose(np.diag([1.0, 1.0, 1.001]), np.zeros(3))


@given(positive, positive, angle, param)
def test_parameterised_points_lie_on_hyperboloid(a, c, theta, t):
    h = StdHyperboloid(a, c)
    p = h.point(theta, t)
    scale = 1.0 + math.cosh(t) ** 2
    assert abs(hyperboloid_matrix(h)(p)) <= 1e-12 * scale
    assert classify_point(h, p) is PointClass.ON_SURFACE


@given(st.tuples(coord, coord, coord), positive, angle, st.floats(0.0, math.pi))
def test_sphere_matrix_vanishes_on_sphere(center, r, phi, psi):
    s = Sphere(center, r)
    p = np.array(center) + r * np.array([math.sin(psi) * math.cos(phi), math.sin(psi) * math.sin(phi), math.cos(psi)])
    assert abs(sphere_matrix(s)(p)) <= 1e-9 * (1 + r * r + float(np.dot(p, p)))


def test_gradient_is_normal_direction():
    h = StdHyperboloid(1.5, 1.6)
    p = h.point(0.3, 0.7)
    g = hyperboloid_matrix(h).gradient(p)
    want = 2 * np.array([p[0] / 1.5**2, p[1] / 1.5**2, -p[2] / 1.6**2])
    assert np.allclose(g, want)


def test_classify_point_sides():
    h = StdHyperboloid(1.0, 1.0)
    assert classify_point(h, (0, 0, 0)) is PointClass.INTERIOR
    assert classify_point(h, (0, 0, 100)) is PointClass.INTERIOR
    assert classify_point(h, (2, 0, 0)) is PointClass.EXTERIOR
    assert classify_point(h, (1, 0, 0)) is PointClass.ON_SURFACE


def test_classify_points_matches_scalar_version():
    rng = np.random.default_rng(0)
    h = StdHyperboloid(1.3, 0.8)
    pts = rng.uniform(-4, 4, size=(500, 3))
    pts[:50] = [h.point(t, u) for t, u in rng.uniform(-2, 2, size=(50, 2))]
    codes = {PointClass.INTERIOR: -1, PointClass.ON_SURFACE: 0, PointClass.EXTERIOR: 1}
    assert list(classify_points(h, pts)) == [codes[classify_point(h, p)] for p in pts]


@settings(max_examples=50)
@given(positive, positive, st.tuples(angle, angle, angle), st.tuples(coord, coord, coord), angle, param)
def test_world_matrix_follows_pose(a, c, angles, translation, theta, t):
    h = StdHyperboloid(a, c)
    pose = RigidPose(rotation_from(angles), np.array(translation))
    world = world_matrix(hyperboloid_matrix(h), pose)
    p = pose.to_world(h.point(theta, t))
    assert abs(world(p)) <= 1e-9 * (1 + float(np.dot(p, p)))
    assert np.allclose(pose.to_standard(p), h.point(theta, t))


@settings(max_examples=50)
@given(positive, positive, st.tuples(angle, angle, angle), st.tuples(coord, coord, coord), st.floats(0.5, 50.0))
def test_recover_standard_form_round_trip(a, c, angles, translation, k):
    h = StdHyperboloid(a, c)
    pose = RigidPose(rotation_from(angles), np.array(translation))
    # any nonzero multiple of the matrix describes the same quadric
    scaled = SymQuadric4(k * world_matrix(hyperboloid_matrix(h), pose).m)
    h_rec, pose_rec = recover_standard_form(scaled)
    assert h_rec.a == pytest.approx(a, rel=1e-9)
    assert h_rec.c == pytest.approx(c, rel=1e-9)
    assert np.allclose(pose_rec.translation, translation, atol=1e-8 * (1 + a + c))
    # same axis line, possibly reversed
    axis, axis_rec = pose.rotation[:, 2], pose_rec.rotation[:, 2]
    assert abs(abs(float(axis @ axis_rec)) - 1.0) <= 1e-9


def test_recovered_pose_preserves_cylindrical_centre():
    """Rotation about the axis is not recoverable, but (rho_c, |z_c|) is."""
    h = StdHyperboloid(1.5, 1.6)
    pose = RigidPose(rotation_from((0.4, 1.1, -0.7)), np.array([1.0, -2.0, 0.5]))
    s = Sphere((2.1, 2.2, 0.3), 1.4)
    world = Sphere(tuple(pose.to_world(s.center)), s.r)
    h_rec, pose_rec = recover_standard_form(world_matrix(hyperboloid_matrix(h), pose))
    _, s_rec = normalize((h_rec, pose_rec), world)
    assert s_rec.rho_c == pytest.approx(s.rho_c, rel=1e-9)
    assert abs(s_rec.z_c) == pytest.approx(abs(s.z_c), rel=1e-9)


def test_recover_rejects_non_circular_and_wrong_signature():
    with pytest.raises(NotCircular):
        recover_standard_form(SymQuadric4(np.diag([1.0, 2.0, -1.0, -1.0])))
    with pytest.raises(WrongSignature):
        recover_standard_form(SymQuadric4(np.diag([1.0, 1.0, 1.0, -1.0])))  # ellipsoid
    with pytest.raises(WrongSignature):
        recover_standard_form(SymQuadric4(np.diag([1.0, 1.0, -1.0, 0.0])))  # cone
    with pytest.raises(WrongSignature):
        recover_standard_form(SymQuadric4(np.diag([1.0, -1.0, -1.0, -1.0])))  # two sheets
    with pytest.raises(WrongSignature):
        recover_standard_form(SymQuadric4(np.diag([1.0, 1.0, 0.0, -1.0])))  # cylinder


def test_normalize_moves_sphere_into_standard_frame():
    h = StdHyperboloid(1.0, 2.0)
    pose = RigidPose(rotation_from((math.pi / 2, 0, 0)), np.array([5.0, 0.0, 0.0]))
    _, s = normalize((h, pose), Sphere((5.0, 1.0, 0.0), 0.5))
    assert np.allclose(s.center, (1.0, 0.0, 0.0))
    assert s.r == 0.5
