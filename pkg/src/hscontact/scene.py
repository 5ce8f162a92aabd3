"""Scene files: a posed hyperboloid, a sphere and an optional sweep path.

Scenes are YAML::

    hyperboloid:
      a: 1.5
      c: 1.6
      pose:                       # optional
        rotation: [1, 0, 0, 0]    # unit quaternion w, x, y, z
        translation: [0, 0, 0]
    sphere:
      center: [2.1, 2.2, 0.3]     # world coordinates
      r: 1.4
    sweep:                        # optional
      waypoints: [[4, 0, 0], [0, 0, 0]]
      n_steps: 200

Errors name the offending field and its line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import yaml
from scipy.spatial.transform import Rotation

from .qcore import RigidPose, Sphere, StdHyperboloid, normalize

QUATERNION_TOL = 1e-9


class SceneError(ValueError):
    def __init__(self, field: str, line: int | None, message: str):
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"{field}{where}: {message}")
        self.field = field
        self.line = line


@dataclass(frozen=True)
class SweepSpec:
    waypoints: tuple[tuple[float, float, float], ...]
    n_steps: int


@dataclass(frozen=True)
class Scene:
    hyperboloid: StdHyperboloid
    pose: RigidPose
    sphere: Sphere
    sweep: SweepSpec | None = None

    def standard_sphere(self) -> Sphere:
        """The sphere expressed in the hyperboloid's own frame."""
        return normalize((self.hyperboloid, self.pose), self.sphere)[1]

    def standard_waypoints(self) -> list[np.ndarray]:
        if self.sweep is None:
            raise SceneError("sweep", None, "scene has no sweep block")
        return [self.pose.to_standard(p) for p in self.sweep.waypoints]


def _line(node) -> int:
    return node.start_mark.line + 1


def _child(node, key: str, path: str, required: bool = True):
    if not isinstance(node, yaml.MappingNode):
        raise SceneError(path, _line(node), "expected a mapping")
    for k, v in node.value:
        if k.value == key:
            return v
    if required:
        raise SceneError(f"{path}.{key}" if path else key, _line(node), "missing field")
    return None


def _number(node, path: str) -> float:
    if not isinstance(node, yaml.ScalarNode):
        raise SceneError(path, _line(node), "expected a number")
    try:
        value = float(node.value)
    except ValueError:
        raise SceneError(path, _line(node), f"{node.value!r} is not a number") from None
    if not math.isfinite(value):
        raise SceneError(path, _line(node), "must be finite")
    return value


def _positive(node, path: str) -> float:
    value = _number(node, path)
    if value <= 0:
        raise SceneError(path, _line(node), f"must be > 0, got {value:g}")
    return value


def _vector(node, path: str, size: int) -> tuple[float, ...]:
    if not isinstance(node, yaml.SequenceNode) or len(node.value) != size:
        raise SceneError(path, _line(node), f"expected a list of {size} numbers")
    return tuple(_number(v, f"{path}[{i}]") for i, v in enumerate(node.value))


def _pose(node, path: str) -> RigidPose:
    if node is None:
        return RigidPose.identity()
    rot_node = _child(node, "rotation", path, required=False)
    tr_node = _child(node, "translation", path, required=False)
    rotation = np.eye(3)
    if rot_node is not None:
        quat = np.array(_vector(rot_node, f"{path}.rotation", 4))
        norm = float(np.linalg.norm(quat))
        if abs(norm - 1.0) > QUATERNION_TOL:
            raise SceneError(f"{path}.rotation", _line(rot_node), f"quaternion norm is {norm:.12g}, not 1")
        rotation = Rotation.from_quat(quat / norm, scalar_first=True).as_matrix()
    translation = np.zeros(3) if tr_node is None else np.array(_vector(tr_node, f"{path}.translation", 3))
    return RigidPose(rotation, translation)


def _sweep(node) -> SweepSpec | None:
    if node is None:
        return None
    wp_node = _child(node, "waypoints", "sweep")
    if not isinstance(wp_node, yaml.SequenceNode) or len(wp_node.value) < 2:
        raise SceneError("sweep.waypoints", _line(wp_node), "expected at least 2 waypoints")
    waypoints = tuple(_vector(p, f"sweep.waypoints[{i}]", 3) for i, p in enumerate(wp_node.value))
    steps_node = _child(node, "n_steps", "sweep", required=False)
    n_steps = 200
    if steps_node is not None:
        value = _number(steps_node, "sweep.n_steps")
        if value != int(value) or value < 2:
            raise SceneError("sweep.n_steps", _line(steps_node), "must be an integer >= 2")
        n_steps = int(value)
    return SweepSpec(waypoints, n_steps)


def parse_scene(text: str) -> Scene:
    try:
        root = yaml.compose(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise SceneError("scene", mark.line + 1 if mark else None, f"not valid YAML: {exc}") from None
    if root is None:
        raise SceneError("scene", None, "file is empty")
    h_node = _child(root, "hyperboloid", "")
    s_node = _child(root, "sphere", "")
    h = StdHyperboloid(_positive(_child(h_node, "a", "hyperboloid"), "hyperboloid.a"),
                       _positive(_child(h_node, "c", "hyperboloid"), "hyperboloid.c"))
    pose = _pose(_child(h_node, "pose", "hyperboloid", required=False), "hyperboloid.pose")
    sphere = Sphere(_vector(_child(s_node, "center", "sphere"), "sphere.center", 3),
                    _positive(_child(s_node, "r", "sphere"), "sphere.r"))
    return Scene(h, pose, sphere, _sweep(_child(root, "sweep", "", required=False)))


def load_scene(path) -> Scene:
    with open(path, encoding="utf-8") as fh:
        return parse_scene(fh.read())
