"""Random instance generators shared by the test modules."""

import math

import numpy as np

from hscontact.charpoly import EPS_CLUSTER, root_margin
from hscontact.qcore import Sphere, StdHyperboloid

AT_MARGIN = 10 * EPS_CLUSTER
# whole-suite wall-clock budget, part of the oracle agreement criterion
SUITE_LIMIT_S = 60.0


def log_uniform(rng, lo, hi):
    return math.exp(rng.uniform(math.log(lo), math.log(hi)))


def random_instance(rng):
    """Hyperboloid and sphere drawn so that every position type is reachable."""
    a = log_uniform(rng, 0.2, 5.0)
    c = log_uniform(rng, 0.2, 5.0)
    r = log_uniform(rng, 0.1, 6.0)
    rho = rng.uniform(0.0, 2.0 * (a + r))
    theta = rng.uniform(0.0, 2.0 * math.pi)
    z = rng.uniform(-2.0 * (c + r), 2.0 * (c + r))
    return StdHyperboloid(a, c), Sphere((rho * math.cos(theta), rho * math.sin(theta), z), r)


def random_at_margin(rng, n):
    """``n`` random instances whose roots keep a margin of ``10 EPS_CLUSTER``."""
    out = []
    while len(out) < n:
        h, s = random_instance(rng)
        if root_margin(h, s) > AT_MARGIN:
            out.append((h, s))
    return out


def random_tangent(rng):
    """Sphere touching the hyperboloid at a random surface point, from either side."""
    a = log_uniform(rng, 0.3, 3.0)
    c = log_uniform(rng, 0.3, 3.0)
    r = log_uniform(rng, 0.1, 4.0)
    h = StdHyperboloid(a, c)
    p = h.point(rng.uniform(0.0, 2.0 * math.pi), rng.uniform(-2.0, 2.0))
    n = np.array([p[0] / a**2, p[1] / a**2, -p[2] / c**2])
    n /= np.linalg.norm(n)
    side = 1.0 if rng.random() < 0.5 else -1.0
    return h, Sphere(tuple(p + side * r * n), r), p
