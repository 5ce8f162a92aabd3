"""Cross-section drawing in the vertical plane through the axis and the sphere centre.

In that plane the hyperboloid is the hyperbola ``rho = +-a sqrt(1 + z^2/c^2)``
and the sphere is a circle of radius ``r`` centred at ``(rho_c, z_c)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .classify import PositionType  # noqa: E402
from .qcore import Sphere, StdHyperboloid  # noqa: E402

PAD = 0.15


@dataclass(frozen=True)
class CrossSection:
    circle_center: tuple[float, float]
    radius: float
    xlim: tuple[float, float]
    zlim: tuple[float, float]
    z: np.ndarray
    branch: np.ndarray

    def contains_circle(self) -> bool:
        (x, z), r = self.circle_center, self.radius
        return self.xlim[0] <= x - r and x + r <= self.xlim[1] and self.zlim[0] <= z - r and z + r <= self.zlim[1]

    def contains_throat(self, a: float) -> bool:
        return self.xlim[0] <= -a and a <= self.xlim[1] and self.zlim[0] <= 0.0 <= self.zlim[1]


def cross_section(h: StdHyperboloid, s: Sphere, n: int = 400) -> CrossSection:
    """Geometry of the drawing; bounds always hold the whole circle and the throat."""
    x0, z0, r = s.rho_c, s.z_c, s.r
    lo_x, hi_x = min(-h.a, x0 - r), max(h.a, x0 + r)
    lo_z, hi_z = min(-h.c, z0 - r), max(h.c, z0 + r)
    span = max(hi_x - lo_x, hi_z - lo_z)
    xlim = (lo_x - PAD * span, hi_x + PAD * span)
    zlim = (lo_z - PAD * span, hi_z + PAD * span)
    z = np.linspace(zlim[0], zlim[1], n)
    branch = h.a * np.sqrt(1.0 + (z / h.c) ** 2)
    return CrossSection((x0, z0), r, xlim, zlim, z, branch)


def plot_cross_section(h: StdHyperboloid, s: Sphere, out_path, kind: PositionType | None = None) -> None:
    """Write an SVG of the cross-section, annotated with ``kind``.

    The output is byte-for-byte reproducible for fixed inputs and library
    versions: no timestamp and a fixed id salt.
    """
    geo = cross_section(h, s)
    with plt.rc_context({"svg.hashsalt": "hscontact", "svg.fonttype": "path"}):
        fig, ax = plt.subplots(figsize=(6, 6))
        ax.plot(geo.branch, geo.z, color="tab:blue", lw=1.5, label="hyperboloid")
        ax.plot(-geo.branch, geo.z, color="tab:blue", lw=1.5)
        phi = np.linspace(0.0, 2.0 * np.pi, 361)
        cx, cz = geo.circle_center
        ax.plot(cx + geo.radius * np.cos(phi), cz + geo.radius * np.sin(phi), color="tab:red", lw=1.5, label="sphere")
        ax.plot([cx], [cz], "+", color="tab:red")
        ax.axvline(0.0, color="0.6", lw=0.8, ls="--")
        ax.set_xlim(*geo.xlim)
        ax.set_ylim(*geo.zlim)
        ax.set_aspect("equal")
        ax.set_xlabel("rho (signed, plane through axis and centre)")
        ax.set_ylabel("z")
        title = f"a={h.a:.6g}  c={h.c:.6g}  r={s.r:.6g}  centre=({cx:.6g}, {cz:.6g})"
        if kind is not None:
            title = f"type: {kind.value}\n{title}"
        ax.set_title(title, fontsize=9)
        ax.legend(loc="upper right", fontsize=8)
        fig.savefig(out_path, format="svg", metadata={"Date": None})
        plt.close(fig)
