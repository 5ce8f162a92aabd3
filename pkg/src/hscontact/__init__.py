"""Relative position of a sphere and a circular hyperboloid of one sheet.

The classification reads the real roots of ``det(lambda H + S)`` against the
landmarks ``-a^2``, ``0``, ``c^2`` and ``ar``.
"""

from .charpoly import (
    EPS_CLUSTER,
    EPS_DELTA,
    CubicPoly,
    Discriminant,
    QuarticPoly,
    Root,
    RootSet,
    cardano,
    full_quartic,
    residual_cubic,
    root_margin,
    root_set,
    solve_cubic,
)
from .classify import (
    ContactStatus,
    PositionType,
    Regime,
    RegimeViolation,
    Side,
    TangentLocus,
    UnclassifiableRoots,
    classify,
    classify_roots,
    contact_status,
    fast_contact,
    regime,
    tangent_locus,
)
from .oracle import (
    Contact,
    InconclusiveNearTangent,
    NoContactOutside,
    NoContactStraddle,
    OracleSide,
    SampleGrid,
    check_agreement,
    oracle_contact,
    oracle_side,
    sample_surface,
)
from .qcore import (
    NotCircular,
    PointClass,
    RigidPose,
    Sphere,
    StdHyperboloid,
    SymQuadric4,
    WrongSignature,
    classify_point,
    hyperboloid_matrix,
    normalize,
    recover_standard_form,
    sphere_matrix,
    world_matrix,
)
from .sweep import CenterPath, Event, Segment, SweepReport, sweep

__version__ = "0.1.0"
