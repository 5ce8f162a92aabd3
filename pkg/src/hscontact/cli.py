"""Command-line front end.

    hscontact classify scene.yaml [--json] [--tol EPS]
    hscontact contact  scene.yaml [--json] [--tol EPS]
    hscontact sweep    scene.yaml [--json] [--steps N] [--tol EPS]
    hscontact plot     scene.yaml -o out.svg
    hscontact verify   scene.yaml [--json] [--grid N]

Exit codes: 0 success, 1 invalid scene or input, 2 unclassifiable roots,
3 oracle disagreement.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .charpoly import EPS_CLUSTER, RootSet, cardano, residual_cubic, root_set
from .classify import (
    ContactStatus,
    RegimeViolation,
    UnclassifiableRoots,
    classify_roots,
    contact_status,
    fast_contact,
    regime,
)
from .oracle import DEFAULT_RESOLUTION, Contact, check_agreement
from .plot import plot_cross_section
from .scene import Scene, SceneError, load_scene
from .sweep import CenterPath, SweepReport, sweep

log = logging.getLogger(__name__)

EXIT_OK, EXIT_SCENE, EXIT_UNCLASSIFIABLE, EXIT_DISAGREE = 0, 1, 2, 3


def fmt(x: float) -> str:
    return f"{x:.6g}"


def _roots_dict(roots: RootSet) -> dict:
    pair = roots.complex_pair
    return {
        "fixed_root": roots.fixed_root,
        "roots": [{"value": r.value, "multiplicity": r.multiplicity} for r in roots.clusters],
        "complex_pair": None if pair is None else {"re": pair[0], "im": pair[1]},
    }


def _locus_dict(scene: Scene, status: ContactStatus) -> dict | None:
    loc = status.locus
    if loc is None:
        return None
    return {
        "kind": loc.kind.value,
        "points": [list(p) for p in loc.points],
        "points_world": [[float(v) for v in scene.pose.to_world(p)] for p in loc.points],
        "z": loc.z,
        "rho": loc.rho,
    }


def _status_dict(scene: Scene, status: ContactStatus) -> dict:
    return {
        "kind": status.kind,
        "type": status.position.value,
        "side": None if status.side is None else status.side.value,
        "components": status.components,
        "transversal": status.transversal,
        "locus": _locus_dict(scene, status),
    }


def classify_report(scene: Scene, tol: float) -> dict:
    h, s = scene.hyperboloid, scene.standard_sphere()
    roots = root_set(h, s, eps=tol)
    kind = classify_roots(h, s, roots)
    info = regime(h, s)
    disc = cardano(residual_cubic(h, s))
    return {
        "type": kind.value,
        "description": kind.description,
        "regime": {
            "name": info.regime.value,
            "wide_sphere": info.wide_sphere,
            "flat_throat": info.flat_throat,
            "kappa_h": info.kappa_h,
            "kappa_c": info.kappa_c,
        },
        "landmarks": {"-a^2": -(h.a**2), "c^2": h.c**2, "ar": h.a * s.r},
        "discriminant": {"Q": disc.Q, "R": disc.R, "delta": disc.delta},
        "roots": _roots_dict(roots),
        "tol": tol,
    }


def contact_report(scene: Scene, tol: float) -> dict:
    h, s = scene.hyperboloid, scene.standard_sphere()
    status = contact_status(h, s, tol)
    fast = None
    try:
        verdict = fast_contact(h, s)
    except RegimeViolation:
        pass
    else:
        expected = {"none": "none", "tangent": "tangent", "transversal": "contact"}[status.kind]
        fast = {"verdict": verdict, "agrees": verdict == expected}
    return {"status": _status_dict(scene, status), "fast_path": fast}


def sweep_report(scene: Scene, steps: int | None, tol: float) -> dict:
    path = CenterPath(scene.standard_waypoints())
    n_steps = steps if steps is not None else scene.sweep.n_steps
    rep: SweepReport = sweep(scene.hyperboloid, scene.sphere.r, path, n_steps, tol)
    return {
        "n_steps": n_steps,
        "segments": [{"t0": g.t0, "t1": g.t1, "type": g.kind.value} for g in rep.segments],
        "events": [{"t": e.t, "from": e.before.value, "to": e.after.value, "width": e.width} for e in rep.events],
    }


def verify_report(scene: Scene, grid: int, tol: float) -> dict:
    h, s = scene.hyperboloid, scene.standard_sphere()
    ag = check_agreement(h, s, resolution=grid, status=contact_status(h, s, tol))
    verdict = None
    if ag.verdict is not None:
        verdict = {"result": type(ag.verdict).__name__}
        if isinstance(ag.verdict, Contact):
            verdict["components"] = ag.verdict.components
    return {
        "status": _status_dict(scene, ag.status),
        "grid": grid,
        "oracle": verdict,
        "oracle_side": None if ag.side is None else ag.side.value,
        "agrees": ag.agrees,
        "exempt": ag.exempt,
        "reason": ag.reason,
    }


def _print_classify(rep: dict) -> None:
    print(f"type: {rep['type']}  ({rep['description']})")
    reg = rep["regime"]
    print(f"regime: {reg['name']}  (a <= r: {'yes' if reg['wide_sphere'] else 'no'}, "
          f"c^2 < ar: {'yes' if reg['flat_throat'] else 'no'})")
    marks = rep["landmarks"]
    print("landmarks: " + "  ".join(f"{k} = {fmt(v)}" for k, v in marks.items()))
    d = rep["discriminant"]
    print(f"discriminant: Q = {fmt(d['Q'])}  R = {fmt(d['R'])}  Delta = {fmt(d['delta'])}")
    print("roots:")
    fixed = rep["roots"]["fixed_root"]
    for r in rep["roots"]["roots"]:
        note = ""
        if r["value"] == fixed:
            note = "  (-a^2)" if r["multiplicity"] == 1 else "  (includes -a^2)"
        print(f"  {fmt(r['value']):>12}  x{r['multiplicity']}{note}")
    pair = rep["roots"]["complex_pair"]
    if pair is not None:
        print(f"  {fmt(pair['re'])} +- {fmt(pair['im'])}i  (complex pair)")


def _print_status(st: dict) -> None:
    print(f"type: {st['type']}")
    print(f"contact: {st['kind']}")
    if st["side"] is not None:
        print(f"side: {st['side']}")
    if st["components"] is not None:
        print(f"components: {st['components']}")
    loc = st["locus"]
    if loc is not None:
        extra = " plus transversal crossing" if st["transversal"] else ""
        print(f"tangency: {loc['kind']}{extra}")
        if loc["z"] is not None:
            print(f"  z = {fmt(loc['z'])}  rho = {fmt(loc['rho'])}")
        for p in loc["points_world"]:
            print("  point (" + ", ".join(fmt(v) for v in p) + ")")


def _print_contact(rep: dict) -> None:
    _print_status(rep["status"])
    fast = rep["fast_path"]
    if fast is None:
        print("fast path: not applicable (needs r < a and ar < c^2)")
    else:
        print(f"fast path: {fast['verdict']} ({'agrees' if fast['agrees'] else 'DISAGREES'})")


def _print_sweep(rep: dict) -> None:
    print(f"steps: {rep['n_steps']}")
    print("segments:")
    for g in rep["segments"]:
        print(f"  [{fmt(g['t0'])}, {fmt(g['t1'])}]  {g['type']}")
    print("events:")
    if not rep["events"]:
        print("  none")
    for e in rep["events"]:
        print(f"  t = {e['t']:.10f}  {e['from']} -> {e['to']}  (width {e['width']:.1e})")


def _print_verify(rep: dict) -> None:
    _print_status(rep["status"])
    print(f"grid: {rep['grid']}x{rep['grid']}")
    if rep["exempt"]:
        print(f"oracle: exempt ({rep['reason']})")
        return
    oracle = rep["oracle"]
    line = oracle["result"]
    if "components" in oracle:
        line += f" ({oracle['components']} components)"
    print(f"oracle: {line}")
    if rep["oracle_side"] is not None:
        print(f"oracle side: {rep['oracle_side']}")
    print("agreement: " + ("yes" if rep["agrees"] else f"NO, {rep['reason']}"))


def dump_json(data: dict) -> str:
    return json.dumps(data, sort_keys=True, indent=2, allow_nan=False)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hscontact", description="Relative position of a sphere and a circular one-sheet hyperboloid.")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("scene", help="scene file (YAML)")
        p.add_argument("--tol", type=float, default=EPS_CLUSTER, help="root clustering tolerance (default %(default)g)")
        return p

    for name, help_text in [("classify", "position type, roots, regime and discriminant"),
                            ("contact", "contact status and fast-path check")]:
        add(name, help_text).add_argument("--json", action="store_true", help="machine-readable output")
    p = add("sweep", "track the type along the scene's sweep path")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--steps", type=int, default=None, help="number of sampling steps (default: from scene)")
    p = add("plot", "write a cross-section SVG")
    p.add_argument("-o", "--output", required=True, help="output SVG path")
    p = add("verify", "compare the classification with the sampling oracle")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--grid", type=int, default=DEFAULT_RESOLUTION, help="oracle resolution per axis (default %(default)d)")
    return parser


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    if not args.tol > 0:
        print("error: --tol must be > 0", file=sys.stderr)
        return EXIT_SCENE
    try:
        scene = load_scene(args.scene)
    except (OSError, SceneError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCENE

    try:
        if args.command == "classify":
            rep, show = classify_report(scene, args.tol), _print_classify
        elif args.command == "contact":
            rep, show = contact_report(scene, args.tol), _print_contact
        elif args.command == "sweep":
            if scene.sweep is None:
                print("error: sweep: scene has no sweep block", file=sys.stderr)
                return EXIT_SCENE
            if args.steps is not None and args.steps < 2:
                print("error: --steps must be >= 2", file=sys.stderr)
                return EXIT_SCENE
            rep, show = sweep_report(scene, args.steps, args.tol), _print_sweep
        elif args.command == "plot":
            h, s = scene.hyperboloid, scene.standard_sphere()
            kind = classify_roots(h, s, root_set(h, s, eps=args.tol))
            try:
                plot_cross_section(h, s, args.output, kind)
            except OSError as exc:
                print(f"error: {exc}", file=sys.stderr)
                return EXIT_SCENE
            print(f"wrote {args.output}")
            return EXIT_OK
        else:
            if args.grid < 8:
                print("error: --grid must be >= 8", file=sys.stderr)
                return EXIT_SCENE
            rep, show = verify_report(scene, args.grid, args.tol), _print_verify
    except UnclassifiableRoots as exc:
        print(f"error: unclassifiable root pattern: {exc}", file=sys.stderr)
        return EXIT_UNCLASSIFIABLE

    if getattr(args, "json", False):
        print(dump_json(rep))
    else:
        show(rep)
    if args.command == "verify" and not rep["agrees"]:
        return EXIT_DISAGREE
    return EXIT_OK


def main() -> None:
    sys.exit(run())
