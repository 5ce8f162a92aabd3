import hashlib
import json
import re
import subprocess
import sys

import pytest

from hscontact import cli
from hscontact.classify import UnclassifiableRoots, contact_status
from hscontact.oracle import Agreement, Contact
from hscontact.plot import cross_section
from hscontact.qcore import Sphere, StdHyperboloid

EXTERIOR = """\
hyperboloid:
  a: 1.5
  c: 1.6
sphere:
  center: [2.1, 2.2, 0.3]
  r: 1.4
sweep:
  waypoints: [[4, 0, 0], [0, 0, 0]]
  n_steps: 200
"""

THROAT = """\
hyperboloid:
  a: 1.4142135623730951
  c: 2.0
sphere:
  center: [0, 0, 3]
  r: 2.23606797749979
"""


@pytest.fixture
def scene(tmp_path):
    def write(text, name="scene.yaml"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write


def run(capsys, *argv):
    code = cli.run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_text(capsys, scene):
    code, out, _ = run(capsys, "classify", scene(EXTERIOR))
    assert code == 0
    assert "type: E" in out
    for root in ("1.23656", "2.09451", "4.35893"):
        assert root in out
    assert "regime: standard" in out.lower()


def test_classify_throat_circle_shows_triple_root(capsys, scene):
    code, out, _ = run(capsys, "classify", scene(THROAT))
    assert code == 0
    assert "type: TIc" in out
    assert re.search(r"-2\s+x3\s+\(includes -a\^2\)", out)


def test_json_is_deterministic_and_round_trips(capsys, scene):
    path = scene(EXTERIOR)
    for command in ("classify", "contact", "sweep", "verify"):
        code, first, _ = run(capsys, command, path, "--json")
        assert code == 0
        _, second, _ = run(capsys, command, path, "--json")
        assert first == second
        assert cli.dump_json(json.loads(first)) + "\n" == first


def test_contact_reports_fast_path(capsys, scene):
    code, out, _ = run(capsys, "contact", scene(EXTERIOR))
    assert code == 0
    assert "contact: none" in out and "side: exterior" in out
    assert "fast path: none (agrees)" in out


def test_contact_locus_in_world_frame(capsys, scene):
    text = THROAT.replace("  c: 2.0\n", "  c: 2.0\n  pose:\n    translation: [10, 0, 0]\n")
    text = text.replace("[0, 0, 3]", "[10, 0, 3]")
    code, out, _ = run(capsys, "contact", scene(text), "--json")
    assert code == 0
    locus = json.loads(out)["status"]["locus"]
    assert locus["kind"] == "circle"
    assert all(abs(p[0] - 10.0) <= 2.0 + 1e-9 for p in locus["points_world"])


def test_sweep_text(capsys, scene):
    code, out, _ = run(capsys, "sweep", scene(EXTERIOR), "--steps", "100")
    assert code == 0
    assert "E -> TE" in out and "TI -> I" in out
    # rho = a + r = 2.9 and rho = a - r = 0.1 along the path from rho = 4
    assert "t = 0.2750000000" in out and "t = 0.9750000000" in out


def test_verify_agrees(capsys, scene):
    code, out, _ = run(capsys, "verify", scene(EXTERIOR), "--grid", "128")
    assert code == 0
    assert "agreement: yes" in out


def test_verify_tangent_is_exempt(capsys, scene):
    code, out, _ = run(capsys, "verify", scene(THROAT), "--grid", "64")
    assert code == 0
    assert "exempt" in out


def test_plot_is_reproducible(tmp_path, capsys, scene):
    path = scene(EXTERIOR)
    outs = [tmp_path / "a.svg", tmp_path / "b.svg"]
    for out in outs:
        assert run(capsys, "plot", path, "-o", str(out))[0] == 0
    data = [o.read_bytes() for o in outs]
    assert hashlib.sha256(data[0]).digest() == hashlib.sha256(data[1]).digest()
    assert b"type: E" in data[0]


@pytest.mark.parametrize(
    "a, c, center, r",
    [(1.5, 1.6, (2.1, 2.2, 0.3), 1.4), (1.0, 1.0, (0, 0, 40), 0.5), (5.0, 0.1, (0.2, 0, 0), 12.0)],
)
def test_plot_bounds_hold_circle_and_throat(a, c, center, r):
    geo = cross_section(StdHyperboloid(a, c), Sphere(center, r))
    assert geo.contains_circle()
    assert geo.contains_throat(a)


def test_invalid_scene_exits_1(capsys, scene):
    code, _, err = run(capsys, "classify", scene(EXTERIOR.replace("r: 1.4", "r: -1")))
    assert code == 1
    assert "sphere.r (line 6)" in err


def test_missing_file_exits_1(capsys, tmp_path):
    assert run(capsys, "classify", str(tmp_path / "nope.yaml"))[0] == 1


def test_sweep_without_block_exits_1(capsys, scene):
    code, _, err = run(capsys, "sweep", scene(THROAT))
    assert code == 1
    assert "sweep" in err


def test_bad_flags_exit_1(capsys, scene):
    path = scene(EXTERIOR)
    assert run(capsys, "classify", path, "--tol", "0")[0] == 1
    assert run(capsys, "sweep", path, "--steps", "1")[0] == 1
    assert run(capsys, "verify", path, "--grid", "4")[0] == 1


def test_unwritable_plot_exits_1(capsys, scene, tmp_path):
    assert run(capsys, "plot", scene(EXTERIOR), "-o", str(tmp_path / "no" / "dir" / "x.svg"))[0] == 1


def test_unclassifiable_exits_2(capsys, scene, monkeypatch):
    def boom(*args, **kwargs):
        raise UnclassifiableRoots("forced")

    monkeypatch.setattr(cli, "classify_roots", boom)
    code, _, err = run(capsys, "classify", scene(EXTERIOR))
    assert code == 2
    assert "unclassifiable" in err


def test_disagreement_exits_3(capsys, scene, monkeypatch):
    def disagree(h, s, resolution, status):
        return Agreement(status, Contact(1), None, False, False, "oracle found contact")

    monkeypatch.setattr(cli, "check_agreement", disagree)
    code, out, _ = run(capsys, "verify", scene(EXTERIOR))
    assert code == 3
    assert "agreement: NO, oracle found contact" in out


def test_module_entry_point(scene):
    proc = subprocess.run(
        [sys.executable, "-m", "hscontact", "classify", scene(EXTERIOR)],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert "type: E" in proc.stdout


def test_contact_status_used_by_cli_matches_library(capsys, scene):
    _, out, _ = run(capsys, "contact", scene(EXTERIOR), "--json")
    status = contact_status(StdHyperboloid(1.5, 1.6), Sphere((2.1, 2.2, 0.3), 1.4))
    assert json.loads(out)["status"]["type"] == status.position.value
