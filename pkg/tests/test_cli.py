import io

import pytest

from strandjoin.arc_diagram import Z1, Z2, serialize
from strandjoin.cli import run


@pytest.fixture()
def files(tmp_path):
    p1 = tmp_path / "Z1.arcd"
    p1.write_text(serialize(Z1))
    p2 = tmp_path / "Z2.arcd"
    p2.write_text(serialize(Z2))
    bad = tmp_path / "bad.arcd"
    bad.write_text("type: alpha\narc: a1 a2 a3\nmatch 1: a1 a2\n")
    notw = tmp_path / "not2to1.arcd"
    notw.write_text("type: alpha\narc: a1 a2 a3 a4\nmatch 1: a1 a2\nmatch 1: a3 a4\n")
    return {"Z1": str(p1), "Z2": str(p2), "bad": str(bad), "not2to1": str(notw)}


def _run(argv):
    buf = io.StringIO()
    rc = run(argv, buf)
    return rc, buf.getvalue()


def test_validate_ok_and_errors(files):
    rc, out = _run(["validate", files["Z1"]])
    assert rc == 0 and "ok" in out
    rc, out = _run(["validate", files["bad"]])
    assert rc == 1 and "violation" in out
    rc, out = _run(["validate", files["not2to1"]])
    assert rc == 1
    rc, out = _run(["validate", "/nonexistent/file.arcd"])
    assert rc == 1


def test_blocks_output(files):
    rc, out = _run(["blocks", files["Z1"]])
    assert rc == 0
    lines = [l for l in out.splitlines() if not l.startswith("#")]
    assert "{}\t{}\t1" in lines
    assert "{1}\t{1}\t2" in lines


def test_algebra_dump(files):
    rc, out = _run(["algebra", files["Z2"]])
    assert rc == 0 and "dim 16" in out


def test_join_and_double_commands(files):
    rc, out = _run(
        ["join", files["Z1"], "elementary:D:{1}", "amod:{1}", "elementary:D:{1}"]
    )
    assert rc == 0 and "# matrix" in out
    rc, out = _run(["double", files["Z1"], "amod:{1}"])
    assert rc == 0 and "# diagonal cycle" in out
    rc, out = _run(["join", files["Z1"], "alg", "amod:{1}", "elementary:D:{1}"])
    assert rc == 1


def test_nice_command(files):
    rc, out = _run(["nice", files["Z1"], "slice"])
    assert rc == 0 and "isomorphic" in out
    rc, out = _run(["nice", files["Z2"], "cap:{1,2}"])
    assert rc == 0 and "isomorphic" in out
    rc, out = _run(["nice", files["Z1"], "bogus"])
    assert rc == 1


def test_check_suites(files):
    rc, out = _run(["check", files["Z1"], "dga"])
    assert rc == 0 and "dga: PASS" in out
    rc, out = _run(["check", files["Z1"], "all"])
    assert rc == 0
    for name in ("dga", "variants", "structures", "join", "nice", "sfh"):
        assert f"{name}: PASS" in out


def test_check_parallel_matches_serial(files):
    rc1, out1 = _run(["check", files["Z1"], "all"])
    rc2, out2 = _run(["--parallel", "on", "check", files["Z1"], "all"])
    assert rc1 == rc2 == 0
    assert out1 == out2


def test_determinism_byte_identical(files):
    for cmd in (
        ["blocks", files["Z2"]],
        ["join", files["Z1"], "elementary:D:{1}", "amod:{1}", "elementary:D:{}"],
        ["algebra", files["Z2"]],
    ):
        rc1, out1 = _run(cmd)
        rc2, out2 = _run(cmd)
        assert rc1 == rc2 == 0
        assert out1 == out2


def test_seed_appears_in_header(files):
    rc, out = _run(["--seed", "99", "blocks", files["Z1"]])
    assert rc == 0 and "# seed: 99" in out


def test_bad_flags_exit_one(files, capsys):
    rc, _ = _run(["--max-homotopy-len", "nope", "blocks", files["Z1"]])
    assert rc == 1


def test_check_all_on_z2(files):
    rc, out = _run(["check", files["Z2"], "all"])
    assert rc == 0
    assert out.count("PASS") == 7
