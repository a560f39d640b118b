import io
import random
import re
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tlms import corpus as shipped
from tlms.cli import main
from tlms.errors import ParseError
from tlms.generate import random_multisection
from tlms.multisection import zero_section
from tlms.textformat import document_for, emit, parse

SHIPPED = ["zero_p2", "line_d0_p2", "tangent_p2", "obstructed_p2", "tangent_p2_kaneyama"]


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), buf)
    return code, buf.getvalue()


def path(name):
    return str(shipped.path(name))


# ---------------------------------------------------------------- format


def test_parse_zero_section():
    doc = shipped.load("zero_p2")
    assert doc.rank == 1
    assert doc.ms == zero_section(doc.fan)


def test_parse_tangent():
    doc = shipped.load("tangent_p2")
    assert doc.rank == 2 and doc.ms.rank == 2


@pytest.mark.parametrize("name", SHIPPED)
def test_shipped_round_trip(name):
    text = shipped.path(name).read_text(encoding="utf-8")
    doc = parse(text)
    assert emit(doc) == text
    assert parse(emit(doc)).ms == doc.ms


def kaneyama_doc(value):
    text = shipped.path("tangent_p2_kaneyama").read_text(encoding="utf-8")
    return re.sub(r"g 0 1 = \[[^\]]*\]", f"g 0 1 = [{value} 0; 1 1]", text)


def test_malformed_rational():
    with pytest.raises(ParseError) as exc:
        parse(kaneyama_doc("1/0"))
    assert "malformed" in str(exc.value).lower() or "rational" in str(exc.value).lower()
    assert exc.value.line > 0 and exc.value.column > 0


def test_integer_overflow():
    text = shipped.path("zero_p2").read_text(encoding="utf-8").replace("(1,0)", f"({2**64},0)", 1)
    with pytest.raises(ParseError) as exc:
        parse(text)
    assert "overflow" in str(exc.value)


def test_syntax_errors_have_positions():
    with pytest.raises(ParseError) as exc:
        parse("tlms-v1\n[fan]\ndim = 2\nrays = (1,0) (0,1) (-1,-1\n")
    assert exc.value.line == 4
    with pytest.raises(ParseError):
        parse("not-a-header\n")
    with pytest.raises(ParseError):
        parse("tlms-v1\n[bogus]\n")


def test_rationals_parse():
    doc = parse(kaneyama_doc("-3/6"))
    from fractions import Fraction

    assert doc.kaneyama[(0, 1)][0][0] == Fraction(-1, 2)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_emit_parse_round_trip(seed):
    ms = random_multisection(random.Random(seed))
    text = emit(document_for(ms))
    doc = parse(text)
    assert doc.ms == ms
    assert emit(doc) == text


# ---------------------------------------------------------------- commands


def test_validate_command():
    assert run("validate", "--input", path("tangent_p2")) == (0, "valid\n")


def test_separable_and_indecomposable():
    code, out = run("separable", "--input", path("tangent_p2"))
    assert code == 0 and "1-separable: yes" in out
    assert run("indecomposable", "--input", path("tangent_p2"))[0] == 0
    assert run("indecomposable", "--input", path("zero_p2"))[0] == 0


def test_solve_tangent():
    code, out = run("solve", "--input", path("tangent_p2"))
    assert code == 0
    entries = []
    for line in out.splitlines():
        if line.startswith("g "):
            entries += line.split("=", 1)[1].replace("[", " ").replace("]", " ").replace(";", " ").split()
    assert len(entries) == 12
    assert set(entries) <= {"0", "1", "-1"}


def test_slope_condition_obstructed():
    code, out = run("slope-condition", "--input", path("obstructed_p2"))
    assert code == 1
    assert "[U, U]" in out


def test_solve_obstructed_reports_defect():
    code, out = run("solve", "--input", path("obstructed_p2"))
    assert code == 1
    assert "defect: [-1 1; -1 -1]" in out


def test_bound():
    code, out = run("bound", "--input", path("tangent_p2"))
    assert (code, out) == (0, "general: 3, rank2: 2\n")


def test_kaneyama_and_loop():
    assert run("verify-kaneyama", "--input", path("tangent_p2_kaneyama")) == (0, "valid\n")
    code, out = run("compose-loop", "--input", path("tangent_p2_kaneyama"))
    assert code == 0 and "consistent: yes" in out
    code, _ = run("verify-kaneyama", "--input", path("tangent_p2"))
    assert code == 2


def test_operations_emit_documents():
    code, out = run("union", "--input", path("line_d0_p2"), "--input", path("zero_p2"))
    assert code == 0 and parse(out).ms.rank == 2
    code, out = run("product", "--input", path("line_d0_p2"), "--input", path("tangent_p2"))
    assert code == 0 and parse(out).ms.rank == 2
    code, out = run("dual", "--input", path("line_d0_p2"))
    assert [s.slope for g in parse(out).ms.sheets for s in g] == [(1, 0), (0, 0), (1, -1)]
    code, out = run("separate", "--input", path("tangent_p2"))
    assert parse(out).ms == shipped.load("tangent_p2").ms


def test_usage_errors(tmp_path):
    assert run("validate")[0] == 2
    assert run("union", "--input", path("zero_p2"))[0] == 2
    assert run("frobnicate")[0] == 2
    fan_only = tmp_path / "fan.tlms"
    fan_only.write_text("tlms-v1\n[fan]\ndim = 2\nrays = (1,0) (0,1) (-1,-1)\n", encoding="utf-8")
    assert run("bound", "--input", str(fan_only))[0] == 2
    bad = tmp_path / "bad.tlms"
    bad.write_text(kaneyama_doc("1/0"), encoding="utf-8")
    assert run("verify-kaneyama", "--input", str(bad))[0] == 2
    assert run("validate", "--input", str(tmp_path / "missing.tlms"))[0] == 2


def test_deterministic_reports():
    for cmd in ("solve", "slope-condition", "separable", "bound"):
        for name in ("tangent_p2", "obstructed_p2"):
            assert run(cmd, "--input", path(name)) == run(cmd, "--input", path(name))


def test_generate_and_corpus_run(tmp_path):
    code, _ = run("generate", "--corpus", str(tmp_path), "--count", "12", "--seed", "7")
    assert code == 0
    files = sorted(p.name for p in tmp_path.glob("*.tlms"))
    assert len(files) == 12
    code, out = run("solve", "--corpus", str(tmp_path))
    assert len(out.splitlines()) == 12
    assert code in (0, 1)
    again = tmp_path / "again"
    run("generate", "--corpus", str(again), "--count", "12", "--seed", "7")
    assert [p.read_text() for p in sorted(again.glob("*.tlms"))] == [
        p.read_text() for p in sorted(tmp_path.glob("*.tlms"))
    ]


def test_console_entry():
    res = subprocess.run(
        [sys.executable, "-m", "tlms", "bound", "--input", path("tangent_p2")],
        capture_output=True, text=True, check=False,
    )
    assert res.returncode == 0
    assert res.stdout == "general: 3, rank2: 2\n"
