"""The line-oriented ``tlms-v1`` document format.

A document is a header line followed by sections::

    tlms-v1

    [fan]
    dim = 2
    rays = (1,0) (0,1) (-1,-1)

    [multisection]
    rank = 2
    mode = matchings
    sheets 0 = (1,0) (0,1)
    match 1 = 0:1 1:0

``mode`` is ``slopes`` (bundle slopes, equal slopes merge into weighted
sheets), ``matchings`` (weight-one sheets glued by ``match j = a:b`` lines,
inferred from ray values when omitted) or ``cells`` (explicit ``sheet``,
``lift`` and ``vertices`` lines). Optional ``[kaneyama]`` lines read
``g i j = [a b; c d]`` and optional ``[walls]`` lines read ``n j = [...]`` or
``n j vertex w = [...]``. Blank lines and ``#`` comments are ignored.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ParseError, TlmsError
from .fan import Fan2D, build_complete_fan_2d
from .multisection import MultiSection, RayLift, Sheet, from_bundle_slopes, from_matchings
from .ratmat import fmt as fmt_matrix

HEADER = "tlms-v1"
INT_LIMIT = 2**63 - 1

_VEC = re.compile(r"\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)")
_INT = re.compile(r"-?\d+")
_RAT = re.compile(r"-?\d+(?:/-?\d+)?")


@dataclass
class InputDocument:
    fan: Fan2D
    rank: int
    mode: str
    slopes: list = field(default_factory=list)  # per cone, for slopes/matchings
    matchings: list | None = None  # per ray, for matchings
    cells: tuple | None = None  # (sheets, lifts, vertex weights) for cells
    kaneyama: dict | None = None  # (i, j) -> matrix
    walls: list | None = None  # (ray, vertex, matrix)
    ms: MultiSection | None = None


class _Line:
    def __init__(self, text: str, number: int):
        self.text = text
        self.number = number

    def fail(self, message: str, column: int = 1):
        raise ParseError(message, self.number, column)


def _int(tok: str, line: _Line, col: int) -> int:
    v = int(tok)
    if abs(v) > INT_LIMIT:
        line.fail(f"integer overflow: {tok}", col)
    return v


def _parse_rational(tok: str, line: _Line, col: int) -> Fraction:
    if not _RAT.fullmatch(tok):
        line.fail(f"malformed rational {tok!r}", col)
    if "/" in tok:
        p, q = tok.split("/")
        if int(q) == 0:
            line.fail(f"malformed rational {tok!r}: zero denominator", col)
        return Fraction(_int(p, line, col), _int(q, line, col))
    return Fraction(_int(tok, line, col))


def _parse_vectors(text: str, line: _Line, offset: int) -> list:
    out = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _VEC.match(text, pos)
        if not m:
            line.fail("expected a lattice vector like (1,-2)", offset + pos + 1)
        out.append((_int(m.group(1), line, offset + m.start(1) + 1), _int(m.group(2), line, offset + m.start(2) + 1)))
        pos = m.end()
    return out


def _parse_ints(text: str, line: _Line, offset: int) -> list[int]:
    out = []
    for m in re.finditer(r"\S+", text):
        if not _INT.fullmatch(m.group()):
            line.fail(f"expected an integer, got {m.group()!r}", offset + m.start() + 1)
        out.append(_int(m.group(), line, offset + m.start() + 1))
    return out


def _parse_matrix(text: str, line: _Line, offset: int) -> tuple:
    s = text.strip()
    lead = offset + len(text) - len(text.lstrip())
    if not (s.startswith("[") and s.endswith("]")):
        line.fail("expected a matrix like [1 0; 0 1]", lead + 1)
    body_start = lead + 1
    rows = []
    pos = 0
    for chunk in s[1:-1].split(";"):
        row = []
        for m in re.finditer(r"\S+", chunk):
            row.append(_parse_rational(m.group(), line, body_start + pos + m.start() + 1))
        rows.append(tuple(row))
        pos += len(chunk) + 1
    n = len(rows)
    if any(len(r) != n for r in rows):
        line.fail("matrix is not square", lead + 1)
    return tuple(rows)


def _split(line: _Line):
    """``key args = value`` -> (key, args, value, column of value)."""
    if "=" not in line.text:
        line.fail("expected 'key = value'")
    left, right = line.text.split("=", 1)
    parts = left.split()
    if not parts:
        line.fail("missing key")
    return parts[0], parts[1:], right, len(left) + 1


def parse(text: str) -> InputDocument:
    raw = text.split("\n")
    lines = []
    for n, t in enumerate(raw, start=1):
        stripped = t.split("#", 1)[0].rstrip()
        if stripped.strip():
            lines.append(_Line(stripped, n))
    if not lines or lines[0].text.strip() != HEADER:
        where = lines[0] if lines else _Line("", 1)
        where.fail(f"missing header line {HEADER!r}")
    sections: dict[str, list[_Line]] = {}
    current = None
    for line in lines[1:]:
        s = line.text.strip()
        if s.startswith("["):
            name = s.strip("[]")
            if not s.endswith("]") or name not in ("fan", "multisection", "kaneyama", "walls"):
                line.fail(f"unknown section {s!r}")
            if name in sections:
                line.fail(f"duplicate section [{name}]")
            sections[name] = []
            current = name
            continue
        if current is None:
            line.fail("content before the first section")
        sections[current].append(line)
    if "fan" not in sections:
        raise ParseError("missing [fan] section", len(raw), 1)

    fan = _parse_fan(sections["fan"], len(raw))
    doc = InputDocument(fan=fan, rank=0, mode="slopes")
    if "multisection" in sections:
        _parse_multisection(doc, sections["multisection"], len(raw))
    if "kaneyama" in sections:
        doc.kaneyama = {}
        for line in sections["kaneyama"]:
            key, args, value, col = _split(line)
            if key != "g" or len(args) != 2:
                line.fail("expected 'g i j = [...]'")
            if not all(_INT.fullmatch(a) for a in args):
                line.fail("cone indices must be integers")
            i, j = int(args[0]), int(args[1])
            if (i, j) in doc.kaneyama:
                line.fail(f"duplicate pair ({i}, {j})")
            doc.kaneyama[(i, j)] = _parse_matrix(value, line, col)
    if "walls" in sections:
        doc.walls = []
        for line in sections["walls"]:
            key, args, value, col = _split(line)
            if key != "n" or len(args) not in (1, 3) or (len(args) == 3 and args[1] != "vertex"):
                line.fail("expected 'n j = [...]' or 'n j vertex w = [...]'")
            nums = [a for a in args if a != "vertex"]
            if not all(_INT.fullmatch(a) for a in nums):
                line.fail("ray and vertex indices must be integers")
            j = int(nums[0])
            w = int(nums[1]) if len(nums) > 1 else 0
            doc.walls.append((j, w, _parse_matrix(value, line, col)))
    return doc


def _parse_fan(lines, last) -> Fan2D:
    vals = {}
    for line in lines:
        key, args, value, col = _split(line)
        if args or key not in ("dim", "rays"):
            line.fail(f"unknown fan key {key!r}")
        if key == "dim":
            d = _parse_ints(value, line, col)
            if d != [2]:
                line.fail("only dim = 2 is supported", col + 1)
            vals["dim"] = 2
        else:
            vals["rays"] = (_parse_vectors(value, line, col), line)
    if "rays" not in vals:
        raise ParseError("[fan] needs a 'rays' line", last, 1)
    rays, line = vals["rays"]
    try:
        fan = build_complete_fan_2d(rays)
    except TlmsError as e:
        line.fail(str(e))
    return fan


def _parse_multisection(doc: InputDocument, lines, last):
    k = doc.fan.k
    rank = mode = None
    sheets_by_cone: dict[int, list] = {}
    matches: dict[int, list] = {}
    cell_sheets: dict[int, list] = {}
    cell_lifts: dict[int, list] = {}
    vertices = None
    for line in lines:
        key, args, value, col = _split(line)
        if key == "rank" and not args:
            r = _parse_ints(value, line, col)
            if len(r) != 1 or r[0] < 1:
                line.fail("rank must be a positive integer", col + 1)
            rank = r[0]
        elif key == "mode" and not args:
            mode = value.strip()
            if mode not in ("slopes", "matchings", "cells"):
                line.fail(f"unknown mode {mode!r}", col + 1)
        elif key in ("sheets", "match", "sheet", "lift") and len(args) == 1:
            if not _INT.fullmatch(args[0]) or not 0 <= int(args[0]) < k:
                line.fail(f"index {args[0]!r} out of range for {k} cones")
            i = int(args[0])
            if key == "sheets":
                if i in sheets_by_cone:
                    line.fail(f"duplicate sheets line for cone {i}")
                sheets_by_cone[i] = _parse_vectors(value, line, col)
            elif key == "match":
                perm = []
                for m in re.finditer(r"\S+", value):
                    mm = re.fullmatch(r"(\d+):(\d+)", m.group())
                    if not mm or int(mm.group(1)) != len(perm):
                        line.fail("expected 0:b0 1:b1 ...", col + m.start() + 1)
                    perm.append(int(mm.group(2)))
                matches[i] = perm
            elif key == "sheet":
                mm = re.fullmatch(r"\s*(\([^)]*\))\s+weight\s+(\d+)\s+faces\s+(\d+)\s+(\d+)\s*", value)
                if not mm:
                    line.fail("expected 'sheet i = (a,b) weight w faces p q'", col + 1)
                slope = _parse_vectors(mm.group(1), line, col)[0]
                cell_sheets.setdefault(i, []).append(
                    Sheet(i, slope, int(mm.group(2)), (int(mm.group(3)), int(mm.group(4))))
                )
            else:
                mm = re.fullmatch(r"\s*(-?\d+)\s+weight\s+(\d+)\s+vertex\s+(\d+)\s*", value)
                if not mm:
                    line.fail("expected 'lift j = value weight w vertex v'", col + 1)
                cell_lifts.setdefault(i, []).append(
                    RayLift(i, _int(mm.group(1), line, col + 1), int(mm.group(2)), int(mm.group(3)))
                )
        elif key == "vertices" and not args:
            vertices = _parse_ints(value, line, col)
        else:
            line.fail(f"unknown multisection key {key!r}")
    if rank is None or mode is None:
        raise ParseError("[multisection] needs 'rank' and 'mode'", last, 1)
    doc.rank, doc.mode = rank, mode
    first = lines[0] if lines else _Line("", last)
    try:
        if mode in ("slopes", "matchings"):
            if sorted(sheets_by_cone) != list(range(k)):
                first.fail(f"need one 'sheets' line per cone 0..{k - 1}")
            doc.slopes = [sheets_by_cone[i] for i in range(k)]
            if mode == "slopes":
                doc.ms = from_bundle_slopes(doc.fan, doc.slopes)
            else:
                if matches and sorted(matches) != list(range(k)):
                    first.fail(f"need 'match' lines for all rays 0..{k - 1} or none")
                doc.matchings = [matches[j] for j in range(k)] if matches else None
                doc.ms = from_matchings(doc.fan, doc.slopes, doc.matchings)
        else:
            if vertices is None:
                first.fail("cells mode needs a 'vertices' line")
            sh = tuple(tuple(cell_sheets.get(i, [])) for i in range(k))
            li = tuple(tuple(cell_lifts.get(j, [])) for j in range(k))
            doc.cells = (sh, li, tuple(vertices))
            doc.ms = MultiSection(doc.fan, sh, li, tuple(vertices))
    except ParseError:
        raise
    except TlmsError as e:
        first.fail(str(e))
    if doc.ms.rank != rank:
        first.fail(f"declared rank {rank} but sheets give rank {doc.ms.rank}")


def _vec(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def emit(doc: InputDocument) -> str:
    out = [HEADER, "", "[fan]", "dim = 2", "rays = " + " ".join(_vec(r) for r in doc.fan.rays)]
    if doc.ms is not None or doc.mode == "cells" or doc.slopes:
        out += ["", "[multisection]", f"rank = {doc.rank}", f"mode = {doc.mode}"]
        if doc.mode in ("slopes", "matchings"):
            for i, cone in enumerate(doc.slopes):
                out.append(f"sheets {i} = " + " ".join(_vec(m) for m in cone))
            if doc.mode == "matchings" and doc.matchings is not None:
                for j, perm in enumerate(doc.matchings):
                    out.append(f"match {j} = " + " ".join(f"{a}:{b}" for a, b in enumerate(perm)))
        else:
            sheets, lifts, vertices = doc.cells
            for group in sheets:
                for s in group:
                    out.append(f"sheet {s.cone} = {_vec(s.slope)} weight {s.weight} faces {s.faces[0]} {s.faces[1]}")
            for group in lifts:
                for l in group:
                    out.append(f"lift {l.ray} = {l.value} weight {l.weight} vertex {l.vertex}")
            out.append("vertices = " + " ".join(str(w) for w in vertices))
    if doc.kaneyama is not None:
        out += ["", "[kaneyama]"]
        for (i, j) in sorted(doc.kaneyama):
            out.append(f"g {i} {j} = {fmt_matrix(doc.kaneyama[(i, j)])}")
    if doc.walls is not None:
        out += ["", "[walls]"]
        for j, w, n in doc.walls:
            key = f"n {j}" if w == 0 else f"n {j} vertex {w}"
            out.append(f"{key} = {fmt_matrix(n)}")
    return "\n".join(out) + "\n"


def document_for(ms: MultiSection, kaneyama=None, walls=None) -> InputDocument:
    """Canonical document for a multi-section: matchings mode when it round-trips, else cells."""
    doc = InputDocument(fan=ms.fan, rank=ms.rank, mode="cells", kaneyama=kaneyama, walls=walls, ms=ms)
    if ms.all_weights_one():
        slopes = [[s.slope for s in cone] for cone in ms.sheets]
        k = ms.fan.k
        matchings = []
        for j in range(k):
            left, right = ms.fan.cones_of_ray(j)
            by_face = {s.faces[0]: b for b, s in enumerate(ms.sheets[right])}
            matchings.append([by_face[s.faces[1]] for s in ms.sheets[left]])
        try:
            rebuilt = from_matchings(ms.fan, slopes, matchings)
        except TlmsError:
            rebuilt = None
        if rebuilt == ms:
            doc.mode, doc.slopes, doc.matchings = "matchings", slopes, matchings
            return doc
    doc.cells = (ms.sheets, ms.ray_lifts, ms.vertex_weights)
    return doc

