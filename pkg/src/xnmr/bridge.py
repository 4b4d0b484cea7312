"""XGF: the canonical text format for ground and residual programs.

::

    xgf 1
    a 1 p                      atom declarations, ids 1..n ascending
    a 2 q
    r 1 0 1 2                  r <head> <npos> <nneg> <pos...> <neg...>
    r 2 0 1 1
    e

Atom texts are canonical printed ground atoms in ascending order, rules
are sorted and duplicate-free, lines end in LF, and nothing else
(comments, blank lines, extra spaces) is permitted.  Parsing is strict,
so a document that parses always re-emits to the same bytes.
"""

from __future__ import annotations

import re

from .errors import FormatError
from .grounder import AtomTable, GroundProgram, GroundRule
from .syntax import GROUND_ATOM_RE
from .wfs import ResidualProgram

VERSION = 1

_NUM = re.compile(r"(?:0|[1-9][0-9]*)\Z")


def emit_xgf(program: GroundProgram) -> str:
    out = [f"xgf {VERSION}\n"]
    for atom_id, text in program.atoms:
        out.append(f"a {atom_id} {text}\n")
    for r in program.rules:
        fields = [str(r.head), str(len(r.pos)), str(len(r.neg))]
        fields += map(str, r.pos)
        fields += map(str, r.neg)
        out.append(f"r {' '.join(fields)}\n")
    out.append("e\n")
    return "".join(out)


def _ids(fields: list[str], lineno: int) -> list[int]:
    for f in fields:
        if not _NUM.match(f):
            raise FormatError(lineno, f"expected a non-negative integer, got {f!r}")
    return [int(f) for f in fields]


def parse_xgf(text: str) -> ResidualProgram:
    if not text.endswith("\n"):
        raise FormatError(text.count("\n") + 1, "missing final newline")
    lines = text[:-1].split("\n")
    if lines[0] != f"xgf {VERSION}":
        if lines[0].startswith("xgf "):
            raise FormatError(1, f"unsupported version {lines[0][4:]!r}")
        raise FormatError(1, "missing 'xgf' header")
    if lines[-1] != "e" or len(lines) < 2:
        raise FormatError(len(lines), "missing terminator 'e'")

    texts: list[str] = []
    rules: list[GroundRule] = []
    for lineno, line in enumerate(lines[1:-1], 2):
        fields = line.split(" ")
        tag = fields[0]
        if tag == "a":
            if rules:
                raise FormatError(lineno, "atom declaration after rules")
            if len(fields) != 3:
                raise FormatError(lineno, "expected 'a <id> <atom>'")
            (atom_id,) = _ids(fields[1:2], lineno)
            if atom_id != len(texts) + 1:
                raise FormatError(lineno, f"expected atom id {len(texts) + 1}, got {atom_id}")
            atom = fields[2]
            if not GROUND_ATOM_RE.match(atom):
                raise FormatError(lineno, f"malformed atom {atom!r}")
            if texts and atom <= texts[-1]:
                raise FormatError(lineno, "atoms not in ascending order")
            texts.append(atom)
        elif tag == "r":
            nums = _ids(fields[1:], lineno)
            if len(nums) < 3:
                raise FormatError(lineno, "expected 'r <head> <npos> <nneg> ...'")
            head, npos, nneg = nums[:3]
            body = nums[3:]
            if len(body) != npos + nneg:
                raise FormatError(lineno, f"expected {npos + nneg} body ids, got {len(body)}")
            for a in (head, *body):
                if not 1 <= a <= len(texts):
                    raise FormatError(lineno, f"unknown atom id {a}")
            pos, neg = tuple(body[:npos]), tuple(body[npos:])
            for part in (pos, neg):
                if any(x >= y for x, y in zip(part, part[1:])):
                    raise FormatError(lineno, "body ids not strictly ascending")
            rule = GroundRule(head, pos, neg)
            if rules and rule <= rules[-1]:
                raise FormatError(lineno, "rules not in strictly ascending order")
            rules.append(rule)
        else:
            raise FormatError(lineno, f"unknown record {tag!r}")
    return ResidualProgram(AtomTable.from_ordered(texts), tuple(rules))
