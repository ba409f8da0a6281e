"""Jet manifests: a small line-oriented text format, one document per jet.

::

    # Roman Steiner surface
    source_dim: 3
    ambient_dim: 6
    corank: 0
    variables: [x, y, z]
    quadratic:
      - (4, "x*y", 0.70710678118654757)
      - (5, "x*z", 1/2)
    ---

Coordinates are 1-based ambient indices; coefficients are monomial
coefficients written as decimals or ``p/q`` rationals. Documents are
separated by ``---``. Errors report the 1-based line and column.
"""
from __future__ import annotations

import re
from pathlib import Path

from .errors import LocusmithError, ParseError
from .jet import MongeJet, _parse_number, make_jet

_KEY = re.compile(r"^([A-Za-z_]+)\s*:\s*(.*)$")
_REQUIRED = ("source_dim", "ambient_dim", "corank")
_LISTS = ("variables", "coordinates")


def _strip_comment(line: str) -> str:
    out = []
    quote = None
    for ch in line:
        if quote:
            if ch == quote:
                quote = None
        elif ch in "\"'":
            quote = ch
        elif ch == "#":
            break
        out.append(ch)
    return "".join(out).rstrip()


def _split_fields(body: str, lineno: int, offset: int):
    """Split a tuple body on commas outside quotes, returning (text, column) pairs."""
    fields, start, quote = [], 0, None
    for i, ch in enumerate(body):
        if quote:
            if ch == quote:
                quote = None
        elif ch in "\"'":
            quote = ch
        elif ch == ",":
            fields.append((body[start:i], offset + start))
            start = i + 1
    if quote:
        raise ParseError("unterminated string", lineno, offset + len(body))
    fields.append((body[start:], offset + start))
    return [(f.strip(), col + len(f) - len(f.lstrip())) for f, col in fields]


def _parse_entry(text: str, lineno: int, col: int):
    s = text.strip()
    col += len(text) - len(text.lstrip())
    if not (s.startswith("(") and s.endswith(")")):
        raise ParseError("quadratic entries look like (coordinate, \"monomial\", coefficient)", lineno, col)
    fields = _split_fields(s[1:-1], lineno, col + 1)
    if len(fields) != 3:
        raise ParseError(f"expected 3 fields, found {len(fields)}", lineno, col)
    (c_txt, c_col), (m_txt, m_col), (v_txt, v_col) = fields
    try:
        coord = int(c_txt)
    except ValueError:
        raise ParseError(f"coordinate index must be an integer, got {c_txt!r}", lineno, c_col) from None
    if len(m_txt) >= 2 and m_txt[0] == m_txt[-1] and m_txt[0] in "\"'":
        mono = m_txt[1:-1]
    else:
        mono = m_txt
    if len(v_txt) >= 2 and v_txt[0] == v_txt[-1] and v_txt[0] in "\"'":
        v_txt = v_txt[1:-1]
    try:
        coeff = _parse_number(v_txt)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad coefficient {v_txt!r}", lineno, v_col) from None
    return (coord, mono, coeff), m_col


def _parse_list(value: str, lineno: int, col: int):
    v = value.strip()
    if not (v.startswith("[") and v.endswith("]")):
        raise ParseError("expected a bracketed list", lineno, col)
    items = [x.strip().strip("\"'") for x in v[1:-1].split(",")]
    return tuple(x for x in items if x)


def _build(doc: dict, start_line: int) -> MongeJet:
    for key in _REQUIRED:
        if key not in doc["fields"]:
            raise ParseError(f"missing field {key!r}", start_line, 1)
    f = doc["fields"]
    entries = doc["quadratic"]
    try:
        jet = make_jet(
            [e for e, _, _ in entries],
            source_dim=f["source_dim"][0],
            ambient_dim=f["ambient_dim"][0],
            corank=f["corank"][0],
            var_names=f.get("variables", (None,))[0],
            coord_names=f.get("coordinates", (None,))[0],
        )
    except (LocusmithError, ValueError) as exc:
        line, col = start_line, 1
        # point at the offending entry when we can tell which one it is
        for entry, eline, ecol in entries:
            try:
                make_jet(
                    [entry],
                    source_dim=f["source_dim"][0],
                    ambient_dim=f["ambient_dim"][0],
                    corank=f["corank"][0],
                    var_names=f.get("variables", (None,))[0],
                )
            except (LocusmithError, ValueError):
                line, col = eline, ecol
                break
        raise ParseError(str(exc), line, col) from exc
    return jet


def parse_manifest(text: str) -> list:
    """All jets in a manifest string."""
    docs = []
    cur = None
    in_quad = False
    start = 1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        if line.strip() == "---":
            if cur is not None:
                docs.append((cur, start))
            cur, in_quad = None, False
            continue
        if cur is None:
            cur = {"fields": {}, "quadratic": []}
            start = lineno
        indent = len(line) - len(line.lstrip())
        stripped = line.strip()
        if stripped.startswith("-"):
            if not in_quad:
                raise ParseError("list item outside a 'quadratic:' block", lineno, indent + 1)
            body = stripped[1:]
            col = indent + 2
            entry, mcol = _parse_entry(body, lineno, col)
            cur["quadratic"].append((entry, lineno, mcol))
            continue
        m = _KEY.match(stripped)
        if not m:
            raise ParseError(f"cannot parse {stripped!r}", lineno, indent + 1)
        key, value = m.group(1), m.group(2)
        vcol = indent + 1 + m.start(2)
        in_quad = False
        if key in cur["fields"] or (key == "quadratic" and cur.get("_quad_seen")):
            raise ParseError(f"duplicate field {key!r}", lineno, indent + 1)
        if key == "quadratic":
            cur["_quad_seen"] = True
            if value.strip() not in ("", "[]"):
                raise ParseError("list entries go on the following lines", lineno, vcol)
            in_quad = True
        elif key in _REQUIRED:
            try:
                cur["fields"][key] = (int(value), lineno)
            except ValueError:
                raise ParseError(f"{key} must be an integer, got {value!r}", lineno, vcol) from None
        elif key in _LISTS:
            cur["fields"][key] = (_parse_list(value, lineno, vcol), lineno)
        else:
            raise ParseError(f"unknown field {key!r}", lineno, indent + 1)
    if cur is not None:
        docs.append((cur, start))
    if not docs:
        raise ParseError("manifest contains no jet", 1, 1)
    return [_build(d, s) for d, s in docs]


def load_manifest(path) -> list:
    return parse_manifest(Path(path).read_text(encoding="utf-8"))


def load_jet(path) -> MongeJet:
    """The single jet of a one-document manifest (the first one otherwise)."""
    return load_manifest(path)[0]


def dump_jet(jet: MongeJet, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines += [
        f"source_dim: {jet.source_dim}",
        f"ambient_dim: {jet.ambient_dim}",
        f"corank: {jet.corank}",
        f"variables: [{', '.join(jet.var_names)}]",
        f"coordinates: [{', '.join(jet.coord_names)}]",
        "quadratic:",
    ]
    for coord, mono, coeff in jet.table():
        lines.append(f'  - ({coord}, "{mono}", {coeff!r})')
    return "\n".join(lines) + "\n"


def dump_manifest(jets, comments=None) -> str:
    comments = comments or [None] * len(jets)
    return "---\n".join(dump_jet(j, c) for j, c in zip(jets, comments))


def save_manifest(path, jets, comments=None) -> None:
    if isinstance(jets, MongeJet):
        jets = [jets]
        comments = [comments] if isinstance(comments, str) else comments
    Path(path).write_text(dump_manifest(jets, comments), encoding="utf-8")
