"""Text and JSON file formats.

Line grammars (``#`` starts a comment, blank lines are ignored, names are
non-empty and contain no whitespace, ``<``, or ``#``)::

    poset     A < B        or a bare  A
    complex   v1 v2 ...    one facet per line
    map       A -> B
    relation  A B
    cover     @member NAME followed by facet lines

A file starting with a JSON object (``{`` then ``"`` or ``}``) is read as the
JSON mirror instead.  Element order is the order of first appearance, which matters for
every tie-break downstream.
"""
from __future__ import annotations

import json
import re

from .complex import SimplicialComplex, build_complex
from .nerve_dowker import Cover, Relation
from .poset import MonotoneMap, Poset, PosetError

_NAME = re.compile(r"[^\s<#]+")


class MalformedInput(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str = "<input>"):
        where = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(where + message)
        self.line = line


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def _name(tok: str, no: int, source: str) -> str:
    tok = tok.strip()
    if not _NAME.fullmatch(tok):
        raise MalformedInput(f"bad name {tok!r}", no, source)
    return tok


_JSON_START = re.compile(r"\A\s*\{\s*[\"}]")


def _is_json(text: str) -> bool:
    # face-poset labels such as {1,2} also start with a brace, so look one token further
    return bool(_JSON_START.match(text))


def _load_json(text: str, source: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedInput(f"invalid JSON: {e}", e.lineno, source) from None
    if not isinstance(data, dict):
        raise MalformedInput("JSON input must be an object", None, source)
    return data


def parse_poset(text: str, source: str = "<poset>") -> Poset:
    if _is_json(text):
        data = _load_json(text, source)
        try:
            return Poset.from_json(data)
        except (KeyError, TypeError) as e:
            raise MalformedInput(f"poset JSON needs 'elements' and 'relations' ({e})", None, source) from None
        except PosetError as e:
            raise MalformedInput(str(e), None, source) from None
    elements: dict[str, None] = {}
    relations = []
    for no, line in _lines(text):
        if "<" in line:
            parts = line.split("<")
            if len(parts) != 2:
                raise MalformedInput("expected 'A < B'", no, source)
            a, b = (_name(p, no, source) for p in parts)
            elements.setdefault(a)
            elements.setdefault(b)
            relations.append((a, b))
        else:
            elements.setdefault(_name(line, no, source))
    try:
        return Poset(list(elements), relations)
    except PosetError as e:
        raise MalformedInput(str(e), None, source) from None


def format_poset(P: Poset) -> str:
    """Every element on its own line (fixing element order), then the Hasse edges."""
    lines = list(P.elements) + [f"{a} < {b}" for a, b in P.hasse]
    return "".join(line + "\n" for line in lines)


def parse_complex(text: str, source: str = "<complex>") -> SimplicialComplex:
    if _is_json(text):
        data = _load_json(text, source)
        facets = data.get("facets")
        if not isinstance(facets, list) or not all(isinstance(f, list) and f for f in facets):
            raise MalformedInput("complex JSON needs a non-empty list per facet under 'facets'", None, source)
        return build_complex([[str(v) for v in f] for f in facets])
    facets = []
    for no, line in _lines(text):
        facets.append([_name(t, no, source) for t in line.split()])
    return build_complex(facets)


def format_complex(K: SimplicialComplex) -> str:
    return "".join(" ".join(str(v) for v in f) + "\n" for f in K.facets())


def parse_map(text: str, source: Poset, target: Poset, name: str = "<map>") -> MonotoneMap:
    if _is_json(text):
        data = _load_json(text, name)
        assignment = data.get("assignment")
        if not isinstance(assignment, dict):
            raise MalformedInput("map JSON needs an 'assignment' object", None, name)
        lines = {x: (None, y) for x, y in assignment.items()}
    else:
        lines = {}
        for no, line in _lines(text):
            parts = line.split("->")
            if len(parts) != 2:
                raise MalformedInput("expected 'A -> B'", no, name)
            a, b = (_name(p, no, name) for p in parts)
            if a in lines and lines[a][1] != b:
                raise MalformedInput(f"{a} is sent to both {lines[a][1]} and {b}", no, name)
            lines[a] = (no, b)
    for a, (no, b) in lines.items():
        if a not in source:
            raise MalformedInput(f"unknown source element {a!r}", no, name)
        if b not in target:
            raise MalformedInput(f"unknown target element {b!r}", no, name)
    missing = [x for x in source if x not in lines]
    if missing:
        raise MalformedInput(f"map is undefined on source element {missing[0]!r}", None, name)
    try:
        return MonotoneMap(source, target, {a: b for a, (_, b) in lines.items()})
    except PosetError as e:
        raise MalformedInput(str(e), None, name) from None


def format_map(f: MonotoneMap) -> str:
    return "".join(f"{x} -> {f(x)}\n" for x in f.source)


def parse_relation(text: str, source: str = "<relation>") -> Relation:
    if _is_json(text):
        data = _load_json(text, source)
        pairs = data.get("pairs")
        if not isinstance(pairs, list) or not all(isinstance(p, list) and len(p) == 2 for p in pairs):
            raise MalformedInput("relation JSON needs 'pairs' as a list of [x, y]", None, source)
        pairs = [tuple(map(str, p)) for p in pairs]
    else:
        pairs = []
        for no, line in _lines(text):
            toks = line.split()
            if len(toks) != 2:
                raise MalformedInput("expected 'A B'", no, source)
            pairs.append(tuple(_name(t, no, source) for t in toks))
    left = list(dict.fromkeys(x for x, _ in pairs))
    right = list(dict.fromkeys(y for _, y in pairs))
    return Relation(left, right, pairs)


def format_relation(r: Relation) -> str:
    pairs = sorted(r.pairs, key=lambda p: (r.left.index(p[0]), r.right.index(p[1])))
    return "".join(f"{x} {y}\n" for x, y in pairs)


def parse_cover(text: str, ambient: SimplicialComplex, source: str = "<cover>") -> Cover:
    if _is_json(text):
        data = _load_json(text, source)
        members = data.get("members")
        if not isinstance(members, dict):
            raise MalformedInput("cover JSON needs a 'members' object", None, source)
        facet_lists = {str(k): [[str(v) for v in f] for f in fs] for k, fs in members.items()}
    else:
        facet_lists: dict[str, list] = {}
        current = None
        for no, line in _lines(text):
            if line.startswith("@"):
                toks = line.split()
                if toks[0] != "@member" or len(toks) != 2:
                    raise MalformedInput("expected '@member NAME'", no, source)
                current = _name(toks[1], no, source)
                if current in facet_lists:
                    raise MalformedInput(f"member {current!r} declared twice", no, source)
                facet_lists[current] = []
            elif current is None:
                raise MalformedInput("facet line before any '@member' header", no, source)
            else:
                facet_lists[current].append([_name(t, no, source) for t in line.split()])
    try:
        return Cover(ambient, {k: build_complex(fs) for k, fs in facet_lists.items()})
    except ValueError as e:
        raise MalformedInput(str(e), None, source) from None


def format_cover(c: Cover) -> str:
    out = []
    for name, L in c.members.items():
        out.append(f"@member {name}\n")
        out.append(format_complex(L))
    return "".join(out)
