"""Reading certifier input documents.

An input document is a JSON object::

    {
      "complex": [[0, 1, 2], [0, 2, 3]],          # maximal simplices
      "cover": {"A": [[0, 1, 2]], "B": [[0, 2, 3]]},
      "attest_amenable": ["A"],                    # optional
      "regular_cover": {"group": "Z2", "edge_labels": [[0, 1, 1]]},  # optional
      "options": {"max_subdiv": 4, "compute_nerve_map": true, "degrees": [2]}
    }

Errors carry the line of the offending JSON value.  Duplicate keys anywhere
(in particular duplicate element names) are rejected.
"""

from __future__ import annotations

import hashlib
import json
import json.decoder
import json.scanner
import re
from dataclasses import dataclass, field

import jsonschema

from .errors import ParseError, SimplexError
from .simplicial import SimplicialComplex, build_complex, make_simplex

__all__ = ["InputDocument", "INPUT_SCHEMA", "load_input", "parse_input_text", "parse_document"]

_VERTEX = {"type": ["integer", "string"]}
_SIMPLEX = {"type": "array", "items": _VERTEX, "minItems": 1}

INPUT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["complex", "cover"],
    "additionalProperties": False,
    "properties": {
        "complex": {"type": "array", "items": _SIMPLEX, "minItems": 1},
        "cover": {
            "type": "object",
            "minProperties": 1,
            "additionalProperties": {"type": "array", "items": _SIMPLEX},
        },
        "attest_amenable": {"type": "array", "items": {"type": "string"}, "uniqueItems": True},
        "regular_cover": {
            "type": "object",
            "required": ["group"],
            "additionalProperties": False,
            "properties": {
                "group": {
                    "oneOf": [
                        {"type": "string"},
                        {
                            "type": "object",
                            "required": ["table"],
                            "additionalProperties": False,
                            "properties": {
                                "name": {"type": "string"},
                                "elements": {"type": "array", "items": {"type": "string"}},
                                "table": {
                                    "type": "array",
                                    "minItems": 1,
                                    "items": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                                },
                            },
                        },
                    ]
                },
                "edge_labels": {
                    "type": "array",
                    "items": {
                        "type": "array",
                        "prefixItems": [_VERTEX, _VERTEX, {"type": "integer", "minimum": 0}],
                        "minItems": 3,
                        "maxItems": 3,
                    },
                },
            },
        },
        "options": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "max_subdiv": {"type": "integer", "minimum": 0},
                "compute_nerve_map": {"type": "boolean"},
                "degrees": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                "tie_break": {"enum": ["least", "greatest"]},
                "nerve_map_method": {"enum": ["star", "carrier", "auto"]},
                "check_equivariance": {"type": "boolean"},
            },
        },
    },
}


@dataclass
class InputDocument:
    space: SimplicialComplex
    cover: dict  # name -> list of canonical simplices (unvalidated)
    attestations: tuple = ()
    regular_cover: dict | None = None  # {"group": ..., "edge_labels": [...]}
    options: dict = field(default_factory=dict)
    digest: str = ""
    source: str | None = None


class _DuplicateKey(Exception):
    def __init__(self, key):
        self.key = key


def _no_duplicates(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise _DuplicateKey(k)
        out[k] = v
    return out


class _LocatingDecoder(json.JSONDecoder):
    """JSON decoder recording the offset of every object and array."""

    def __init__(self, text, path):
        super().__init__(object_pairs_hook=_no_duplicates)
        self.text = text
        self.path = path
        self.offsets = {}  # id(container) -> offset
        self._keep = []
        base_object, base_array = json.decoder.JSONObject, json.decoder.JSONArray

        def parse_object(s_and_end, *args):
            start = s_and_end[1] - 1
            try:
                value, end = base_object(s_and_end, *args)
            except _DuplicateKey as exc:
                raise ParseError(
                    f"duplicate key {exc.key!r}", path, self._duplicate_line(start, exc.key)
                ) from None
            self._note(value, start)
            return value, end

        def parse_array(s_and_end, scan_once):
            start = s_and_end[1] - 1
            value, end = base_array(s_and_end, scan_once)
            self._note(value, start)
            return value, end

        self.parse_object = parse_object
        self.parse_array = parse_array
        self.scan_once = json.scanner.py_make_scanner(self)

    def _note(self, value, start):
        self.offsets[id(value)] = start
        self._keep.append(value)

    def line_of(self, offset):
        return self.text.count("\n", 0, offset) + 1

    def _duplicate_line(self, start, key):
        pat = re.compile(re.escape(json.dumps(key)) + r"\s*:")
        hits = [m.start() for m in pat.finditer(self.text, start)]
        return self.line_of(hits[1] if len(hits) > 1 else start)


def _line_for_path(dec: _LocatingDecoder, doc, path):
    """Line of the deepest container along ``path``."""
    node, best = doc, dec.offsets.get(id(doc), 0)
    for step in path:
        try:
            node = node[step]
        except (KeyError, IndexError, TypeError):
            break
        if id(node) in dec.offsets:
            best = dec.offsets[id(node)]
    return dec.line_of(best)


def _where(path):
    return "/".join(str(p) for p in path) or "<root>"


def parse_input_text(text: str, source: str | None = None, digest: str | None = None) -> InputDocument:
    dec = _LocatingDecoder(text, source)
    try:
        doc = dec.decode(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", source, exc.lineno) from None
    validator = jsonschema.Draft202012Validator(INPUT_SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: (list(map(str, e.absolute_path)), e.message))
    if errors:
        e = errors[0]
        path = list(e.absolute_path)
        raise ParseError(f"{_where(path)}: {e.message}", source, _line_for_path(dec, doc, path))
    if digest is None:
        digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    return _build(doc, dec, source, digest)


def parse_document(doc: dict, source: str | None = None) -> InputDocument:
    """Like :func:`parse_input_text` for an in-memory document."""
    text = json.dumps(doc, indent=1, ensure_ascii=False)
    return parse_input_text(text, source)


def _build(doc, dec, source, digest):
    def fail(msg, path):
        raise ParseError(msg, source, _line_for_path(dec, doc, path))

    maximal = []
    for i, s in enumerate(doc["complex"]):
        try:
            maximal.append(make_simplex(s))
        except SimplexError as exc:
            fail(f"complex/{i}: {exc}", ["complex", i])
    X = build_complex(maximal)
    cover = {}
    for name, simplices in doc["cover"].items():
        out = []
        for i, s in enumerate(simplices):
            path = ["cover", name, i]
            missing = [v for v in s if not X.has_vertex(v)]
            if missing:
                fail(f"cover element {name!r}: simplex {s!r} uses undeclared vertex {missing[0]!r}", path)
            try:
                out.append(make_simplex(s))
            except SimplexError as exc:
                fail(f"cover element {name!r}: {exc}", path)
        cover[name] = out
    attest = tuple(doc.get("attest_amenable", ()))
    for name in attest:
        if name not in cover:
            fail(f"attest_amenable names unknown element {name!r}", ["attest_amenable"])
    reg = doc.get("regular_cover")
    if reg is not None:
        for i, (u, v, _) in enumerate(reg.get("edge_labels", [])):
            for w in (u, v):
                if not X.has_vertex(w):
                    fail(f"edge label {[u, v]!r} uses undeclared vertex {w!r}", ["regular_cover", "edge_labels", i])
    return InputDocument(X, cover, attest, reg, dict(doc.get("options", {})), digest, source)


def load_input(path) -> InputDocument:
    """Read, schema-check and pre-validate an input file.

    Raises :class:`ParseError` with a line number on malformed input.  The
    cover itself is checked later by :func:`nervecert.cover.validate_cover`.
    """
    path = str(path)
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read input: {exc.strerror}", path) from None
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError:
        raise ParseError("input is not valid UTF-8", path) from None
    return parse_input_text(text, path, hashlib.sha256(raw).hexdigest())
