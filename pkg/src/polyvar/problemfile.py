"""Problem files: named exact-rational objects plus queries against them.

The format is strict JSON with rationals as integers or "p/q" strings;
unknown fields are rejected with a path diagnostic so that a typo cannot
silently change a problem.  One file may hold many named objects and many
named queries; the CLI selects queries by operation or by name.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .exactgeom import ConvexPoly, PolySet
from .linalg import Vec, rat
from .multimaps import PolyMultimap
from .plfunc import PLFunc

VERSION_TAG = "polyvar-1"


class ProblemFileError(ValueError):
    pass


def _fail(path: str, message: str):
    raise ProblemFileError(f"{path}: {message}")


def _expect_keys(obj: dict, path: str, required: set[str], optional: set[str] = frozenset()):
    if not isinstance(obj, dict):
        _fail(path, "expected an object")
    for k in obj:
        if k not in required and k not in optional:
            _fail(f"{path}.{k}", "unknown field")
    for k in required:
        if k not in obj:
            _fail(path, f"missing field {k!r}")


_RAT_RE = re.compile(r"^-?\d+(/[1-9]\d*)?$")


def _rat(value: Any, path: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        _fail(path, "rationals must be integers or 'p/q' strings")
    if isinstance(value, str) and not _RAT_RE.match(value):
        _fail(path, f"not a 'p/q' rational: {value!r}")
    try:
        return rat(value)
    except (ValueError, ZeroDivisionError, TypeError):
        _fail(path, f"not a rational: {value!r}")


def _vec(values: Any, dim: int, path: str) -> Vec:
    if not isinstance(values, list) or len(values) != dim:
        _fail(path, f"expected a list of {dim} rationals")
    return tuple(_rat(v, f"{path}[{i}]") for i, v in enumerate(values))


def _rows(values: Any, dim: int, path: str) -> list[tuple[Vec, Fraction]]:
    if not isinstance(values, list):
        _fail(path, "expected a list of rows")
    out = []
    for i, row in enumerate(values):
        rp = f"{path}[{i}]"
        if not isinstance(row, list) or len(row) != 2:
            _fail(rp, "a row is [normal, offset]")
        out.append((_vec(row[0], dim, f"{rp}[0]"), _rat(row[1], f"{rp}[1]")))
    return out


def _convex(spec: dict, path: str) -> ConvexPoly:
    _expect_keys(spec, path, {"type", "dim"}, {"ineqs", "eqs"})
    dim = spec["dim"]
    if not isinstance(dim, int) or dim <= 0:
        _fail(f"{path}.dim", "dimension must be a positive integer")
    return ConvexPoly.make(
        dim,
        _rows(spec.get("ineqs", []), dim, f"{path}.ineqs"),
        _rows(spec.get("eqs", []), dim, f"{path}.eqs"),
    )


def _pieces(values: Any, dim: int, path: str) -> list[ConvexPoly]:
    if not isinstance(values, list) or not values:
        _fail(path, "expected a nonempty list of pieces")
    out = []
    for i, piece in enumerate(values):
        pp = f"{path}[{i}]"
        _expect_keys(piece, pp, set(), {"ineqs", "eqs"})
        out.append(
            ConvexPoly.make(
                dim,
                _rows(piece.get("ineqs", []), dim, f"{pp}.ineqs"),
                _rows(piece.get("eqs", []), dim, f"{pp}.eqs"),
            )
        )
    return out


def _build_object(name: str, spec: Any, path: str):
    if not isinstance(spec, dict) or "type" not in spec:
        _fail(path, "an object needs a 'type'")
    t = spec["type"]
    if t == "convex":
        return _convex(spec, path)
    if t == "polyset":
        _expect_keys(spec, path, {"type", "dim", "pieces"})
        dim = spec["dim"]
        return PolySet.make(dim, _pieces(spec["pieces"], dim, f"{path}.pieces"))
    if t == "multimap":
        _expect_keys(spec, path, {"type", "in_dim", "out_dim", "pieces"})
        n, m = spec["in_dim"], spec["out_dim"]
        pieces = _pieces(spec["pieces"], n + m, f"{path}.pieces")
        return PolyMultimap(n, m, PolySet.make(n + m, pieces))
    if t == "plfunc":
        _expect_keys(spec, path, {"type", "dim", "epi_pieces"})
        dim = spec["dim"]
        return PLFunc.from_epigraph_pieces(
            dim, _pieces(spec["epi_pieces"], dim + 1, f"{path}.epi_pieces")
        )
    if t == "point":
        _expect_keys(spec, path, {"type", "values"})
        values = spec["values"]
        if not isinstance(values, list):
            _fail(f"{path}.values", "expected a list")
        return tuple(_rat(v, f"{path}.values[{i}]") for i, v in enumerate(values))
    _fail(f"{path}.type", f"unknown object type {t!r}")


_QUERY_FIELDS: dict[str, tuple[set[str], set[str]]] = {
    "normal-cone": ({"omega", "point", "kind"}, {"wrt"}),
    "coderivative": ({"map", "x", "y", "ystar"}, {"wrt"}),
    "subdiff": ({"func", "point", "kind"}, {"wrt"}),
    "check-aubin": ({"map", "x", "y"}, {"wrt"}),
    "check-lipschitz": ({"func", "point"}, {"wrt"}),
    "check-lqc": ({"omega1", "omega2", "c1", "c2", "point"}, set()),
    "check-normal-densed": ({"omega1", "omega2", "c1", "c2", "point"}, set()),
    "rule-product": ({"omega1", "c1", "omega2", "c2", "x1", "x2"}, set()),
    "rule-mixed-product": (
        {"omega1", "c1", "omega2", "c2", "n", "m", "s", "point"},
        {"pairing"},
    ),
    "rule-intersection": ({"omega1", "omega2", "c1", "c2", "point"}, set()),
    "rule-preimage": ({"map", "theta", "wrt", "point"}, set()),
    "rule-sum": (
        {"map1", "map2", "c1", "c2", "x", "y", "y1", "y2", "ystar"},
        {"variant"},
    ),
    "rule-chain": ({"inner", "outer", "wrt", "x", "z", "y", "zstar"}, {"variant"}),
    "mpec-check": ({"f", "g", "c1", "c2", "point"}, set()),
}


@dataclass(frozen=True)
class ProblemFile:
    objects: dict[str, Any]
    queries: tuple[dict, ...]

    def query_names(self) -> tuple[str, ...]:
        return tuple(q["name"] for q in self.queries)


def loads(text: str) -> ProblemFile:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}")
    _expect_keys(data, "$", {"version", "objects", "queries"})
    if data["version"] != VERSION_TAG:
        _fail("$.version", f"expected {VERSION_TAG!r}")
    if not isinstance(data["objects"], dict):
        _fail("$.objects", "expected an object map")
    objects = {
        name: _build_object(name, spec, f"$.objects.{name}")
        for name, spec in data["objects"].items()
    }
    if not isinstance(data["queries"], list):
        _fail("$.queries", "expected a list")
    queries = []
    seen = set()
    for i, q in enumerate(data["queries"]):
        path = f"$.queries[{i}]"
        if not isinstance(q, dict) or "op" not in q or "name" not in q:
            _fail(path, "a query needs 'name' and 'op'")
        op = q["op"]
        if op not in _QUERY_FIELDS:
            _fail(f"{path}.op", f"unknown operation {op!r}")
        required, optional = _QUERY_FIELDS[op]
        _expect_keys(q, path, required | {"op", "name"}, optional)
        if q["name"] in seen:
            _fail(f"{path}.name", "duplicate query name")
        seen.add(q["name"])
        for field in required | (optional & set(q)):
            if field in ("kind", "pairing", "variant", "n", "m", "s", "op", "name"):
                continue
            ref = q[field]
            if not isinstance(ref, str) or ref not in objects:
                _fail(f"{path}.{field}", f"unknown object reference {ref!r}")
        queries.append(q)
    return ProblemFile(objects, tuple(queries))


def load_path(path: str) -> ProblemFile:
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())
