"""JSON file formats for algebras, rings, morphisms, amalgams and rules.

Algebra file:    {"carrier": [...], "t": [[[...]]], "q": [[[...]]],
                  "zero": "0", "one": "1"}
                 with tables as nested arrays in carrier order; a file
                 with "add"/"mul" tables instead describes a unital ring
                 and is converted via t(a,b,c) = ab + c.
Morphism file:   {"source": <file>, "target": <file>, "map": {...}}
                 (paths are resolved relative to the morphism file).
Amalgam file:    {"algebras": [<file>, ...],
                  "shared": {"elements": [...], "maps": [{...}, ...]}}
                 members are tagged "1", "2", ... in order; maps default
                 to the identity on the shared names.
Rule file:       [{"label": ..., "lhs": ..., "rhs": ...}, ...] with terms
                 in the s-expression syntax.
"""

from __future__ import annotations

import json
import os

from .algebras import TernaryMap, TernaryRing, from_unital_ring
from .amalgams import Amalgam
from .errors import ParseError
from .rewriting import Rule, RuleSystem
from .rings import CommRing
from .terms import TERNARY_SIGNATURE, parse_term


def _read(path: str):
    try:
        with open(path) as handle:
            return json.load(handle)
    except OSError as exc:
        raise ParseError("cannot read %s: %s" % (path, exc))
    except json.JSONDecodeError as exc:
        raise ParseError("%s is not valid JSON: %s" % (path, exc))


def _nested_table(carrier, nested, opname) -> dict:
    if len(nested) != len(carrier):
        raise ParseError("%s-table must have one plane per carrier element" % opname)
    table = {}
    for a, plane in zip(carrier, nested):
        if len(plane) != len(carrier):
            raise ParseError("%s-table plane for %r has wrong size" % (opname, a))
        for b, row in zip(carrier, plane):
            if len(row) != len(carrier):
                raise ParseError("%s-table row (%r,%r) has wrong size" % (opname, a, b))
            for c, value in zip(carrier, row):
                table[(a, b, c)] = value
    return table


def _pair_table(carrier, nested, opname) -> dict:
    if len(nested) != len(carrier):
        raise ParseError("%s-table must have one row per carrier element" % opname)
    table = {}
    for a, row in zip(carrier, nested):
        if len(row) != len(carrier):
            raise ParseError("%s-table row for %r has wrong size" % (opname, a))
        for b, value in zip(carrier, row):
            table[(a, b)] = value
    return table


def _algebra_from_dict(data: dict, name: str) -> TernaryRing:
    for key in ("carrier", "zero", "one"):
        if key not in data:
            raise ParseError("algebra file misses %r" % key)
    carrier = [str(x) for x in data["carrier"]]
    zero, one = str(data["zero"]), str(data["one"])
    if "t" in data and "q" in data:
        t_table = _nested_table(carrier, data["t"], "t")
        q_table = _nested_table(carrier, data["q"], "q")
        return TernaryRing(carrier, t_table, q_table, zero, one, name=name)
    if "add" in data and "mul" in data:
        add = _pair_table(carrier, data["add"], "add")
        mul = _pair_table(carrier, data["mul"], "mul")
        return from_unital_ring(carrier, add, mul, zero, one, name=name)
    raise ParseError("algebra file needs either t/q or add/mul tables")


def load_algebra(path: str) -> TernaryRing:
    data = _read(path)
    name = os.path.splitext(os.path.basename(path))[0]
    return _algebra_from_dict(data, name)


def load_ring(path: str) -> CommRing:
    data = _read(path)
    for key in ("carrier", "add", "mul", "zero", "one"):
        if key not in data:
            raise ParseError("ring file misses %r" % key)
    carrier = [str(x) for x in data["carrier"]]
    add = _pair_table(carrier, data["add"], "add")
    mul = _pair_table(carrier, data["mul"], "mul")
    name = os.path.splitext(os.path.basename(path))[0]
    return CommRing(carrier, add, mul, str(data["zero"]), str(data["one"]), name=name)


def load_morphism(path: str) -> TernaryMap:
    data = _read(path)
    for key in ("source", "target", "map"):
        if key not in data:
            raise ParseError("morphism file misses %r" % key)
    base = os.path.dirname(os.path.abspath(path))
    source = load_algebra(os.path.join(base, data["source"]))
    target = load_algebra(os.path.join(base, data["target"]))
    mapping = {str(k): str(v) for k, v in data["map"].items()}
    name = os.path.splitext(os.path.basename(path))[0]
    return TernaryMap(source, target, mapping, name=name)


def load_amalgam(path: str) -> Amalgam:
    data = _read(path)
    if "algebras" not in data or "shared" not in data:
        raise ParseError("amalgam file needs 'algebras' and 'shared'")
    shared = data["shared"]
    if "elements" not in shared:
        raise ParseError("amalgam 'shared' needs 'elements'")
    base = os.path.dirname(os.path.abspath(path))
    members = []
    for i, ref in enumerate(data["algebras"], start=1):
        members.append((str(i), load_algebra(os.path.join(base, ref))))
    elements = [str(x) for x in shared["elements"]]
    maps = None
    if "maps" in shared:
        raw = shared["maps"]
        if len(raw) != len(members):
            raise ParseError("amalgam needs one shared map per algebra")
        maps = {
            tag: {str(k): str(v) for k, v in entry.items()}
            for (tag, _), entry in zip(members, raw)
        }
    name = os.path.splitext(os.path.basename(path))[0]
    return Amalgam(members, elements, maps, name=name)


def load_rules(path: str) -> RuleSystem:
    data = _read(path)
    if not isinstance(data, list):
        raise ParseError("rule file must be a JSON list")
    rules = []
    for entry in data:
        for key in ("label", "lhs", "rhs"):
            if key not in entry:
                raise ParseError("rule entry misses %r" % key)
        try:
            rules.append(
                Rule(
                    str(entry["label"]),
                    parse_term(entry["lhs"], TERNARY_SIGNATURE),
                    parse_term(entry["rhs"], TERNARY_SIGNATURE),
                )
            )
        except ValueError as exc:
            raise ParseError("bad rule %r: %s" % (entry.get("label"), exc))
    return RuleSystem(TERNARY_SIGNATURE, tuple(rules))


def algebra_to_dict(algebra: TernaryRing) -> dict:
    carrier = list(algebra.carrier)
    n = len(carrier)
    return {
        "carrier": carrier,
        "t": [
            [[carrier[algebra.t_idx[a][b][c]] for c in range(n)] for b in range(n)]
            for a in range(n)
        ],
        "q": [
            [[carrier[algebra.q_idx[a][b][c]] for c in range(n)] for b in range(n)]
            for a in range(n)
        ],
        "zero": algebra.zero,
        "one": algebra.one,
    }


def ring_to_dict(ring: CommRing) -> dict:
    carrier = list(ring.carrier)
    return {
        "carrier": carrier,
        "add": [[ring.plus(a, b) for b in carrier] for a in carrier],
        "mul": [[ring.times(a, b) for b in carrier] for a in carrier],
        "zero": ring.zero,
        "one": ring.one,
    }


def save_json(data, path: str) -> None:
    with open(path, "w") as handle:
        json.dump(data, handle, indent=2, sort_keys=True)
        handle.write("\n")
