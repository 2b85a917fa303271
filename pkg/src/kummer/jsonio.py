"""JSON wire formats for the command line.

Decoders track the field path so a schema violation reports exactly where
it happened ("$.levels[0].f.matrix.data[3]: ..."). Integers are accepted
as JSON numbers or decimal strings and always emitted as decimal strings
inside matrix data, where entries can exceed what other JSON readers
handle; structural counts stay plain numbers. Emitted documents carry
"schema": 1 and serialize with sorted keys so identical runs are
byte-identical.
"""

from __future__ import annotations

import json
import math
from typing import Any, Optional, Union

from .cohomology import CyclicGroupModule, GModuleMap, GModuleSequence
from .errors import InputError
from .groups import FgAbGroup, GroupElement, Homomorphism
from .matrices import IntMatrix
from .sequences import Section, ShortExactSequence
from .towers import CoKummerTower, KummerTower, LevelMaps, SigmaModel

SCHEMA = 1

__all__ = [
    "SCHEMA",
    "loads_checked",
    "dumps",
    "document",
    "decode_int",
    "decode_matrix",
    "decode_group",
    "decode_hom",
    "decode_seq",
    "decode_tower",
    "decode_sigma",
    "decode_gmodule",
    "decode_gmodule_seq",
    "encode_int",
    "encode_matrix",
    "encode_group",
    "encode_hom",
    "encode_seq",
    "encode_element",
    "encode_section",
    "encode_tower",
]


def loads_checked(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(
            f"invalid JSON at line {exc.lineno} column {exc.colno}: "
            f"{exc.msg}") from exc


def dumps(doc: Any, pretty: bool = False) -> str:
    if pretty:
        return json.dumps(doc, sort_keys=True, indent=2)
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def document(payload: dict) -> dict:
    out = dict(payload)
    out["schema"] = SCHEMA
    return out


def _fail(path: str, message: str) -> None:
    raise InputError(f"{path}: {message}")


def _require_dict(doc: Any, path: str, keys: tuple[str, ...]) -> dict:
    if not isinstance(doc, dict):
        _fail(path, f"expected an object, got {type(doc).__name__}")
    for key in keys:
        if key not in doc:
            _fail(path, f"missing field {key!r}")
    return doc


def decode_int(doc: Any, path: str) -> int:
    if isinstance(doc, bool):
        _fail(path, "expected an integer, got a boolean")
    if isinstance(doc, int):
        return doc
    if isinstance(doc, str):
        stripped = doc[1:] if doc.startswith("-") else doc
        if stripped.isdigit():
            return int(doc)
        _fail(path, f"not a decimal integer: {doc!r}")
    _fail(path, f"expected an integer, got {type(doc).__name__}")


def decode_matrix(doc: Any, path: str) -> IntMatrix:
    if isinstance(doc, list):
        if any(not isinstance(row, list) for row in doc):
            _fail(path, "matrix rows must be arrays")
        rows = len(doc)
        cols = len(doc[0]) if doc else 0
        for i, row in enumerate(doc):
            if len(row) != cols:
                _fail(f"{path}[{i}]", f"expected {cols} entries, got "
                      f"{len(row)}")
        data = tuple(decode_int(doc[i][j], f"{path}[{i}][{j}]")
                     for i in range(rows) for j in range(cols))
        return IntMatrix(rows, cols, data)
    doc = _require_dict(doc, path, ("rows", "cols", "data"))
    rows = decode_int(doc["rows"], f"{path}.rows")
    cols = decode_int(doc["cols"], f"{path}.cols")
    raw = doc["data"]
    if not isinstance(raw, list):
        _fail(f"{path}.data", "expected an array")
    if len(raw) != rows * cols:
        _fail(f"{path}.data",
              f"expected {rows * cols} entries for a {rows}x{cols} "
              f"matrix, got {len(raw)}")
    data = tuple(decode_int(raw[i], f"{path}.data[{i}]")
                 for i in range(len(raw)))
    return IntMatrix(rows, cols, data)


def decode_group(doc: Any, path: str) -> FgAbGroup:
    doc = _require_dict(doc, path, ("generators", "relations"))
    gens = decode_int(doc["generators"], f"{path}.generators")
    rel = decode_matrix(doc["relations"], f"{path}.relations")
    try:
        return FgAbGroup(gens, rel)
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from exc


def decode_hom(doc: Any, path: str) -> Homomorphism:
    doc = _require_dict(doc, path, ("source", "target", "matrix"))
    src = decode_group(doc["source"], f"{path}.source")
    tgt = decode_group(doc["target"], f"{path}.target")
    mat = decode_matrix(doc["matrix"], f"{path}.matrix")
    try:
        return Homomorphism(src, tgt, mat)
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from exc


def decode_seq(doc: Any, path: str) -> tuple[Homomorphism, Homomorphism]:
    """The two maps of a candidate sequence; exactness is not assumed
    here so the caller can decide it rather than reject the input."""
    doc = _require_dict(doc, path, ("f", "g"))
    f = decode_hom(doc["f"], f"{path}.f")
    g = decode_hom(doc["g"], f"{path}.g")
    if f.target != g.source:
        _fail(path, "f and g do not share the middle group")
    return f, g


def _decode_maps(doc: Any, path: str) -> LevelMaps:
    doc = _require_dict(doc, path, ("alpha", "beta", "gamma"))
    return LevelMaps(alpha=decode_hom(doc["alpha"], f"{path}.alpha"),
                     beta=decode_hom(doc["beta"], f"{path}.beta"),
                     gamma=decode_hom(doc["gamma"], f"{path}.gamma"))


def decode_tower(doc: Any, path: str = "$"
                 ) -> Union[KummerTower, CoKummerTower]:
    from .sequences import check_exact

    doc = _require_dict(doc, path, ("p", "n", "levels", "maps"))
    p = decode_int(doc["p"], f"{path}.p")
    n = decode_int(doc["n"], f"{path}.n")
    direction = doc.get("direction", "up")
    if direction not in ("up", "down"):
        _fail(f"{path}.direction", f"expected 'up' or 'down', got "
              f"{direction!r}")
    levels = doc["levels"]
    if not isinstance(levels, list):
        _fail(f"{path}.levels", "expected an array")
    if len(levels) != n:
        _fail(f"{path}.levels", f"expected {n} levels, got {len(levels)}")
    raw_maps = doc["maps"]
    if not isinstance(raw_maps, list):
        _fail(f"{path}.maps", "expected an array")
    seqs = []
    for i, item in enumerate(levels):
        f, g = decode_seq(item, f"{path}.levels[{i}]")
        try:
            seqs.append(check_exact(f, g))
        except InputError as exc:
            raise InputError(f"{path}.levels[{i}]: {exc}") from exc
    maps = tuple(_decode_maps(item, f"{path}.maps[{i}]")
                 for i, item in enumerate(raw_maps))
    try:
        if direction == "down":
            return CoKummerTower(p, tuple(seqs), maps)
        return KummerTower(p, tuple(seqs), maps)
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from exc


def decode_sigma(doc: Any, path: str = "$") -> SigmaModel:
    doc = _require_dict(doc, path, ("p", "r", "M"))
    p = decode_int(doc["p"], f"{path}.p")
    r = decode_int(doc["r"], f"{path}.r")
    mat = decode_matrix(doc["M"], f"{path}.M")
    try:
        return SigmaModel(p, r, mat)
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from exc


def decode_gmodule(doc: Any, path: str = "$") -> CyclicGroupModule:
    doc = _require_dict(doc, path, ("d", "group", "sigma"))
    d = decode_int(doc["d"], f"{path}.d")
    grp = decode_group(doc["group"], f"{path}.group")
    mat = decode_matrix(doc["sigma"], f"{path}.sigma")
    try:
        return CyclicGroupModule(d, grp, Homomorphism(grp, grp, mat))
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from exc


def decode_gmodule_seq(doc: Any, path: str = "$") -> GModuleSequence:
    doc = _require_dict(doc, path, ("A", "B", "C", "f", "g"))
    a = decode_gmodule(doc["A"], f"{path}.A")
    b = decode_gmodule(doc["B"], f"{path}.B")
    c = decode_gmodule(doc["C"], f"{path}.C")
    f_mat = decode_matrix(doc["f"], f"{path}.f")
    g_mat = decode_matrix(doc["g"], f"{path}.g")
    try:
        f = GModuleMap(a, b, Homomorphism(a.group, b.group, f_mat))
        g = GModuleMap(b, c, Homomorphism(b.group, c.group, g_mat))
        return GModuleSequence(f=f, g=g)
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from exc


def encode_int(n: Union[int, float]) -> str:
    if n == math.inf:
        return "infinite"
    return str(int(n))


def encode_matrix(m: IntMatrix) -> dict:
    return {"rows": m.rows, "cols": m.cols,
            "data": [str(x) for x in m.data]}


def encode_group(g: FgAbGroup) -> dict:
    return {"generators": g.generator_count,
            "relations": encode_matrix(g.relations)}


def encode_hom(h: Homomorphism) -> dict:
    return {"source": encode_group(h.source),
            "target": encode_group(h.target),
            "matrix": encode_matrix(h.matrix)}


def encode_seq(seq: ShortExactSequence) -> dict:
    return {"f": encode_hom(seq.f), "g": encode_hom(seq.g)}


def encode_element(x: GroupElement) -> dict:
    return {"coords": [str(c) for c in x.coords]}


def encode_section(s: Section) -> dict:
    return {"matrix": encode_matrix(s.s.matrix)}


def encode_tower(t: Union[KummerTower, CoKummerTower]) -> dict:
    return {
        "p": t.p,
        "n": t.n,
        "direction": "down" if isinstance(t, CoKummerTower) else "up",
        "levels": [encode_seq(s) for s in t.seqs],
        "maps": [{"alpha": encode_hom(lm.alpha),
                  "beta": encode_hom(lm.beta),
                  "gamma": encode_hom(lm.gamma)} for lm in t.maps],
    }
