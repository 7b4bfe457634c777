"""JSON form of representations and morphisms (0-based ray indices).

Vertex keys are sorted index lists rendered as JSON arrays (``"[0,1]"``);
arrow keys are ``"source->target"`` in the direction of the arrow, so a
u-map is keyed ``"[0]->[0,1]"`` and its partner v-map ``"[0,1]->[0]"``.
"""

from __future__ import annotations

import json

from .category import Morphism, Representation
from .fan import Cone, Fan, cone_key
from .linalg import DimensionError, MatQ
from .quiver import build_quiver


class RepresentationFormatError(ValueError):
    """The JSON does not describe a representation of the fan's quiver."""


def vertex_key(I: Cone) -> str:
    return json.dumps([i - 1 for i in I], separators=(",", ":"))


def arrow_key(source: Cone, target: Cone) -> str:
    return f"{vertex_key(source)}->{vertex_key(target)}"


def _parse_cone(text: str) -> Cone:
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        raise RepresentationFormatError(f"bad vertex key {text!r}") from None
    if not isinstance(data, list) or any(isinstance(i, bool) or not isinstance(i, int) for i in data):
        raise RepresentationFormatError(f"bad vertex key {text!r}")
    return tuple(sorted(i + 1 for i in data))


def _parse_arrow(text: str) -> tuple[Cone, Cone]:
    if text.count("->") != 1:
        raise RepresentationFormatError(f"bad arrow key {text!r}")
    a, b = text.split("->")
    return _parse_cone(a), _parse_cone(b)


def _matrix(data, rows: int, cols: int, where: str) -> MatQ:
    try:
        return MatQ.from_json(data, rows, cols)
    except (DimensionError, ValueError, TypeError) as exc:
        raise RepresentationFormatError(f"{where}: {exc}") from None


def rep_from_json(fan: Fan, data) -> Representation:
    """Parse and shape-check against ``fan``; entries missing for zero-size maps default to empty."""
    if not isinstance(data, dict) or "spaces" not in data:
        raise RepresentationFormatError("representation must be an object with a 'spaces' field")
    if data.get("index_base", 0) != 0:
        raise RepresentationFormatError("only index_base 0 is supported")
    for section in ("spaces", "u", "v", "loops"):
        if not isinstance(data.get(section, {}), dict):
            raise RepresentationFormatError(f"'{section}' must be an object")
    q = build_quiver(fan)

    spaces = {}
    for key, d in data["spaces"].items():
        if isinstance(d, bool) or not isinstance(d, int) or d < 0:
            raise RepresentationFormatError(f"space {key} has invalid dimension {d!r}")
        spaces[_parse_cone(key)] = d
    if set(spaces) != set(q.vertices):
        raise RepresentationFormatError("spaces do not match the vertices of the fan's quiver")

    maps = {}
    for kind in ("u", "v"):
        given = {_parse_arrow(k): v for k, v in data.get(kind, {}).items()}
        expected = {(a.source, a.target): a for a in q.arrows if a.kind == kind}
        extra = set(given) - set(expected)
        if extra:
            src, tgt = sorted(extra)[0]
            raise RepresentationFormatError(f"{kind}-map {arrow_key(src, tgt)} is not an arrow of the quiver")
        out = {}
        for (src, tgt), arrow in expected.items():
            rows, cols = spaces[tgt], spaces[src]
            where = f"{kind}-map {arrow_key(src, tgt)}"
            if (src, tgt) in given:
                out[arrow.key[:2]] = _matrix(given[(src, tgt)], rows, cols, where)
            elif rows == 0 or cols == 0:
                out[arrow.key[:2]] = MatQ.zeros(rows, cols)
            else:
                raise RepresentationFormatError(f"{where} is missing")
        maps[kind] = out

    given_loops = {_parse_cone(k): v for k, v in data.get("loops", {}).items()}
    for I, mats in given_loops.items():
        if I not in q.loops:
            raise RepresentationFormatError(f"loops given at unknown vertex {vertex_key(I)}")
        if not isinstance(mats, list) or len(mats) != q.loops[I]:
            raise RepresentationFormatError(f"vertex {vertex_key(I)} needs a list of {q.loops[I]} loop matrices")
    loopmaps = {}
    for I in q.vertices:
        d = spaces[I]
        for i in range(1, q.loops[I] + 1):
            if I in given_loops:
                loopmaps[(I, i)] = _matrix(given_loops[I][i - 1], d, d, f"loop {i} at {vertex_key(I)}")
            elif d == 0:
                loopmaps[(I, i)] = MatQ.zeros(0, 0)
            else:
                raise RepresentationFormatError(f"loops at {vertex_key(I)} are missing")
    return Representation(fan, spaces, maps["u"], maps["v"], loopmaps)


def rep_to_json(rep: Representation) -> dict:
    q = rep.quiver
    u, v = {}, {}
    for a in q.arrows:
        target = u if a.kind == "u" else v
        mats = rep.umaps if a.kind == "u" else rep.vmaps
        target[arrow_key(a.source, a.target)] = mats[a.key[:2]].to_json()
    loops = {}
    for I in q.vertices:
        if q.loops[I]:
            loops[vertex_key(I)] = [rep.loopmaps[(I, i)].to_json() for i in range(1, q.loops[I] + 1)]
    return {
        "index_base": 0,
        "spaces": {vertex_key(I): rep.spaces[I] for I in q.vertices},
        "u": u,
        "v": v,
        "loops": loops,
    }


def morphism_to_json(m: Morphism) -> dict:
    return {
        "index_base": 0,
        "maps": {vertex_key(I): m.maps[I].to_json() for I in sorted(m.maps, key=cone_key)},
    }
