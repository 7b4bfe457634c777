"""The quiver of a fan: a vertex per cone, loops, and u/v arrow pairs."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping

from .fan import Cone, Fan, codim1_pairs, cone_key, l_of


@dataclass(frozen=True, order=True)
class Arrow:
    """``u`` goes from ``source`` to ``source + {ray}``; ``v`` goes back."""

    source: Cone
    target: Cone
    ray: int
    kind: str

    @property
    def key(self) -> tuple[Cone, int, str]:
        # the smaller cone of the pair, whichever way the arrow points
        return (self.source if self.kind == "u" else self.target, self.ray, self.kind)


@dataclass(frozen=True)
class Quiver:
    dim: int
    vertices: tuple[Cone, ...]
    loops: Mapping[Cone, int]
    arrows: tuple[Arrow, ...]

    def arrow_pairs(self) -> list[tuple[Cone, int]]:
        return [(a.source, a.ray) for a in self.arrows if a.kind == "u"]


def build_quiver(fan: Fan) -> Quiver:
    vertices = tuple(sorted(fan.cones, key=cone_key))
    loops = {I: fan.dim - l_of(fan, I) for I in vertices}
    arrows = []
    for small, big in codim1_pairs(fan):
        (p,) = set(big) - set(small)
        arrows.append(Arrow(small, big, p, "u"))
        arrows.append(Arrow(big, small, p, "v"))
    return Quiver(fan.dim, vertices, loops, tuple(arrows))


def _name(cone: Cone) -> str:
    return "[" + ",".join(str(i - 1) for i in cone) + "]"


def export_dot(quiver: Quiver) -> str:
    """DOT digraph with 0-based vertex names; loops are self-edges ``M1``, ``M2``, ..."""
    lines = ["digraph c_Delta {"]
    for I in quiver.vertices:
        lines.append(f'  "{_name(I)}";')
    for I in quiver.vertices:
        for i in range(1, quiver.loops[I] + 1):
            lines.append(f'  "{_name(I)}" -> "{_name(I)}" [label="M{i}"];')
    for a in quiver.arrows:
        lines.append(f'  "{_name(a.source)}" -> "{_name(a.target)}" [label="{a.kind}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def quiver_to_json(quiver: Quiver) -> dict:
    return {
        "index_base": 0,
        "dim": quiver.dim,
        "vertices": [{"cone": [i - 1 for i in I], "loops": quiver.loops[I]} for I in quiver.vertices],
        "arrows": [
            {"from": [i - 1 for i in a.source], "to": [i - 1 for i in a.target], "ray": a.ray - 1, "kind": a.kind}
            for a in quiver.arrows
        ],
    }


def export_json(quiver: Quiver) -> str:
    return json.dumps(quiver_to_json(quiver), indent=2) + "\n"


def parse_json(text: str) -> Quiver:
    data = json.loads(text)
    vertices = tuple(tuple(i + 1 for i in v["cone"]) for v in data["vertices"])
    loops = {tuple(i + 1 for i in v["cone"]): v["loops"] for v in data["vertices"]}
    arrows = tuple(
        Arrow(tuple(i + 1 for i in a["from"]), tuple(i + 1 for i in a["to"]), a["ray"] + 1, a["kind"])
        for a in data["arrows"]
    )
    return Quiver(data["dim"], vertices, loops, arrows)
