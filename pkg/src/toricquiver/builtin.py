"""Named example fans: affine spaces, tori, the projective line and plane."""

from __future__ import annotations

import re

from .fan import Fan, fan_from_json


def _unit(i: int, n: int) -> list[int]:
    return [1 if j == i else 0 for j in range(n)]


def cn(n: int) -> dict:
    return {"dim": n, "rays": [_unit(i, n) for i in range(n)], "max_cones": [list(range(n))]}


def cstar(l: int, n: int) -> dict:
    """C^l x (C*)^(n-l): the first l standard rays spanning one cone."""
    if not 0 <= l <= n or n < 1:
        raise ValueError(f"need 0 <= l <= n and n >= 1, got l={l}, n={n}")
    return {"dim": n, "rays": [_unit(i, n) for i in range(l)], "max_cones": [list(range(l))]}


P1 = {"dim": 1, "rays": [[1], [-1]], "max_cones": [[0], [1]]}
P2 = {"dim": 2, "rays": [[1, 0], [0, 1], [-1, -1]], "max_cones": [[0, 1], [0, 2], [1, 2]]}
# one 2-cone plus an isolated ray
FAN1 = {"dim": 2, "rays": [[1, 0], [0, 1], [-1, -1]], "max_cones": [[0, 1], [2]]}

NAMES = ("cn:<n>", "cstar:<l>,<n>", "p1", "p2", "fan1")


def example_json(name: str) -> dict:
    """Fan JSON (0-based) for a built-in name; raises KeyError for unknown names."""
    name = name.strip().lower()
    if name == "p1":
        data = P1
    elif name == "p2":
        data = P2
    elif name == "fan1":
        data = FAN1
    elif m := re.fullmatch(r"cn:(\d+)", name):
        n = int(m.group(1))
        if n < 1:
            raise KeyError(name)
        data = cn(n)
    elif m := re.fullmatch(r"cstar:(\d+),(\d+)", name):
        try:
            data = cstar(int(m.group(1)), int(m.group(2)))
        except ValueError:
            raise KeyError(name) from None
    else:
        raise KeyError(name)
    return {"index_base": 0, **data}


def example_fan(name: str) -> Fan:
    return fan_from_json(example_json(name))


# used by tests and the acceptance suite
STANDARD = ("cn:1", "cn:2", "cn:3", "cstar:1,2", "cstar:0,2", "p1", "p2", "fan1")
