"""Representations of the fan quiver and the membership conditions (i)-(iv).

Conventions:

* ``umaps[(I, p)]`` is the map ``E_I -> E_{I+p}``, ``vmaps[(I, p)]`` the map
  ``E_{I+p} -> E_I``; ``loopmaps[(I, i)]`` is the ``i``-th loop (1-based) at ``I``.
* A matrix product ``A @ B`` is the composite "B first, then A".
* The monodromy at ``(I, p)`` is ``v @ u + Id`` on ``E_I``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping

from .fan import Cone, Fan, chart_views, cone_key
from .linalg import (
    MatQ,
    SingularError,
    is_invertible,
    mat_inverse,
    mat_mul,
    mat_pow,
    nullspace,
)
from .quiver import Quiver, build_quiver


class ShapeError(ValueError):
    """A representation does not fit the quiver it is checked against."""


class PrerequisiteFailure(ArithmeticError):
    """A relation word needs the inverse of a singular generator."""

    def __init__(self, generator: Generator):
        self.generator = generator
        super().__init__(f"generator {generator} is singular")


# ---------------------------------------------------------------------------
# Data types


@dataclass(frozen=True)
class Representation:
    fan: Fan
    spaces: Mapping[Cone, int]
    umaps: Mapping[tuple[Cone, int], MatQ]
    vmaps: Mapping[tuple[Cone, int], MatQ]
    loopmaps: Mapping[tuple[Cone, int], MatQ]

    @property
    def quiver(self) -> Quiver:
        q = self.__dict__.get("_quiver")
        if q is None:
            q = build_quiver(self.fan)
            object.__setattr__(self, "_quiver", q)
        return q

    def dimension(self, I: Cone) -> int:
        return self.spaces[I]


@dataclass(frozen=True)
class Failure:
    condition: str  # "i", "ii", "iii", "iv" or "shape"
    location: tuple
    witness: Mapping[str, object] = field(default_factory=dict)
    message: str = ""


@dataclass(frozen=True)
class ConditionReport:
    failures: tuple[Failure, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.failures

    def conditions(self) -> set[str]:
        return {f.condition for f in self.failures}

    def __add__(self, other: ConditionReport) -> ConditionReport:
        return ConditionReport(self.failures + other.failures)


@dataclass(frozen=True, order=True)
class Generator:
    """``M`` is the monodromy at ``(cone, index)``; ``L`` is loop number ``index`` at ``cone``."""

    kind: str
    cone: Cone
    index: int

    def __str__(self) -> str:
        J = ",".join(str(i - 1) for i in self.cone)
        if self.kind == "M":
            return f"M[{J}|{self.index - 1}]"
        return f"L[{J}|{self.index}]"


@dataclass(frozen=True)
class RelationWord:
    """``lhs = rhs[0][0]^e0 * rhs[1][0]^e1 * ...`` read in the chart ``K``."""

    lhs: Generator
    rhs: tuple[tuple[Generator, int], ...]
    K: Cone

    @property
    def J(self) -> Cone:
        return self.lhs.cone

    @property
    def p(self) -> int:
        return self.lhs.index

    def __str__(self) -> str:
        if not self.rhs:
            return f"{self.lhs} = Id"
        return f"{self.lhs} = " + " * ".join(f"{g}^{e}" for g, e in self.rhs)


@dataclass(frozen=True)
class Morphism:
    source: Representation
    target: Representation
    maps: Mapping[Cone, MatQ]


# ---------------------------------------------------------------------------
# Construction and shapes


def constant_object(fan: Fan, d: int) -> Representation:
    """Q^d everywhere, zero arrows, identity loops."""
    if d < 0:
        raise ValueError("dimension must be nonnegative")
    q = build_quiver(fan)
    zero = MatQ.zeros(d, d)
    return Representation(
        fan,
        {I: d for I in q.vertices},
        {(I, p): zero for I, p in q.arrow_pairs()},
        {(I, p): zero for I, p in q.arrow_pairs()},
        {(I, i): MatQ.identity(d) for I in q.vertices for i in range(1, q.loops[I] + 1)},
    )


def _loc(I: Cone) -> list[int]:
    return [i - 1 for i in I]


def check_shapes(rep: Representation, fan: Fan | None = None) -> ConditionReport:
    """Keys must match the quiver exactly and every matrix must have the stated shape."""
    q = build_quiver(fan) if fan is not None else rep.quiver
    failures = []

    def bad(loc, msg):
        failures.append(Failure("shape", loc, {}, msg))

    if set(rep.spaces) != set(q.vertices):
        bad((), "vertex set differs from the quiver")
        return ConditionReport(tuple(failures))
    for I, d in rep.spaces.items():
        if not isinstance(d, int) or isinstance(d, bool) or d < 0:
            bad((I,), f"space at {_loc(I)} has invalid dimension {d!r}")
    pairs = set(q.arrow_pairs())
    for name, maps in (("u", rep.umaps), ("v", rep.vmaps)):
        if set(maps) != pairs:
            bad((), f"{name}-maps do not match the quiver arrows")
            continue
        for (I, p), m in maps.items():
            big = tuple(sorted(I + (p,)))
            want = (rep.spaces[big], rep.spaces[I]) if name == "u" else (rep.spaces[I], rep.spaces[big])
            if m.shape != want:
                bad((name, I, p), f"{name} at ({_loc(I)}, {p - 1}) has shape {m.shape}, expected {want}")
    loops = {(I, i) for I in q.vertices for i in range(1, q.loops[I] + 1)}
    if set(rep.loopmaps) != loops:
        bad((), "loop maps do not match the quiver loops")
    else:
        for (I, i), m in rep.loopmaps.items():
            d = rep.spaces[I]
            if m.shape != (d, d):
                bad(("loop", I, i), f"loop {i} at {_loc(I)} has shape {m.shape}, expected {(d, d)}")
    return ConditionReport(tuple(failures))


# ---------------------------------------------------------------------------
# Conditions


def monodromy(rep: Representation, I: Cone, p: int) -> MatQ:
    u, v = rep.umaps[(I, p)], rep.vmaps[(I, p)]
    prod = mat_mul(v, u)
    if not prod.is_square:
        raise ShapeError(f"v.u at ({_loc(I)}, {p - 1}) is not square")
    return prod + MatQ.identity(prod.rows)


def check_i(rep: Representation) -> ConditionReport:
    failures = []
    for (I, i), m in sorted(rep.loopmaps.items(), key=lambda kv: (cone_key(kv[0][0]), kv[0][1])):
        if not is_invertible(m):
            failures.append(Failure("i", (I, i), {"loop": m}, f"(i) at {_loc(I)}, loop {i}"))
    return ConditionReport(tuple(failures))


def check_ii(rep: Representation) -> ConditionReport:
    failures = []
    for I, p in sorted(rep.umaps, key=lambda k: (cone_key(k[0]), k[1])):
        M = monodromy(rep, I, p)
        if not is_invertible(M):
            failures.append(Failure("ii", (I, p), {"monodromy": M}, f"(ii) at ({_loc(I)}, {p - 1})"))
    return ConditionReport(tuple(failures))


def squares(fan: Fan) -> list[tuple[Cone, int, int]]:
    """All ``(I, p, q)`` with ``p < q`` and ``I + {p, q}`` a cone (so every face is one too)."""
    out = []
    for big in fan.cones:
        for p, q in combinations(big, 2):
            out.append((tuple(i for i in big if i not in (p, q)), p, q))
    out.sort(key=lambda t: (cone_key(t[0]), t[1], t[2]))
    return out


def check_iii(rep: Representation) -> ConditionReport:
    """Commutation on every square ``I, I+p, I+q, I+pq``.

    Identities, as composites of maps:

    1. ``u_{I+p,q} u_{I,p} = u_{I+q,p} u_{I,q}``
    2. ``v_{I,p} v_{I+p,q} = v_{I,q} v_{I+q,p}``
    3. ``v_{I+p,q} u_{I+q,p} = u_{I,p} v_{I,q}`` (E_{I+q} -> E_{I+p})
    4. identity 3 with ``p`` and ``q`` exchanged (E_{I+p} -> E_{I+q})
    """
    failures = []
    u, v = rep.umaps, rep.vmaps

    def add(I, *rays):
        return tuple(sorted(I + rays))

    for I, p, q in squares(rep.fan):
        Ip, Iq = add(I, p), add(I, q)
        sides = [
            (mat_mul(u[(Ip, q)], u[(I, p)]), mat_mul(u[(Iq, p)], u[(I, q)])),
            (mat_mul(v[(I, p)], v[(Ip, q)]), mat_mul(v[(I, q)], v[(Iq, p)])),
            (mat_mul(v[(Ip, q)], u[(Iq, p)]), mat_mul(u[(I, p)], v[(I, q)])),
            (mat_mul(v[(Iq, p)], u[(Ip, q)]), mat_mul(u[(I, q)], v[(I, p)])),
        ]
        for n, (lhs, rhs) in enumerate(sides, 1):
            if lhs != rhs:
                failures.append(Failure(
                    "iii", (I, p, q, n), {"lhs": lhs, "rhs": rhs},
                    f"(iii) identity {n} at ({_loc(I)}, {p - 1}, {q - 1})",
                ))
    return ConditionReport(tuple(failures))


def relations(fan: Fan) -> list[RelationWord]:
    """The monodromy relations, one per chart ``(J, p, K)``, in canonical order."""
    words = []
    for J in sorted(fan.cones, key=cone_key):
        for p in range(1, fan.k + 1):
            if p in J or tuple(sorted(J + (p,))) not in fan:
                continue
            for view in chart_views(fan, J, p):
                rhs = []
                for col in range(view.j, fan.dim):
                    e = view.coords[col]
                    if e == 0:
                        continue
                    if col < view.l:
                        rhs.append((Generator("M", J, view.columns[col]), e))
                    else:
                        rhs.append((Generator("L", J, col - view.l + 1), e))
                words.append(RelationWord(Generator("M", J, p), tuple(rhs), view.K))
    return words


def generator_matrix(rep: Representation, g: Generator) -> MatQ:
    if g.kind == "M":
        return monodromy(rep, g.cone, g.index)
    return rep.loopmaps[(g.cone, g.index)]


def evaluate_word(rep: Representation, word: RelationWord) -> MatQ:
    """Product of the right-hand side, leftmost factor outermost."""
    d = rep.spaces[word.J]
    mats = {}
    for g, _ in word.rhs:
        if g not in mats:
            m = generator_matrix(rep, g)
            if not is_invertible(m):
                raise PrerequisiteFailure(g)
            mats[g] = m
    result = MatQ.identity(d)
    for g, e in word.rhs:
        result = mat_mul(result, mat_pow(mats[g], e))
    return result


def check_iv(rep: Representation) -> ConditionReport:
    failures = []
    for word in relations(rep.fan):
        loc = (word.J, word.p, word.K)
        where = f"({_loc(word.J)}, {word.p - 1}, K={_loc(word.K)})"
        try:
            rhs = evaluate_word(rep, word)
        except PrerequisiteFailure as exc:
            failures.append(Failure(
                "iv", loc, {"prerequisite": str(exc.generator)},
                f"(iv) at {where}: prerequisite failure, {exc.generator} is singular",
            ))
            continue
        lhs = monodromy(rep, word.J, word.p)
        if lhs != rhs:
            failures.append(Failure("iv", loc, {"lhs": lhs, "rhs": rhs}, f"(iv) at {where}"))
    return ConditionReport(tuple(failures))


def check_all(rep: Representation, fan: Fan | None = None) -> ConditionReport:
    """Shapes first; conditions (i)-(iv) only when the shapes are right."""
    shapes = check_shapes(rep, fan)
    if not shapes.passed:
        return shapes
    return check_i(rep) + check_ii(rep) + check_iii(rep) + check_iv(rep)


# ---------------------------------------------------------------------------
# Morphisms


def is_morphism(m: Morphism) -> bool:
    a, b = m.source, m.target
    phi = m.maps
    for I in a.spaces:
        if phi[I].shape != (b.spaces[I], a.spaces[I]):
            raise ShapeError(f"map at {_loc(I)} has shape {phi[I].shape}")
    for (I, p), u in a.umaps.items():
        big = tuple(sorted(I + (p,)))
        if mat_mul(phi[big], u) != mat_mul(b.umaps[(I, p)], phi[I]):
            return False
        if mat_mul(phi[I], a.vmaps[(I, p)]) != mat_mul(b.vmaps[(I, p)], phi[big]):
            return False
    for (I, i), L in a.loopmaps.items():
        if mat_mul(phi[I], L) != mat_mul(b.loopmaps[(I, i)], phi[I]):
            return False
    return True


def hom_dim(a: Representation, b: Representation) -> tuple[int, list[Morphism]]:
    """Dimension and a basis of the space of morphisms ``a -> b``.

    Unknowns are the entries of every vertex map; each commutation square
    contributes one linear equation per entry, and the kernel of the whole
    system is the Hom space.
    """
    vertices = sorted(a.spaces, key=cone_key)
    offset, n = {}, 0
    for I in vertices:
        offset[I] = n
        n += b.spaces[I] * a.spaces[I]

    def var(I, r, c):  # entry (r, c) of the map at I
        return offset[I] + r * a.spaces[I] + c

    rows: list[dict[int, object]] = []

    def square(left_I, left_mat, right_mat, right_I):
        # phi[left_I] @ left_mat - right_mat @ phi[right_I] = 0
        out_rows, out_cols = b.spaces[left_I], left_mat.cols
        for r in range(out_rows):
            for c in range(out_cols):
                eq: dict[int, object] = {}
                for k in range(left_mat.rows):
                    x = left_mat[k, c]
                    if x:
                        key = var(left_I, r, k)
                        eq[key] = eq.get(key, 0) + x
                for k in range(right_mat.cols):
                    x = right_mat[r, k]
                    if x:
                        key = var(right_I, k, c)
                        eq[key] = eq.get(key, 0) - x
                rows.append(eq)

    for (I, p), u in a.umaps.items():
        big = tuple(sorted(I + (p,)))
        square(big, u, b.umaps[(I, p)], I)
        square(I, a.vmaps[(I, p)], b.vmaps[(I, p)], big)
    for (I, i), L in a.loopmaps.items():
        square(I, L, b.loopmaps[(I, i)], I)

    system = MatQ(len(rows), n, [eq.get(j, 0) for eq in rows for j in range(n)])
    dim, basis = nullspace(system)
    morphisms = []
    for vec in basis:
        maps = {}
        for I in vertices:
            dr, dc = b.spaces[I], a.spaces[I]
            maps[I] = MatQ(dr, dc, vec.entries[offset[I]:offset[I] + dr * dc])
        morphisms.append(Morphism(a, b, maps))
    return dim, morphisms


def conjugate(rep: Representation, P: Mapping[Cone, MatQ]) -> Representation:
    """Transport ``rep`` along invertible vertex maps ``P``."""
    inv = {I: mat_inverse(m) for I, m in P.items()}
    um, vm = {}, {}
    for (I, p), u in rep.umaps.items():
        big = tuple(sorted(I + (p,)))
        um[(I, p)] = mat_mul(mat_mul(P[big], u), inv[I])
        vm[(I, p)] = mat_mul(mat_mul(P[I], rep.vmaps[(I, p)]), inv[big])
    loops = {(I, i): mat_mul(mat_mul(P[I], L), inv[I]) for (I, i), L in rep.loopmaps.items()}
    return Representation(rep.fan, dict(rep.spaces), um, vm, loops)


__all__ = [
    "ConditionReport", "Failure", "Generator", "Morphism", "PrerequisiteFailure", "RelationWord",
    "Representation", "ShapeError", "SingularError", "check_all", "check_i", "check_ii", "check_iii",
    "check_iv", "check_shapes", "conjugate", "constant_object", "evaluate_word", "generator_matrix",
    "hom_dim", "is_morphism", "monodromy", "relations", "squares",
]
