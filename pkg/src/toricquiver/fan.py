"""Regular fans and the chart data attached to their maximal cones.

Rays are numbered from 1 inside the library. A cone is stored as the sorted
tuple of its ray indices; the empty tuple is the zero cone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .linalg import (
    MatQ,
    MatZ,
    det,
    hnf,
    is_primitive,
    mat_mul,
    nullspace,
    snf_diagonal,
    solve,
    unimodular_inverse,
)

Cone = tuple[int, ...]


def cone_key(cone: Sequence[int]) -> tuple:
    """Sort key: by size, then lexicographically."""
    return (len(cone), tuple(cone))


# ---------------------------------------------------------------------------
# Errors


class FanFormatError(ValueError):
    """Fan data is structurally malformed (bad shapes, unknown indices)."""


class ValidationError(ValueError):
    """The data describes something that is not a regular fan."""

    kind = "ValidationError"

    def to_json(self) -> dict:
        return {"error": self.kind, "message": str(self)}


class NonPrimitiveRay(ValidationError):
    kind = "NonPrimitiveRay"

    def __init__(self, index: int, ray: Sequence[int]):
        self.index, self.ray = index, tuple(ray)
        super().__init__(f"ray {index - 1} = {list(ray)} is not primitive")

    def to_json(self):
        return {**super().to_json(), "ray": self.index - 1}


class DuplicateRay(ValidationError):
    kind = "DuplicateRay"

    def __init__(self, first: int, second: int):
        self.first, self.second = first, second
        super().__init__(f"rays {first - 1} and {second - 1} are equal")

    def to_json(self):
        return {**super().to_json(), "rays": [self.first - 1, self.second - 1]}


class NonSmoothCone(ValidationError):
    kind = "NonSmoothCone"

    def __init__(self, cone: Cone, diagonal: Sequence[int]):
        self.cone, self.diagonal = tuple(cone), tuple(diagonal)
        super().__init__(
            f"cone {[i - 1 for i in cone]} is not smooth (Smith diagonal {list(diagonal)})"
        )

    def to_json(self):
        return {**super().to_json(), "cone": [i - 1 for i in self.cone], "snf_diagonal": list(self.diagonal)}


class FanAxiomViolation(ValidationError):
    kind = "FanAxiomViolation"

    def __init__(self, first: Cone, second: Cone):
        self.first, self.second = tuple(first), tuple(second)
        super().__init__(
            f"cones {[i - 1 for i in first]} and {[i - 1 for i in second]} do not meet in a common face"
        )

    def to_json(self):
        return {**super().to_json(), "cones": [[i - 1 for i in self.first], [i - 1 for i in self.second]]}


# ---------------------------------------------------------------------------
# Data types


@dataclass(frozen=True)
class ChartBasis:
    """A Z-basis of the lattice whose leading columns are the rays of a maximal cone."""

    K: Cone
    basis: MatZ
    ray_positions: Mapping[int, int]


@dataclass(frozen=True)
class ChartView:
    """The basis of chart ``K`` reordered for the pair ``(J, p)``, and the coordinates of ray ``p`` in it.

    Columns ``0..j-1`` are the rays of ``J``, columns ``j..l-1`` the rays of
    ``K - J`` (both in increasing index order), the rest complete the basis.
    """

    J: Cone
    p: int
    K: Cone
    ordered_basis: MatZ
    j: int
    l: int
    coords: tuple[int, ...]
    columns: tuple[int | None, ...]  # ray index per column, None for completion columns


@dataclass(frozen=True)
class Fan:
    dim: int
    rays: tuple[tuple[int, ...], ...]
    cones: tuple[Cone, ...]
    trusted: bool = False
    bases: Mapping[Cone, ChartBasis] = field(default_factory=dict, compare=False, repr=False)

    @property
    def k(self) -> int:
        return len(self.rays)

    def ray(self, i: int) -> tuple[int, ...]:
        if not 1 <= i <= len(self.rays):
            raise KeyError(f"unknown ray index {i}")
        return self.rays[i - 1]

    def ray_matrix(self, cone: Iterable[int]) -> MatZ:
        """The n x |cone| matrix whose columns are the rays of ``cone``."""
        return MatZ.from_columns([self.ray(i) for i in cone], rows=self.dim)

    def __contains__(self, cone) -> bool:
        return tuple(sorted(cone)) in self._cone_set

    @property
    def _cone_set(self) -> frozenset:
        cached = self.__dict__.get("_cones_frozen")
        if cached is None:
            cached = frozenset(self.cones)
            object.__setattr__(self, "_cones_frozen", cached)
        return cached


def downward_closure(sets: Iterable[Iterable[int]]) -> tuple[Cone, ...]:
    out = {()}
    for s in sets:
        s = tuple(sorted(set(s)))
        for r in range(len(s) + 1):
            out.update(combinations(s, r))
    return tuple(sorted(out, key=cone_key))


# ---------------------------------------------------------------------------
# Cone geometry


def is_smooth_cone(fan: Fan, cone: Iterable[int]) -> bool:
    """True iff the rays of ``cone`` extend to a basis of Z^n."""
    cone = tuple(cone)
    if len(cone) > fan.dim:
        return False
    if not cone:
        return True
    return all(d == 1 for d in snf_diagonal(fan.ray_matrix(cone)))


def _in_cone(fan: Fan, vector: Sequence[int], cone: Cone) -> bool:
    # cone is simplicial, so the coefficients are unique when they exist
    if not cone:
        return all(x == 0 for x in vector)
    x = solve(fan.ray_matrix(cone), MatZ(fan.dim, 1, vector))
    return x is not None and all(c >= 0 for c in x.entries)


def _fm_feasible(rows: list[tuple[tuple[Fraction, ...], Fraction]]) -> bool:
    """Fourier-Motzkin test: is there t with ``a . t + b >= 0`` for every row ``(a, b)``?"""
    nvars = len(rows[0][0]) if rows else 0
    for x in range(nvars):
        pos, neg, rest = [], [], []
        for a, b in rows:
            (pos if a[x] > 0 else neg if a[x] < 0 else rest).append((a, b))
        new = set(rest)
        for ap, bp in pos:
            for an, bn in neg:
                cp, cn = -an[x], ap[x]
                a = tuple(cp * s + cn * t for s, t in zip(ap, an))
                new.add(_normalize_row(a, cp * bp + cn * bn))
        rows = list(new)
    return all(b >= 0 for _, b in rows)


def _normalize_row(a: tuple, b) -> tuple:
    scale = next((abs(c) for c in a if c != 0), None) or abs(b) or 1
    return tuple(c / scale for c in a), b / scale


def _cones_meet_outside_common_face(fan: Fan, I: Cone, J: Cone) -> bool:
    """Exact test for a point of cone(I) and cone(J) that is not in cone(I & J).

    Writes such a point both ways, ``sum a_i v_i = sum b_j v_j`` with
    ``a, b >= 0``; by simpliciality it lies outside the common face iff some
    coefficient on ``I - J`` or ``J - I`` is positive. Normalizing that mass
    to 1 leaves a linear feasibility problem, solved by Fourier-Motzkin over
    a parametrization of the kernel.
    """
    columns = [fan.ray(i) for i in I] + [tuple(-x for x in fan.ray(j)) for j in J]
    if not columns:
        return False
    dim, basis = nullspace(MatZ.from_columns(columns, rows=fan.dim))
    if dim == 0:
        return False
    # coefficient (a_i or b_j) = row of N times t
    N = [[b[r, 0] for b in basis] for r in range(len(columns))]
    outside = [r for r, i in enumerate(I) if i not in J]
    outside += [len(I) + r for r, j in enumerate(J) if j not in I]
    mass = [sum((N[r][c] for r in outside), Fraction(0)) for c in range(dim)]
    k = next((c for c in range(dim) if mass[c] != 0), None)
    if k is None:
        return False
    # substitute t_k = (1 - sum_{c != k} mass_c t_c) / mass_k
    rows = []
    for coeffs in N:
        a = tuple(coeffs[c] - coeffs[k] * mass[c] / mass[k] for c in range(dim) if c != k)
        rows.append(_normalize_row(a, coeffs[k] / mass[k]))
    return _fm_feasible(rows)


def check_fan_axiom(fan: Fan, I: Iterable[int], J: Iterable[int]) -> bool:
    """True iff cone(I) and cone(J) intersect exactly in cone(I & J).

    The Fourier-Motzkin stage is skipped for fans loaded with ``trust_fan``.
    """
    I, J = tuple(sorted(I)), tuple(sorted(J))
    if any(_in_cone(fan, fan.ray(i), J) for i in I if i not in J):
        return False
    if any(_in_cone(fan, fan.ray(j), I) for j in J if j not in I):
        return False
    if fan.trusted:
        return True
    return not _cones_meet_outside_common_face(fan, I, J)


# ---------------------------------------------------------------------------
# Loading


def _check_structure(dim, rays, maximal_cones) -> None:
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise FanFormatError(f"dimension must be a positive integer, got {dim!r}")
    for i, ray in enumerate(rays):
        if len(ray) != dim or any(isinstance(x, bool) or not isinstance(x, int) for x in ray):
            raise FanFormatError(f"ray {i} must be a list of {dim} integers")
    for cone in maximal_cones:
        for i in cone:
            if isinstance(i, bool) or not isinstance(i, int) or not 1 <= i <= len(rays):
                raise FanFormatError(f"unknown ray index in cone {list(cone)}")


def fan_problems(dim: int, rays, maximal_cones, *, trust_fan: bool = False) -> list[ValidationError]:
    """Every reason the data fails to be a regular fan (empty when valid)."""
    rays = tuple(tuple(r) for r in rays)
    maximal_cones = [tuple(c) for c in maximal_cones]
    _check_structure(dim, rays, maximal_cones)
    problems: list[ValidationError] = []
    seen: dict[tuple, int] = {}
    for i, ray in enumerate(rays, 1):
        if ray in seen:
            problems.append(DuplicateRay(seen[ray], i))
        seen.setdefault(ray, i)
        if not is_primitive(ray):
            problems.append(NonPrimitiveRay(i, ray))
    if problems:
        return problems

    raw = Fan(dim, rays, downward_closure(maximal_cones), trusted=trust_fan)
    tops = maximal_cones_of(raw)
    for K in tops:
        if len(K) > dim:
            problems.append(NonSmoothCone(K, ()))
        elif not is_smooth_cone(raw, K):
            problems.append(NonSmoothCone(K, snf_diagonal(raw.ray_matrix(K))))
    if problems:
        return problems
    # for simplicial cones, checking maximal pairs covers all faces
    for K, L in combinations(tops, 2):
        if not check_fan_axiom(raw, K, L):
            problems.append(FanAxiomViolation(K, L))
    return problems


def load_fan(dim: int, rays, maximal_cones, *, trust_fan: bool = False) -> Fan:
    """Build and validate a regular fan from 1-based maximal cone index sets.

    The cone family is the downward closure of ``maximal_cones`` (it always
    contains the zero cone). Raises the first :class:`ValidationError` found.
    """
    problems = fan_problems(dim, rays, maximal_cones, trust_fan=trust_fan)
    if problems:
        raise problems[0]
    fan = Fan(dim, tuple(tuple(r) for r in rays), downward_closure(maximal_cones), trusted=trust_fan)
    object.__setattr__(fan, "bases", {K: extend_to_basis(fan, K) for K in maximal_cones_of(fan)})
    return fan


# ---------------------------------------------------------------------------
# Combinatorics


def maximal_cones_of(fan: Fan) -> list[Cone]:
    sets = [frozenset(c) for c in fan.cones]
    return [c for c, s in zip(fan.cones, sets) if not any(s < t for t in sets)]


maximal_cones = maximal_cones_of


def l_of(fan: Fan, I: Iterable[int]) -> int:
    """Largest size of a maximal cone containing ``I``."""
    I = set(I)
    return max(len(K) for K in maximal_cones_of(fan) if I <= set(K))


def codim1_pairs(fan: Fan) -> list[tuple[Cone, Cone]]:
    """All ``(I, I + {p})`` with both cones in the fan, sorted by ``I`` then ``p``."""
    pairs = []
    for big in fan.cones:
        for p in big:
            pairs.append((tuple(i for i in big if i != p), big))
    pairs.sort(key=lambda pr: (cone_key(pr[0]), _added_ray(pr)))
    return pairs


def _added_ray(pair: tuple[Cone, Cone]) -> int:
    (p,) = set(pair[1]) - set(pair[0])
    return p


def extend_to_basis(fan: Fan, K: Iterable[int]) -> ChartBasis:
    """Complete the rays of ``K`` (increasing index order) to a unimodular matrix.

    With ``A`` the ray matrix and ``U A = H`` its row Hermite form, smoothness
    forces ``H = [I; 0]``, so ``U^-1`` starts with the columns of ``A``; its
    remaining columns are the completion.
    """
    K = tuple(sorted(K))
    A = fan.ray_matrix(K)
    h, u = hnf(A)
    expected = MatZ.from_rows(
        [[1 if i == j else 0 for j in range(len(K))] for i in range(fan.dim)], cols=len(K)
    )
    if h != expected:
        raise NonSmoothCone(K, snf_diagonal(A))
    basis = unimodular_inverse(u)
    return ChartBasis(K, basis, {i: pos for pos, i in enumerate(K)})


def chart_basis(fan: Fan, K: Cone) -> ChartBasis:
    cb = fan.bases.get(K)
    return cb if cb is not None else extend_to_basis(fan, K)


def chart_views(fan: Fan, J: Iterable[int], p: int) -> list[ChartView]:
    """One view per maximal ``K`` with ``J <= K``, ``p`` not in ``K`` and ``|K| = l_of(J)``."""
    J = tuple(sorted(J))
    if J not in fan or p in J or tuple(sorted(J + (p,))) not in fan:
        raise ValueError(f"({list(J)}, {p}) is not an arrow of the fan")
    target = l_of(fan, J)
    views = []
    for K in maximal_cones_of(fan):
        if not set(J) <= set(K) or p in K or len(K) != target:
            continue
        cb = chart_basis(fan, K)
        order = list(J) + [i for i in K if i not in J]
        cols = [cb.ray_positions[i] for i in order] + list(range(len(K), fan.dim))
        ordered = cb.basis.submatrix(range(fan.dim), cols)
        coords = mat_mul(unimodular_inverse(ordered), MatZ(fan.dim, 1, fan.ray(p)))
        views.append(ChartView(
            J=J,
            p=p,
            K=K,
            ordered_basis=ordered,
            j=len(J),
            l=len(K),
            coords=coords.entries,
            columns=tuple(order) + (None,) * (fan.dim - len(K)),
        ))
    views.sort(key=lambda v: cone_key(v.K))
    return views


def is_unimodular(m: MatZ) -> bool:
    return m.is_square and abs(det(m)) == 1


# ---------------------------------------------------------------------------
# Serialization (0-based indices)


def fan_from_json(data, *, trust_fan: bool = False) -> Fan:
    if not isinstance(data, dict):
        raise FanFormatError("fan must be a JSON object")
    missing = {"dim", "rays", "max_cones"} - data.keys()
    if missing:
        raise FanFormatError(f"missing fields: {sorted(missing)}")
    if data.get("index_base", 0) != 0:
        raise FanFormatError("only index_base 0 is supported")
    rays, cones = data["rays"], data["max_cones"]
    if not isinstance(rays, list) or not all(isinstance(r, list) for r in rays):
        raise FanFormatError("rays must be an array of integer arrays")
    if not isinstance(cones, list) or not all(isinstance(c, list) for c in cones):
        raise FanFormatError("max_cones must be an array of index arrays")
    for c in cones:
        if any(isinstance(i, bool) or not isinstance(i, int) for i in c):
            raise FanFormatError(f"cone indices must be integers: {c}")
    return load_fan(data["dim"], rays, [[i + 1 for i in c] for c in cones], trust_fan=trust_fan)


def fan_to_json(fan: Fan) -> dict:
    return {
        "index_base": 0,
        "dim": fan.dim,
        "rays": [list(r) for r in fan.rays],
        "max_cones": [[i - 1 for i in K] for K in maximal_cones_of(fan)],
    }


def fan_info(fan: Fan) -> dict:
    """Summary including the chosen chart bases (as column lists)."""
    tops = maximal_cones_of(fan)
    return {
        "index_base": 0,
        "dim": fan.dim,
        "rays": [list(r) for r in fan.rays],
        "cones": [[i - 1 for i in c] for c in fan.cones],
        "max_cones": [[i - 1 for i in K] for K in tops],
        "trust_fan": fan.trusted,
        "bases": [
            {"cone": [i - 1 for i in K], "columns": [list(chart_basis(fan, K).basis.col(j)) for j in range(fan.dim)]}
            for K in tops
        ],
    }
