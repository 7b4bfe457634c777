import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toricquiver.builtin import STANDARD, example_fan, example_json
from toricquiver.fan import (
    DuplicateRay,
    Fan,
    FanAxiomViolation,
    FanFormatError,
    NonPrimitiveRay,
    NonSmoothCone,
    chart_basis,
    chart_views,
    check_fan_axiom,
    codim1_pairs,
    downward_closure,
    extend_to_basis,
    fan_from_json,
    fan_info,
    fan_problems,
    is_smooth_cone,
    is_unimodular,
    l_of,
    load_fan,
    maximal_cones,
)
from toricquiver.linalg import MatZ, det, mat_mul
from toricquiver.quiver import build_quiver

P2_RAYS = [(1, 0), (0, 1), (-1, -1)]


def raw_fan(dim, rays, tops):
    return Fan(dim, tuple(map(tuple, rays)), downward_closure(tops))


# -- loading -----------------------------------------------------------------

def test_load_p2():
    fan = load_fan(2, P2_RAYS, [(1, 2), (1, 3), (2, 3)])
    assert len(fan.cones) == 7
    assert () in fan and (1, 3) in fan and (1, 2, 3) not in fan


def test_load_fan1():
    fan = load_fan(2, P2_RAYS, [(1, 2), (3,)])
    assert sorted(fan.cones) == sorted([(), (1,), (2,), (3,), (1, 2)])


def test_non_smooth_cone_witness():
    with pytest.raises(NonSmoothCone) as exc:
        load_fan(2, [(1, 0), (1, 2)], [(1, 2)])
    assert exc.value.cone == (1, 2)
    assert exc.value.diagonal == (1, 2)


def test_non_primitive_and_duplicate():
    with pytest.raises(NonPrimitiveRay):
        load_fan(2, [(2, 0), (0, 1)], [(1, 2)])
    with pytest.raises(NonPrimitiveRay):
        load_fan(2, [(0, 0)], [(1,)])
    with pytest.raises(DuplicateRay):
        load_fan(2, [(1, 0), (1, 0)], [(1,), (2,)])


def test_fan_axiom_violation_on_load():
    with pytest.raises(FanAxiomViolation):
        load_fan(2, [(1, 0), (0, 1), (1, 1)], [(1, 2), (3,)])


@pytest.mark.parametrize("dim, rays, tops", [
    (1, [(1,)], [(2,)]),
    (2, [(1, 0, 0)], [(1,)]),
    (0, [], []),
    (2, [(1, 0)], [(0,)]),
])
def test_structural_errors(dim, rays, tops):
    with pytest.raises(FanFormatError):
        load_fan(dim, rays, tops)


# -- smoothness ----------------------------------------------------------------

def test_is_smooth_cone_examples():
    fan = raw_fan(2, [(1, 0), (0, 1), (1, 2), (-1, -1)], [(1, 2)])
    assert is_smooth_cone(fan, (1, 2))
    assert not is_smooth_cone(fan, (1, 3))
    assert is_smooth_cone(fan, (4,))
    assert is_smooth_cone(fan, ())
    with pytest.raises(KeyError):
        is_smooth_cone(fan, (9,))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(-6, 6), min_size=4, max_size=4))
def test_smoothness_matches_det_in_rank_two(xs):
    a, b = (xs[0], xs[1]), (xs[2], xs[3])
    fan = raw_fan(2, [a, b], [])
    # brute force oracle: two vectors in Z^2 form a basis iff |det| = 1
    assert is_smooth_cone(fan, (1, 2)) == (abs(a[0] * b[1] - a[1] * b[0]) == 1)


# -- fan axiom ------------------------------------------------------------------

def test_fan_axiom_examples(p2):
    assert check_fan_axiom(p2, (1, 2), (2, 3))
    bad = raw_fan(2, [(1, 0), (0, 1), (1, 1)], [(1, 2), (3,)])
    assert not check_fan_axiom(bad, (1, 2), (3,))
    for I in p2.cones:
        assert check_fan_axiom(p2, I, I)


def test_crossing_cones_need_fourier_motzkin():
    # two smooth 2-cones in Z^3 crossing along the ray (1,1,0); neither contains a ray of the other
    rays = [(1, 0, 0), (0, 1, 0), (1, 0, 1), (0, 1, -1)]
    fan = raw_fan(3, rays, [(1, 2), (3, 4)])
    assert not check_fan_axiom(fan, (1, 2), (3, 4))
    with pytest.raises(FanAxiomViolation):
        load_fan(3, rays, [(1, 2), (3, 4)])
    # the ray-containment stage alone does not see it
    trusted = load_fan(3, rays, [(1, 2), (3, 4)], trust_fan=True)
    assert trusted.trusted
    assert fan_info(trusted)["trust_fan"] is True


def test_shared_face_in_three_dimensions():
    rays = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (0, 0, -1)]
    fan = load_fan(3, rays, [(1, 2, 3), (1, 2, 4)])
    assert check_fan_axiom(fan, (1, 2, 3), (1, 2, 4))


# -- combinatorics ------------------------------------------------------------

def test_maximal_cones(p2, fan1):
    assert sorted(maximal_cones(p2)) == [(1, 2), (1, 3), (2, 3)]
    assert maximal_cones(example_fan("cn:4")) == [(1, 2, 3, 4)]
    assert sorted(maximal_cones(fan1)) == [(1, 2), (3,)]


def test_l_of(p2, fan1):
    assert l_of(fan1, ()) == 2
    assert l_of(fan1, (3,)) == 1
    assert l_of(fan1, (1,)) == 2
    assert all(l_of(p2, I) == 2 for I in p2.cones)


def test_codim1_pairs(p1, p2):
    c2 = example_fan("cn:2")
    assert codim1_pairs(c2) == [((), (1,)), ((), (2,)), ((1,), (1, 2)), ((2,), (1, 2))]
    assert len(codim1_pairs(p2)) == 9
    assert len(codim1_pairs(p1)) == 2


# -- chart bases ------------------------------------------------------------

def test_extend_to_basis_examples(p2, fan1):
    assert chart_basis(p2, (1, 2)).basis == MatZ.identity(2)
    cb = extend_to_basis(fan1, (3,))
    assert abs(det(cb.basis)) == 1
    assert cb.basis.col(0) == (-1, -1)
    assert extend_to_basis(example_fan("cn:3"), (1, 2, 3)).basis == MatZ.identity(3)


@pytest.mark.parametrize("name", STANDARD)
def test_chart_bases_are_unimodular(name):
    fan = example_fan(name)
    for K in maximal_cones(fan):
        cb = chart_basis(fan, K)
        assert is_unimodular(cb.basis)
        for i, pos in cb.ray_positions.items():
            assert cb.basis.col(pos) == fan.ray(i)


def test_chart_views_p2(p2):
    (view,) = chart_views(p2, (), 3)
    assert view.K == (1, 2) and view.j == 0 and view.l == 2
    assert view.ordered_basis == MatZ.identity(2)
    assert view.coords == (-1, -1)
    (view,) = chart_views(p2, (1,), 3)
    assert view.K == (1, 2) and view.j == 1 and view.l == 2
    assert view.coords == (-1, -1)


def test_chart_views_empty_for_affine_space():
    fan = example_fan("cn:3")
    for J in fan.cones:
        for p in range(1, 4):
            if p not in J:
                assert chart_views(fan, J, p) == []


def test_chart_views_precondition(p2):
    with pytest.raises(ValueError):
        chart_views(p2, (1, 2), 3)
    with pytest.raises(ValueError):
        chart_views(p2, (1,), 1)


@pytest.mark.parametrize("name", STANDARD + ("cstar:2,3",))
def test_chart_view_invariants(name):
    fan = example_fan(name)
    for J in fan.cones:
        for p in range(1, fan.k + 1):
            if p in J or tuple(sorted(J + (p,))) not in fan:
                continue
            for view in chart_views(fan, J, p):
                x = mat_mul(view.ordered_basis, MatZ(fan.dim, 1, view.coords))
                assert x.entries == fan.ray(p)
                for c in range(view.j):
                    assert view.ordered_basis.col(c) == fan.ray(J[c])
                for c in range(view.j, view.l):
                    assert view.columns[c] in view.K and view.columns[c] not in J
                assert is_unimodular(view.ordered_basis)


def test_hirzebruch_chart_coordinates():
    # F_1: rays e1, e2, -e1 + e2, -e2
    fan = load_fan(2, [(1, 0), (0, 1), (-1, 1), (0, -1)], [(1, 2), (2, 3), (3, 4), (1, 4)])
    # two charts avoid ray 3; solved by hand in the bases (e1, e2) and (e1, -e2)
    views = {v.K: v.coords for v in chart_views(fan, (), 3)}
    assert views == {(1, 2): (-1, 1), (1, 4): (-1, -1)}


# -- permutation stability -----------------------------------------------------

def _quiver_signature(fan, relabel):
    q = build_quiver(fan)
    verts = {frozenset(relabel[i] for i in I): q.loops[I] for I in q.vertices}
    arrows = sorted((tuple(sorted(relabel[i] for i in a.source)), tuple(sorted(relabel[i] for i in a.target)),
                     relabel[a.ray], a.kind) for a in q.arrows)
    return verts, arrows


@pytest.mark.parametrize("name", ["p2", "fan1", "cn:3", "p1"])
def test_permutation_stable(name):
    data = example_json(name)
    fan = fan_from_json(data)
    k = len(data["rays"])
    rng = random.Random(7)
    for _ in range(4):
        perm = list(range(k))
        rng.shuffle(perm)  # new position of old ray i is perm[i]
        rays = [None] * k
        for old, new in enumerate(perm):
            rays[new] = data["rays"][old]
        cones = [[perm[i] for i in c] for c in data["max_cones"]]
        other = fan_from_json({"dim": data["dim"], "rays": rays, "max_cones": cones})
        ident = {i: i for i in range(1, k + 1)}
        back = {perm[old] + 1: old + 1 for old in range(k)}
        assert _quiver_signature(fan, ident) == _quiver_signature(other, back)


def test_fan_problems_collects_all():
    problems = fan_problems(2, [(1, 0), (0, 1), (1, 2), (2, 1)], [(1, 3), (2, 4)])
    assert [type(p) for p in problems] == [NonSmoothCone, NonSmoothCone]


def test_fan_info_round_trip(p2):
    info = fan_info(p2)
    assert info["index_base"] == 0
    assert info["max_cones"] == [[0, 1], [0, 2], [1, 2]]
    assert len(info["bases"]) == 3
    for entry in info["bases"]:
        cols = entry["columns"]
        for pos, i in enumerate(entry["cone"]):
            assert cols[pos] == list(p2.rays[i])


def test_every_subset_pair_satisfies_axiom(p2):
    for I, J in itertools.product(p2.cones, repeat=2):
        assert check_fan_axiom(p2, I, J)
