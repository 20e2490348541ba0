from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eqcalc.chains import ChainComplex, homology
from eqcalc.diagrams import lambda_cube
from eqcalc.errors import PreconditionError, ValidationError
from eqcalc.groups import CATALOG_NAMES, catalog_group, enumerate_subgroups, normal_subgroups
from eqcalc.gsets import GSet, enumerate_gset_iso_classes
from eqcalc.posets import (
    EquivariantCover,
    GPoset,
    delooping_cover,
    fixed_poset_comparison,
    has_invariant_initial,
    lambda_classify,
    outside_star,
    power_poset,
    star_category,
    star_comma_poset,
    star_objects,
    star_orbit_cover,
    trivial_cover,
    validate_equivariant_cover,
)

C2 = catalog_group("C2")


def brute_star(j):
    """Direct filter: proper subsets of some o_+, over all orbits o."""
    jp = j.plus()
    bp = jp.basepoint
    out = set()
    pts = list(jp.points)
    for r in range(len(pts) + 1):
        for s in combinations(pts, r):
            s = frozenset(s)
            for o in j.orbits:
                op = frozenset(o) | {bp}
                if s <= op and s != op:
                    out.add(s)
    return out


def test_power_poset_sizes():
    assert len(power_poset(GSet.trivial(C2, 2), based=True)) == 8
    assert len(power_poset(GSet.trivial(C2, 0))) == 1
    p = power_poset(GSet.free(C2, 2), based=True)
    fixed = p.fixed_subposet(C2.whole)
    q = power_poset(GSet.trivial(C2, 2), based=True)
    assert len(fixed) == len(q) == 8
    # isomorphic as posets: same number of comparable pairs
    pairs = lambda P: sum(P.leq(a, b) for a in range(len(P)) for b in range(len(P)))
    assert pairs(fixed) == pairs(q)


def test_star_counts():
    j = GSet.free(C2, 3)
    assert len(star_category(j, range(6))) == 10
    assert len(star_category(j, [0, 1, 2, 4, 6])) == 11
    assert len(star_category(j)) == 17
    for n in range(5):
        if n:
            assert len(star_category(GSet.trivial(C2, n))) == n + 2


@pytest.mark.parametrize("name", ["C2", "C3", "V4", "S3"])
def test_star_matches_direct_filter(name):
    g = catalog_group(name)
    for j in enumerate_gset_iso_classes(g, 4):
        if j.size == 0:
            continue
        assert set(star_objects(j)) == brute_star(j)


def test_outside_star_examples():
    for n in range(1, 5):
        out = outside_star(GSet.trivial(C2, n))
        assert all(len(s) >= 2 for s in out)
        assert len(out) == 2 ** (n + 1) - (n + 2)
    assert outside_star(GSet.free(C2)) == [frozenset({0, 1, 2})]
    s3 = catalog_group("S3")
    assert outside_star(GSet.free(s3)) == [frozenset(range(7))]
    # Z/2 ⊔ pt: points 0,1 free, 2 fixed, basepoint 3
    j = GSet.from_orbits(C2, [C2.trivial_subgroup, C2.whole])
    got = set(outside_star(j))
    want = set()
    for r in range(5):
        for s in combinations(range(4), r):
            s = frozenset(s)
            meets_both = bool(s & {0, 1}) and 2 in s
            if meets_both or s in ({0, 1, 3}, {2, 3}):
                want.add(s)
    assert got == want


def test_lambda_classify_examples():
    j = GSet.free(C2, 2)
    assert lambda_classify(j, [4]).variant == "Contractible"
    w = lambda_classify(j, range(5))
    assert w.variant == "WedgeOfOrbitSuspensions" and w.orbit_sizes == (2, 2)
    e = lambda_classify(j, [])
    assert e.variant == "JoinWithPoints" and e.m == 0
    assert e.predicted_homology({0: 1}) == {0: 1}
    with pytest.raises(PreconditionError):
        lambda_classify(j, [9])


@pytest.mark.parametrize("name,key", [("C2", (0,)), ("C2", (0, 1)), ("C2", (0, 0)), ("C3", (0,)),
                                      ("V4", (0,)), ("S3", (1,)), ("S3", (2,)), ("S3", (1, 3))])
def test_lambda_classify_matches_nerve_oracle(name, key):
    from eqcalc.gsets import gset_from_key

    g = catalog_group(name)
    j = gset_from_key(g, key)
    c = ChainComplex({0: 1})
    cube = lambda_cube(j, c)
    for i, u in enumerate(cube.shape.objects):
        predicted = lambda_classify(j, u).predicted_homology({0: 1})
        assert homology(cube.values[i]) == predicted, (key, sorted(u))


def test_lambda_with_shifted_input():
    j = GSet.free(C2)
    c = ChainComplex({2: 1})
    cube = lambda_cube(j, c)
    for i, u in enumerate(cube.shape.objects):
        assert homology(cube.values[i]) == lambda_classify(j, u).predicted_homology({2: 1})


def test_delooping_cover_sizes():
    cov = delooping_cover(GSet.free(C2), 0, 1)
    sizes = [len(p) for p in cov.pieces]
    assert sizes == [4, 4, 4]
    assert frozenset().union(*cov.pieces) == frozenset(range(7))
    assert validate_equivariant_cover(cov.poset, cov)
    cov2 = delooping_cover(GSet.free(C2), 0, 2)
    assert len(cov2.poset) == 49
    assert validate_equivariant_cover(cov2.poset, cov2)


def test_cover_validation():
    p = power_poset(GSet.free(C2))
    assert validate_equivariant_cover(p, trivial_cover(p, C2))
    cov = star_orbit_cover(GSet.free(C2, 2))
    assert validate_equivariant_cover(cov.poset, cov)
    broken = EquivariantCover(p, GSet.trivial(C2, 1), (frozenset(range(len(p) - 1)),))
    assert not validate_equivariant_cover(p, broken)


def test_invariant_initial():
    for u in [set(), {0, 1}, {0, 1, 2, 3}]:
        sub = power_poset(GSet.free(C2, 2)).subposet(
            [i for i, s in enumerate(power_poset(GSet.free(C2, 2)).objects) if s <= u])
        assert has_invariant_initial(sub, C2.whole) == frozenset()
    # punctured cube of a transitive set with its basepoint: no invariant initial object
    for name in ("C2", "C3", "S3"):
        g = catalog_group(name)
        t = GSet.free(g).plus()
        p0 = power_poset(t.unbased())
        p0 = p0.subposet([i for i, s in enumerate(p0.objects) if s])
        assert has_invariant_initial(p0, g.whole) is None


def test_star_comma_poset_contains_diagonal_object():
    j = GSet.from_orbits(C2, [C2.trivial_subgroup, C2.whole])
    s = frozenset({0, 1, 2, 3})
    for v in [frozenset({0}), frozenset({2}), frozenset({3})]:
        comma = star_comma_poset(j, s, v)
        assert (v, v) in comma.index
        comma.validate()
    # a full orbit-plus-basepoint is never in any star, so nothing lies over it
    assert len(star_comma_poset(j, s, frozenset({2, 3}))) == 0


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_fixed_poset_isomorphism(name):
    g = catalog_group(name)
    for j in enumerate_gset_iso_classes(g, 6 if g.order <= 4 else 4):
        for h in normal_subgroups(g):
            assert fixed_poset_comparison(j, h)


def test_gposet_validation():
    p = GPoset([1, 2, 3], lambda a, b: b % a == 0)
    p.validate()
    assert sorted(p.covers()) == [(0, 1), (0, 2)]
    with pytest.raises(ValidationError):
        GPoset([1, 2], lambda a, b: True, check=True)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["C2", "C3", "V4", "S3"]), st.lists(st.integers(0, 5), min_size=1, max_size=2))
def test_star_is_invariant_down_closed(name, picks):
    g = catalog_group(name)
    subs = enumerate_subgroups(g)
    j = GSet.from_orbits(g, [subs[p % len(subs)] for p in picks])
    stc = star_category(j)
    objs = set(stc.objects)
    jp = j.plus()
    for s in objs:
        for a in g.elements:
            assert jp.image(a, s) in objs
        for x in s:
            assert s - {x} in objs
