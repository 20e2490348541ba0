from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eqcalc.errors import InvalidInputError, PreconditionError, ValidationError
from eqcalc.groups import CATALOG_NAMES, catalog_group, enumerate_subgroups, normal_subgroups
from eqcalc.gsets import (
    EquivariantMap,
    GSet,
    enumerate_gset_iso_classes,
    fixed_points,
    gset_from_key,
    is_injective_on_orbits,
    parse_gset,
    quotient_gset,
    tree_leq,
)

C2 = catalog_group("C2")


def pt(g=C2):
    return GSet.trivial(g, 1)


def brute_tree_leq(k, j):
    """Search all maps K -> J for an equivariant one injective on orbits."""
    g = k.group
    for images in product(range(j.size), repeat=k.size):
        if all(images[k.act[a][x]] == j.act[a][images[x]] for a in g.elements for x in k.points):
            om = [j.orbit_of[images[o[0]]] for o in k.orbits]
            if len(set(om)) == len(om):
                return True
    return False


def test_orbits_examples():
    s3 = catalog_group("S3")
    assert len(GSet.free(s3).orbits) == 1
    three = GSet.free(C2, 3)
    assert [len(o) for o in three.orbits] == [2, 2, 2]
    refl = next(h for h in enumerate_subgroups(s3) if len(h) == 2)
    t = GSet.from_orbits(s3, [refl])
    assert [len(o) for o in t.orbits] == [3]


def test_fixed_points_examples():
    assert fixed_points(GSet.free(C2, 2), C2.whole) == frozenset()
    jp = GSet.free(C2, 2).plus()
    for h in enumerate_subgroups(C2):
        assert jp.basepoint in fixed_points(jp, h)
    mixed = GSet.from_orbits(C2, [C2.trivial_subgroup, C2.whole])
    assert fixed_points(mixed, C2.whole) == frozenset({2})


def test_quotient_examples():
    q, proj = quotient_gset(GSet.free(C2, 2), C2.whole)
    assert q.size == 2 and all(len(o) == 1 for o in q.orbits)
    j = GSet.from_orbits(C2, [C2.trivial_subgroup, C2.whole])
    q1, _ = quotient_gset(j, C2.trivial_subgroup)
    assert q1.iso_key() == j.iso_key()
    s3 = catalog_group("S3")
    with pytest.raises(PreconditionError):
        quotient_gset(GSet.free(s3), next(h for h in enumerate_subgroups(s3) if len(h) == 2))


def test_injective_on_orbits_examples():
    free = GSet.free(C2)
    proj = EquivariantMap(free, pt(), (0, 0))
    assert is_injective_on_orbits(proj)
    fold = EquivariantMap(GSet.free(C2, 2), free, (0, 1, 0, 1))
    assert not is_injective_on_orbits(fold)
    incl = EquivariantMap(free, GSet.free(C2, 2), (0, 1))
    assert is_injective_on_orbits(incl)
    with pytest.raises(ValidationError):
        EquivariantMap(pt(), free, (0,))


def test_tree_leq_examples():
    free = GSet.free(C2)
    assert tree_leq(free, pt())
    assert not tree_leq(pt(), free)
    assert tree_leq(GSet.free(C2, 2), GSet.from_orbits(C2, [C2.trivial_subgroup, C2.whole]))


@pytest.mark.parametrize("name", ["C2", "C3", "C4", "V4", "S3"])
def test_tree_leq_matches_map_search(name):
    g = catalog_group(name)
    classes = enumerate_gset_iso_classes(g, 4 if g.order <= 4 else 3)
    for a in classes:
        for b in classes:
            assert tree_leq(a, b) == brute_tree_leq(a, b), (a.iso_key(), b.iso_key())


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_tree_leq_partial_order_on_classes(name):
    g = catalog_group(name)
    classes = enumerate_gset_iso_classes(g, 4)
    for a in classes:
        assert tree_leq(a, a)
        for b in classes:
            if a is not b and tree_leq(a, b):
                assert not tree_leq(b, a)
            for c in classes:
                if tree_leq(a, b) and tree_leq(b, c):
                    assert tree_leq(a, c)


def test_enumeration_examples():
    assert [c.iso_key() for c in enumerate_gset_iso_classes(C2, 2)] == [(), (1,), (0,), (1, 1)]
    s3 = catalog_group("S3")
    transitive = [c for c in enumerate_gset_iso_classes(s3, 6) if len(c.orbits) == 1]
    assert len(transitive) == 4
    for name in CATALOG_NAMES:
        assert len(enumerate_gset_iso_classes(catalog_group(name), 0)) == 1


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_orbit_counting(name):
    g = catalog_group(name)
    for j in enumerate_gset_iso_classes(g, 6):
        assert sum(len(o) for o in j.orbits) == j.size
        assert all(g.order % len(o) == 0 for o in j.orbits)
        for h in normal_subgroups(g):
            q, proj = quotient_gset(j, h)
            q.validate()
            assert len(q.orbits) == len(j.orbits)
            assert is_injective_on_orbits(proj)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(CATALOG_NAMES), st.lists(st.integers(0, 20), max_size=3), st.randoms(use_true_random=False))
def test_iso_key_invariant_under_relabeling(name, picks, rnd):
    g = catalog_group(name)
    subs = enumerate_subgroups(g)
    j = GSet.from_orbits(g, [subs[p % len(subs)] for p in picks])
    perm = list(range(j.size))
    rnd.shuffle(perm)
    inv = {perm[x]: x for x in range(j.size)}
    act = [[perm[row[inv[y]]] for y in range(j.size)] for row in j.act]
    k = GSet(g, act)
    assert k.iso_key() == j.iso_key()
    assert k.is_isomorphic(j)
    assert gset_from_key(g, j.iso_key()).iso_key() == j.iso_key()
    for h in subs:
        gens = h.generators()
        fixed_by_gens = frozenset(x for x in j.points if all(j.act[a][x] == x for a in gens))
        assert fixed_points(j, h) == fixed_by_gens


def test_parse_gset():
    s3 = catalog_group("S3")
    j = parse_gset(s3, {"orbits": ["#1", {"stabilizer": "G", "count": 2}]})
    assert j.size == 5 and len(j.orbits) == 3
    jp = parse_gset(s3, {"orbits": ["<(1 2)>"], "basepoint": True})
    assert jp.size == 4 and jp.basepoint == 3
    with pytest.raises(InvalidInputError):
        parse_gset(s3, {"orbits": ["#99"]})
    with pytest.raises(InvalidInputError):
        parse_gset(s3, {"points": []})
    with pytest.raises(InvalidInputError):
        parse_gset(s3, {"orbits": [{"stabilizer": "1", "count": -1}]})


def test_invalid_action_rejected():
    with pytest.raises(ValidationError):
        GSet(C2, [[0, 1], [0, 0]])
    with pytest.raises(ValidationError):
        GSet(C2, [[1, 0], [1, 0]])
