from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eqcalc.errors import InvalidInputError, ValidationError
from eqcalc.groups import (
    CATALOG_NAMES,
    FiniteGroup,
    catalog_group,
    conjugacy_classes_of_subgroups,
    enumerate_subgroups,
    is_isomorphic,
    load_group,
    normal_subgroups,
    parse_cycles,
    parse_group_text,
    quotient_group,
    table_group,
    weyl_group,
)

ORDERS = {"C1": 1, "C2": 2, "C3": 3, "C4": 4, "C5": 5, "C6": 6, "V4": 4, "S3": 6, "D4": 8, "Q8": 8}


def brute_subgroups(g):
    """Every subset containing the identity and closed under multiplication."""
    others = [x for x in g.elements if x != g.identity]
    out = []
    for r in range(len(others) + 1):
        for combo in combinations(others, r):
            s = frozenset(combo) | {g.identity}
            if all(g.mul(a, b) in s for a in s for b in s):
                out.append(s)
    return out


def brute_conjugacy_classes(g, subs):
    left = set(subs)
    classes = []
    while left:
        h = min(left, key=lambda s: (len(s), sorted(s)))
        orbit = {frozenset(g.conj(x, y) for y in h) for x in g.elements}
        classes.append(orbit)
        left -= orbit
    return classes


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_catalog_orders_and_axioms(name):
    g = catalog_group(name)
    assert g.order == ORDERS[name]
    g.validate()


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_subgroups_match_brute_force(name):
    g = catalog_group(name)
    subs = {h.members for h in enumerate_subgroups(g)}
    brute = brute_subgroups(g)
    assert subs == set(brute)
    classes = conjugacy_classes_of_subgroups(g)
    assert sorted(len(c) for c in classes) == sorted(len(c) for c in brute_conjugacy_classes(g, brute))
    normals = {h.members for h in normal_subgroups(g)}
    assert normals == {s for s in brute if all(g.conj(x, y) in s for x in g.elements for y in s)}


@pytest.mark.parametrize("name,subs,classes,normal", [
    ("C2", 2, 2, 2), ("S3", 6, 4, 3), ("V4", 5, 5, 5), ("C4", 3, 3, 3), ("D4", 10, 8, 6), ("Q8", 6, 6, 6),
])
def test_subgroup_counts(name, subs, classes, normal):
    g = catalog_group(name)
    assert len(enumerate_subgroups(g)) == subs
    assert len(conjugacy_classes_of_subgroups(g)) == classes
    assert len(normal_subgroups(g)) == normal


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_lagrange_and_class_count(name):
    g = catalog_group(name)
    subs = enumerate_subgroups(g)
    assert all(g.order % len(h) == 0 for h in subs)
    ncls = len(conjugacy_classes_of_subgroups(g))
    assert ncls <= len(subs)
    assert (ncls == len(subs)) == all(g.is_normal(h) for h in subs)
    if g.is_abelian:
        assert ncls == len(subs)


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_quotients(name):
    g = catalog_group(name)
    for n in normal_subgroups(g):
        q = quotient_group(g, n)
        q.validate()
        assert q.order == g.order // len(n)
    assert quotient_group(g, g.whole).order == 1
    assert is_isomorphic(quotient_group(g, g.trivial_subgroup), g)


def test_s3_mod_a3_and_weyl():
    g = catalog_group("S3")
    a3 = next(h for h in normal_subgroups(g) if len(h) == 3)
    assert quotient_group(g, a3).order == 2
    refl = next(h for h in enumerate_subgroups(g) if len(h) == 2)
    assert weyl_group(g, refl).order == 1
    assert weyl_group(g, g.trivial_subgroup).order == 6
    assert weyl_group(g, a3).order == 2


@pytest.mark.parametrize("name", ["C4", "V4", "C6", "Q8"])
def test_weyl_of_abelian_or_dedekind(name):
    g = catalog_group(name)
    for h in enumerate_subgroups(g):
        assert weyl_group(g, h).order == g.order // len(h)


def test_isomorphism_distinguishes():
    assert not is_isomorphic(catalog_group("C4"), catalog_group("V4"))
    assert not is_isomorphic(catalog_group("D4"), catalog_group("Q8"))
    assert not is_isomorphic(catalog_group("C6"), catalog_group("S3"))
    assert is_isomorphic(catalog_group("C6"), quotient_group(catalog_group("C6"), catalog_group("C6").trivial_subgroup))


def test_parse_group_text():
    g = parse_group_text("permutations:\n(1 2 3)\n(1 2)\n")
    assert g.order == 6
    assert is_isomorphic(g, catalog_group("S3"))
    assert parse_group_text("# comment\ncatalog: V4").order == 4
    with pytest.raises(InvalidInputError):
        parse_group_text("")
    with pytest.raises(InvalidInputError):
        parse_group_text("generators: (1 2)")
    with pytest.raises(InvalidInputError):
        catalog_group("Z7")


def test_load_group_from_file(tmp_path):
    p = tmp_path / "g.txt"
    p.write_text("degree: 4\npermutations:\n(1 2)(3 4)\n(1 3)(2 4)\n", encoding="utf-8")
    g = load_group(str(p))
    assert g.order == 4
    assert is_isomorphic(g, catalog_group("V4"))


def test_bad_table_rejected():
    with pytest.raises(ValidationError):
        table_group([[0, 1], [1, 1]])
    with pytest.raises(ValidationError):
        table_group([[0, 1, 2], [1, 2, 0], [2, 1, 0]])


@settings(max_examples=40, deadline=None)
@given(st.permutations(range(4)), st.permutations(range(4)))
def test_generated_permutation_groups(a, b):
    g = FiniteGroup.from_permutations([tuple(a), tuple(b)], 4)
    g.validate()
    assert 24 % g.order == 0
    subs = enumerate_subgroups(g)
    assert all(g.order % len(h) == 0 for h in subs)


def test_cycle_parsing():
    assert parse_cycles("(1 2 3)", 3) == (1, 2, 0)
    assert parse_cycles("()", 2) == (0, 1)
    with pytest.raises(InvalidInputError):
        parse_cycles("(1 1)", 2)
