from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eqcalc.errors import SizeBoundError
from eqcalc.groups import catalog_group
from eqcalc.gsets import GSet
from eqcalc.partitions import (
    MAX_POINTS,
    bell,
    block_size_classes,
    build_T,
    fixed_subcomplex,
    integer_partitions,
    invariant_partitions,
    nondegenerate_counts,
    partition_number,
    proper_partition_nerve_homology,
    refines,
    set_partitions,
    snaith_index_count,
    t_homology,
)

C1, C2 = catalog_group("C1"), catalog_group("C2")


def bell_by_recurrence(n):
    """Bell numbers from the Bell triangle."""
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def brute_partitions(points):
    """Set partitions as sets of frozensets, by restricted growth strings."""
    pts = list(points)
    out = set()

    def rec(i, labels):
        if i == len(pts):
            blocks = {}
            for p, l in zip(pts, labels):
                blocks.setdefault(l, set()).add(p)
            out.add(frozenset(frozenset(b) for b in blocks.values()))
            return
        for l in range(max(labels, default=-1) + 2):
            rec(i + 1, labels + [l])

    rec(0, [])
    return out


def normalize(p):
    return frozenset(frozenset(b) for b in p)


@pytest.mark.parametrize("n", range(0, 8))
def test_bell_numbers(n):
    assert bell(n) == bell_by_recurrence(n)
    assert len(set_partitions(range(n))) == bell_by_recurrence(n)
    assert {normalize(p) for p in set_partitions(range(n))} == brute_partitions(range(n))


def test_refinement_is_partial_order():
    ps = set_partitions(range(4))
    for a in ps:
        assert refines(a, a)
        for b in ps:
            if a != b and refines(a, b):
                assert not refines(b, a)
            for c in ps:
                if refines(a, b) and refines(b, c):
                    assert refines(a, c)


def test_level_two_sizes():
    assert build_T(3).size(2) == 6
    assert build_T(4).size(2) == 16
    for k in range(1, 6):
        assert build_T(k).size(2) == bell(k) + 1


def test_level_sizes_low():
    t = build_T(3)
    assert t.size(0) == 1
    assert t.size(1) == 2


def test_one_point_counts():
    # with a single partition, only the 0-simplex is non-degenerate
    t = build_T(1)
    assert [nondegenerate_counts(t, m) for m in range(4)] == [1, 0, 0, 0]
    assert [t.size(p) - 1 for p in range(4)] == [1, 1, 1, 1]


def test_nondegenerate_counts():
    t3, t4 = build_T(3), build_T(4)
    assert [nondegenerate_counts(t3, m) for m in range(4)] == [0, 1, 3, 0]
    assert [nondegenerate_counts(t4, m) for m in range(5)] == [0, 1, 13, 18, 0]
    t2 = build_T(2)
    assert [nondegenerate_counts(t2, m) for m in range(4)] == [0, 1, 0, 0]
    # no strict chain is longer than the rank of the lattice
    for k in range(1, 5):
        t = build_T(k)
        for m in range(k + 1, k + 3):
            assert nondegenerate_counts(t, m) == 0


def brute_strict_chains(k, m):
    ps = [normalize(p) for p in set_partitions(range(k))]
    lo = normalize([[i] for i in range(k)])
    hi = normalize([list(range(k))])

    def finer(a, b):
        return a != b and all(any(x <= y for y in b) for x in a)

    count = 0

    def rec(ch):
        nonlocal count
        if len(ch) == m + 1:
            count += ch[-1] == hi
            return
        for q in ps:
            if finer(ch[-1], q):
                rec(ch + [q])

    rec([lo])
    return count


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_nondegenerate_counts_match_brute_force(k):
    t = build_T(k)
    for m in range(1, k + 1):
        assert nondegenerate_counts(t, m) == brute_strict_chains(k, m)


@pytest.mark.parametrize("k", range(1, 7))
def test_t_homology(k):
    assert t_homology(k) == {k - 1: factorial(k - 1)}


@pytest.mark.parametrize("k", [3, 4, 5, 6])
def test_proper_nerve_homology(k):
    assert proper_partition_nerve_homology(k) == {k - 3: factorial(k - 1)}


def test_proper_nerve_homology_k2():
    assert proper_partition_nerve_homology(2) == {-1: 1}


def test_validate_simplicial_identities():
    for k in range(1, 5):
        build_T(k).validate(3)
    t = build_T(GSet.free(C2, 2))
    t.validate(2)
    fixed_subcomplex(t, C2.whole).validate(2)


def brute_invariant(k, perm):
    return {p for p in brute_partitions(range(k))
            if frozenset(frozenset(perm[x] for x in b) for b in p) == p}


def test_invariant_partitions_double_transposition():
    j = GSet.free(C2, 2)
    got = invariant_partitions(j, C2.whole)
    gen = next(g for g in C2.elements if g != C2.identity)
    perm = j.act[gen]
    want = brute_invariant(4, perm)
    assert {normalize(p) for p in got} == want
    assert len(want) == 7
    assert len(invariant_partitions(j, C2.trivial_subgroup)) == 15


def test_fixed_subcomplex_of_single_free_orbit_is_everything():
    t = build_T(GSet.free(C2))
    f = fixed_subcomplex(t, C2.whole)
    for p in range(4):
        assert f.size(p) == t.size(p)
    assert t_homology(GSet.free(C2), C2.whole) == t_homology(2)


def test_fixed_subcomplex_trivial_action():
    j = GSet.trivial(C2, 3)
    t = build_T(j)
    f = fixed_subcomplex(t, C2.whole)
    assert [f.size(p) for p in range(4)] == [t.size(p) for p in range(4)]
    f1 = fixed_subcomplex(build_T(GSet.free(C2, 2)), C2.trivial_subgroup)
    assert f1.size(2) == 16


def test_fixed_homology_free_size_four():
    assert t_homology(GSet.free(C2, 2), C2.whole) == {2: 2}


def test_size_bound():
    with pytest.raises(SizeBoundError):
        build_T(MAX_POINTS + 1)
    with pytest.raises(SizeBoundError):
        proper_partition_nerve_homology(MAX_POINTS + 1)


@pytest.mark.parametrize("k,want", [(1, (1, 1)), (4, (5, 5)), (8, (22, 22)), (12, (77, 77))])
def test_snaith_examples(k, want):
    assert snaith_index_count(k) == want


@pytest.mark.parametrize("k", range(1, 8))
def test_partition_classes_by_block_sizes(k):
    assert block_size_classes(k) == partition_number(k)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 25))
def test_integer_partitions_are_distinct_and_sum(k):
    ps = list(integer_partitions(k))
    assert len(ps) == len(set(ps)) == partition_number(k)
    assert all(sum(p) == k and list(p) == sorted(p, reverse=True) for p in ps)


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 5), st.data())
def test_action_preserves_refinement(k, data):
    perm = data.draw(st.permutations(list(range(k))))
    ps = [normalize(p) for p in set_partitions(range(k))]
    act = lambda p: frozenset(frozenset(perm[x] for x in b) for b in p)

    def finer(a, b):
        return all(any(x <= y for y in b) for x in a)

    for a in ps:
        assert act(a) in ps
        for b in ps:
            assert finer(a, b) == finer(act(a), act(b))
