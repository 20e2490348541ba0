from itertools import permutations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eqcalc.errors import PreconditionError, SizeBoundError
from eqcalc.families import (
    MAX_K,
    FamilySet,
    aut_order,
    enumerate_hom_classes,
    family_F,
    family_Fk_n,
    family_Q,
    family_Q_n,
    family_RK,
    graph_of_gset,
    handy_index,
    layer_family,
    truncate_family,
    universal_fixed_oracle,
)
from eqcalc.groups import CATALOG_NAMES, catalog_group, conjugacy_classes_of_subgroups, enumerate_subgroups, normal_subgroups
from eqcalc.gsets import GSet

C1, C2, S3 = catalog_group("C1"), catalog_group("C2"), catalog_group("S3")


def compose(p, q):
    """``p ∘ q``: apply ``q`` first."""
    return tuple(p[q[i]] for i in range(len(q)))


def brute_hom_classes(h, k):
    """All homomorphisms ``H -> Σ_k`` up to conjugation, by search over generator images."""
    g = h.parent
    gens = h.generators()
    elems = sorted(h.members)
    ident = tuple(range(k))
    perms = list(permutations(range(k)))
    classes = set()
    for imgs in product(perms, repeat=len(gens)):
        phi = {g.identity: ident}
        frontier = [g.identity]
        ok = True
        while frontier and ok:
            nxt = []
            for x in frontier:
                for gen, img in zip(gens, imgs):
                    y = g.mul(x, gen)
                    val = compose(phi[x], img)
                    if y in phi:
                        ok = ok and phi[y] == val
                    else:
                        phi[y] = val
                        nxt.append(y)
            frontier = nxt
        if not ok or any(phi[g.mul(a, b)] != compose(phi[a], phi[b]) for a in elems for b in elems):
            continue
        best = None
        for s in perms:
            sinv = tuple(sorted(range(k), key=lambda i: s[i]))
            cand = tuple(compose(compose(s, phi[x]), sinv) for x in elems)
            best = cand if best is None or cand < best else best
        classes.add(best)
    return classes


def transitive_sizes(h):
    """Sizes of transitive H-sets, one per conjugacy class of subgroups of H (conjugacy inside H)."""
    g = h.parent
    subs = [s for s in enumerate_subgroups(g) if s.members <= h.members]
    seen, sizes = [], []
    for s in subs:
        conj = {frozenset(g.conj(x, y) for y in s.members) for x in h.members}
        if any(c in seen for c in conj):
            continue
        seen.append(s.members)
        sizes.append(len(h) // len(s))
    return sizes


def count_multisets(sizes, k):
    ways = [1] + [0] * k
    for s in sizes:
        for t in range(s, k + 1):
            ways[t] += ways[t - s]
    return ways[k]


def test_hom_class_examples():
    assert len(enumerate_hom_classes(C1.whole, 5)) == 1
    assert len(enumerate_hom_classes(C2.whole, 2)) == 2
    assert len(enumerate_hom_classes(S3.whole, 3)) == 3


@pytest.mark.parametrize("name", ["C1", "C2", "C3", "C4", "V4", "S3"])
@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_hom_classes_match_brute_force(name, k):
    g = catalog_group(name)
    for h in enumerate_subgroups(g):
        got = enumerate_hom_classes(h, k)
        assert len(got) == len(brute_hom_classes(h, k))
        assert len(got) == count_multisets(transitive_sizes(h), k)


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_hom_classes_match_multiset_oracle(name):
    g = catalog_group(name)
    for h in enumerate_subgroups(g):
        for k in range(0, 7):
            assert len(enumerate_hom_classes(h, k)) == count_multisets(transitive_sizes(h), k)


def test_rho_is_homomorphism():
    for name in ("S3", "D4", "Q8"):
        g = catalog_group(name)
        for gamma in family_F(g, 4):
            rho = gamma.rho()
            for a in rho:
                for b in rho:
                    assert rho[g.mul(a, b)] == compose(rho[a], rho[b])
            # the graph meets 1 x Σ_k only in the identity
            assert [p for a, p in gamma.elements() if a == g.identity] == [tuple(range(4))]


@pytest.mark.parametrize("name", ["C2", "C3", "V4", "S3", "D4"])
def test_aut_order_matches_centralizer(name):
    g = catalog_group(name)
    for gamma in family_F(g, 4):
        imgs = list(gamma.rho().values())
        cent = sum(1 for s in permutations(range(4))
                   if all(compose(s, p) == compose(p, s) for p in imgs))
        assert aut_order(gamma) == cent


def test_fk_n_examples():
    assert len(family_Fk_n(C2, 1, 1)) == 2
    for k in range(2, 3):
        assert len(family_Fk_n(C2, k, 1)) == 0
    assert len(family_Fk_n(C2, 2, 2)) == 3
    with pytest.warns(UserWarning):
        assert len(family_Fk_n(C2, 5, 2)) == 0
    with pytest.raises(PreconditionError):
        family_Fk_n(C2, 1, 0)


def test_fk_n_matches_direct_filter():
    for name in ("C2", "C3", "S3"):
        g = catalog_group(name)
        for n in (1, 2, 3):
            for k in range(n, min(n * g.order, MAX_K) + 1):
                want = family_F(g, k).filter(lambda m: m.orbit_count == n - 1 or (k == n and m.is_trivial()))
                assert family_Fk_n(g, k, n) == want


def test_rk_examples():
    k_set = GSet.free(C2)
    r = family_RK(k_set)
    assert len(r) == 2
    assert len(truncate_family(r, 2)) == 1
    assert len(truncate_family(r, 1)) == 0
    assert [m.orbit_count for m in truncate_family(r, 2)] == [1]
    assert len(handy_index(C2, C2.whole, 2, r)) == 1


def test_rk_has_unique_graph_per_subgroup():
    for name in ("C2", "V4", "S3"):
        g = catalog_group(name)
        k_set = GSet.from_orbits(g, [g.trivial_subgroup, g.whole])
        r = family_RK(k_set)
        for h in enumerate_subgroups(g):
            idx = handy_index(g, h, k_set.size, r)
            assert len(idx) == 1
            assert idx[0][0].canonical() == graph_of_gset(k_set, h).canonical()


def test_q_examples():
    assert len(family_Q(C2, 2, C2.trivial_subgroup)) == 2
    assert len(family_Q(C2, 2, C2.whole)) == 1
    assert family_Q(C2, 2, C2.trivial_subgroup) | family_Q(C2, 2, C2.whole) == family_F(C2, 2)
    assert len(family_F(C2, 2)) == 3
    for k in range(5):
        assert family_Q(C1, k, C1.whole) == family_F(C1, k)
    non_normal = next(h for h in enumerate_subgroups(S3) if not S3.is_normal(h))
    with pytest.raises(PreconditionError):
        family_Q(S3, 2, non_normal)


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_q_partition(name):
    g = catalog_group(name)
    for k in range(5):
        parts = [family_Q(g, k, h) for h in normal_subgroups(g)]
        union = FamilySet(g)
        for p in parts:
            assert all(m not in union for m in p)
            union = union | p
        assert union == family_F(g, k)


def test_q_n_sums_to_fk_n():
    for name in ("C2", "V4", "S3"):
        g = catalog_group(name)
        for n in (1, 2):
            for k in range(n, n * g.order + 1):
                if k > MAX_K:
                    continue
                total = sum(len(family_Q_n(g, k, h, n)) for h in normal_subgroups(g))
                assert total == len(family_Fk_n(g, k, n))


def test_handy_examples():
    idx = handy_index(C2, C2.whole, 2, family_F(C2, 2))
    assert sorted(a for _, a in idx) == [2, 2]
    assert handy_index(C2, C2.whole, 2, FamilySet(C2)) == []


def test_size_bound():
    with pytest.raises(SizeBoundError):
        family_F(C2, MAX_K + 1)
    assert len(family_F(C2, 16, orbits=8)) == 1
    assert len(family_F(C2, 20, orbits=1)) == 0


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["C2", "C3", "V4", "S3", "D4", "Q8"]), st.integers(1, 4), st.data())
def test_oracle_is_conjugation_invariant(name, k, data):
    g = catalog_group(name)
    fam = family_F(g, k)
    normal = normal_subgroups(g)
    r = family_Q(g, k, data.draw(st.sampled_from(normal)))
    gamma = data.draw(st.sampled_from(list(fam.members)))
    x = data.draw(st.sampled_from(list(g.elements)))
    conj = gamma.conjugate(x)
    assert universal_fixed_oracle(fam, conj) == "S0"
    assert universal_fixed_oracle(r, conj) == universal_fixed_oracle(r, gamma)
    assert universal_fixed_oracle(FamilySet(g), gamma) == "point"


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["C2", "C3", "S3", "D4"]), st.integers(1, 5))
def test_truncation_monotone_and_layers_inside(name, k):
    g = catalog_group(name)
    r = family_F(g, k)
    prev = FamilySet(g)
    for n in range(0, k + 3):
        t = truncate_family(r, n)
        assert all(m in t for m in prev)
        prev = t
        lay = layer_family(r, n)
        assert all(m in r for m in lay)
        assert all(m not in truncate_family(r, n - 1) or m.is_trivial() for m in lay)
    assert truncate_family(r, k + 1) == r
