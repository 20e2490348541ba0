"""Graph subgroups of ``G x Σ_k`` and families of them.

A homomorphism ``ρ: L -> Σ_k`` is stored through its L-set: the sorted
multiset of conjugacy-class ids (inside ``L``) of the point stabilizers.
Two graphs are conjugate in ``G x Σ_k`` exactly when the domains are
conjugate in ``G`` and the L-sets agree after transporting along the
conjugation, so a canonical form is (class rep of ``L``, smallest key over
the normalizer twists).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial
from typing import Iterable, Iterator

from .errors import PreconditionError, SizeBoundError
from .groups import FiniteGroup, Subgroup, enumerate_subgroups, normal_subgroups
from .gsets import GSet, gset_from_key

MAX_K = 8
MAX_K_ORBITS = 64


class _Local:
    """Bookkeeping for a subgroup ``L`` viewed as a group of its own."""

    def __init__(self, g: FiniteGroup, members: frozenset[int]) -> None:
        self.parent = g
        self.sub = Subgroup(g, members, check=False)
        self.group, emb = self.sub.as_group()
        self.emb = tuple(emb)
        self.inv = {x: i for i, x in enumerate(emb)}
        lg = self.group
        self.nclasses = len(lg._classes)
        self.sizes = tuple(lg.order // len(lg.class_rep(c)) for c in range(self.nclasses))
        self.whole_class = lg.class_id(lg.whole)
        self.trivial_class = lg.class_id(lg.trivial_subgroup)

    def parent_members(self, c: int) -> frozenset[int]:
        return frozenset(self.emb[x] for x in self.group.class_rep(c).members)

    def class_of_parent(self, members: Iterable[int]) -> int:
        lg = self.group
        return lg.class_id(Subgroup(lg, frozenset(self.inv[x] for x in members), check=False))


@lru_cache(maxsize=None)
def _local(g: FiniteGroup, members: frozenset[int]) -> _Local:
    return _Local(g, members)


def _twist_map(g: FiniteGroup, src: frozenset[int], x: int) -> tuple[frozenset[int], tuple[int, ...]]:
    """Conjugation by ``x`` from ``L = src`` to ``xLx^{-1}``, on local class ids."""
    a = _local(g, src)
    tgt = frozenset(g.conj(x, y) for y in src)
    b = _local(g, tgt)
    return tgt, tuple(b.class_of_parent(g.conj(x, y) for y in a.parent_members(c)) for c in range(a.nclasses))


@dataclass(frozen=True)
class GraphSubgroup:
    """The graph ``{(l, ρ(l))}`` of a homomorphism ``ρ: L -> Σ_k``."""

    group: FiniteGroup = field(compare=False, repr=False)
    domain: frozenset[int]
    k: int
    key: tuple[int, ...]

    @property
    def local(self) -> _Local:
        return _local(self.group, self.domain)

    @property
    def domain_subgroup(self) -> Subgroup:
        return self.local.sub

    def hset(self) -> GSet:
        return gset_from_key(self.local.group, self.key)

    @property
    def orbit_count(self) -> int:
        return len(self.key)

    def is_trivial(self) -> bool:
        return all(c == self.local.whole_class for c in self.key)

    def rho(self) -> dict[int, tuple[int, ...]]:
        """Parent element -> permutation of ``0..k-1``."""
        hs = self.hset()
        return {self.local.emb[i]: tuple(hs.act[i]) for i in range(self.local.group.order)}

    def elements(self) -> frozenset[tuple[int, tuple[int, ...]]]:
        return frozenset(self.rho().items())

    def kernel(self) -> frozenset[int]:
        ident = tuple(range(self.k))
        return frozenset(h for h, p in self.rho().items() if p == ident)

    def conjugate(self, x: int) -> "GraphSubgroup":
        tgt, cmap = _twist_map(self.group, self.domain, x)
        return GraphSubgroup(self.group, tgt, self.k, tuple(sorted(cmap[c] for c in self.key)))

    def canonical(self) -> "GraphSubgroup":
        g = self.group
        rep = g.class_rep(g.class_id(self.domain_subgroup))
        base = self
        if rep.members != self.domain:
            x = next(x for x in g.elements if frozenset(g.conj(x, y) for y in self.domain) == rep.members)
            base = self.conjugate(x)
        best = base.key
        for n in g.normalizer(rep).members:
            _, cmap = _twist_map(g, rep.members, n)
            cand = tuple(sorted(cmap[c] for c in base.key))
            if cand < best:
                best = cand
        return GraphSubgroup(g, rep.members, self.k, best)

    def sort_key(self) -> tuple:
        return (len(self.domain), tuple(sorted(self.domain)), self.k, self.key)

    def orbit_labels(self) -> list[str]:
        loc = self.local
        out = []
        for c in self.key:
            k = Subgroup(self.group, loc.parent_members(c), check=False)
            out.append(f"L/{k.describe()}")
        return out

    def to_json(self) -> dict:
        g = self.group
        return {
            "subgroup_class": g.class_id(self.domain_subgroup),
            "domain": self.domain_subgroup.describe(),
            "k": self.k,
            "orbit_types": self.orbit_labels(),
            "orbit_sizes": [self.local.sizes[c] for c in self.key],
        }


def hset_keys(loc: _Local, k: int, orbits: int | None = None) -> list[tuple[int, ...]]:
    """Multisets of transitive L-set types with sizes summing to ``k``.

    With ``orbits`` given, only multisets with exactly that many members.
    """
    sizes = loc.sizes
    out: list[tuple[int, ...]] = []

    def rec(start: int, left: int, acc: list[int]) -> None:
        if left == 0:
            if orbits is None or len(acc) == orbits:
                out.append(tuple(acc))
            return
        if orbits is not None and len(acc) >= orbits:
            return
        for c in range(start, loc.nclasses):
            if sizes[c] <= left:
                acc.append(c)
                rec(c, left - sizes[c], acc)
                acc.pop()

    rec(0, k, [])
    return sorted(out)


def enumerate_hom_classes(h: Subgroup, k: int, orbits: int | None = None) -> list[GraphSubgroup]:
    """One graph per Σ_k-conjugacy class of homomorphisms ``H -> Σ_k``.

    ``orbits`` restricts to H-sets with that many orbits.
    """
    if k < 0:
        raise PreconditionError("k must be non-negative")
    _check_k(k, orbits)
    loc = _local(h.parent, h.members)
    keys = hset_keys(loc, k, orbits)
    return [GraphSubgroup(h.parent, h.members, k, key) for key in keys]


def graph_of_gset(k_set: GSet, l: Subgroup | None = None) -> GraphSubgroup:
    """The graph of ``ρ_K`` restricted to ``L`` (default: all of G)."""
    g = k_set.group
    l = l or g.whole
    loc = _local(g, l.members)
    res = k_set.restrict(l)
    key = tuple(sorted(loc.group.class_id(res.stabilizer(o[0])) for o in res.orbits))
    return GraphSubgroup(g, l.members, k_set.size, key)


# ---------------------------------------------------------------------------
# families


class FamilySet:
    """A set of graph subgroups up to ``G x Σ_k``-conjugacy, in canonical form."""

    def __init__(self, group: FiniteGroup, members: Iterable[GraphSubgroup] = ()) -> None:
        self.group = group
        canon = {m.canonical() for m in members}
        self.members: tuple[GraphSubgroup, ...] = tuple(sorted(canon, key=GraphSubgroup.sort_key))
        self._set = frozenset(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[GraphSubgroup]:
        return iter(self.members)

    def __contains__(self, gamma: GraphSubgroup) -> bool:
        return gamma.canonical() in self._set

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FamilySet):
            return NotImplemented
        return self._set == other._set

    def __or__(self, other: "FamilySet") -> "FamilySet":
        return FamilySet(self.group, self.members + other.members)

    def __repr__(self) -> str:
        return f"FamilySet({len(self)} classes)"

    def filter(self, pred) -> "FamilySet":
        return FamilySet(self.group, [m for m in self.members if pred(m)])

    def to_json(self) -> list[dict]:
        return [m.to_json() for m in self.members]


def _check_k(k: int, orbits: int | None = None) -> None:
    if orbits is None and k > MAX_K:
        raise SizeBoundError(f"unrestricted enumeration is limited to k <= {MAX_K}")
    if orbits is not None and (k > MAX_K_ORBITS or orbits > MAX_K):
        raise SizeBoundError(f"orbit-restricted enumeration is limited to k <= {MAX_K_ORBITS}")


def family_F(g: FiniteGroup, k: int, orbits: int | None = None) -> FamilySet:
    """All graph subgroups of ``G x Σ_k`` (optionally with a fixed orbit count)."""
    _check_k(k, orbits)
    out = []
    for c in range(len(g._classes)):
        out.extend(enumerate_hom_classes(g.class_rep(c), k, orbits))
    return FamilySet(g, out)


def _layer_filter(k: int, n: int):
    return lambda m: m.orbit_count == n - 1 or (k == n and m.is_trivial())


def family_Fk_n(g: FiniteGroup, k: int, n: int) -> FamilySet:
    """Graphs whose L-set has ``n - 1`` orbits, plus the trivial graphs when ``k = n``."""
    if n < 1:
        raise PreconditionError("n must be at least 1")
    if k < n or k > n * g.order:
        warnings.warn(f"k = {k} is outside [{n}, {n * g.order}]; the family is empty", stacklevel=2)
        return FamilySet(g)
    out = list(family_F(g, k, orbits=n - 1)) if n > 1 else []
    if k == n:
        out.extend(family_F(g, k, orbits=k).filter(lambda m: m.is_trivial()))
    return FamilySet(g, out)


def family_RK(k_set: GSet) -> FamilySet:
    """All subgroups of the graph of ``ρ_K``: the restrictions of ``ρ_K`` to subgroups of G."""
    g = k_set.group
    return FamilySet(g, [graph_of_gset(k_set, l) for l in enumerate_subgroups(g)])


def truncate_family(r: FamilySet, n: int) -> FamilySet:
    """``R(<n)``: members with fewer than ``n`` orbits."""
    return r.filter(lambda m: m.orbit_count < n)


def layer_family(r: FamilySet, n: int) -> FamilySet:
    """``R(n)``: members with ``n - 1`` orbits, plus trivial members when ``k = n``."""
    return r.filter(lambda m: _layer_filter(m.k, n)(m))


def normal_core(g: FiniteGroup, members: Iterable[int]) -> frozenset[int]:
    """Largest normal subgroup of G inside the given subgroup."""
    s = frozenset(members)
    out = s
    for x in g.elements:
        out = out & frozenset(g.conj(x, y) for y in s)
    return out


def family_Q(g: FiniteGroup, k: int, h: Subgroup, orbits: int | None = None) -> FamilySet:
    """Graphs of ``ρ: L -> Σ_k`` whose kernel has normal core exactly ``H``."""
    _check_k(k, orbits)
    if not g.is_normal(h):
        raise PreconditionError("H must be normal in G")
    out = []
    for l in enumerate_subgroups(g):
        if not h.members <= l.members:
            continue
        loc = _local(g, l.members)
        for key in hset_keys(loc, k, orbits):
            # rho is trivial on H iff every stabilizer contains H
            if not all(h.members <= stab for stab in _stabilizers(loc, key)):
                continue
            gamma = GraphSubgroup(g, l.members, k, key)
            if normal_core(g, gamma.kernel()) == h.members:
                out.append(gamma)
    return FamilySet(g, out)


def _stabilizers(loc: _Local, key: Iterable[int]) -> list[frozenset[int]]:
    """Parent-element stabilizers of all points of the L-set with this key."""
    out = []
    g = loc.parent
    for c in key:
        k = loc.parent_members(c)
        # the conjugates of K inside L
        for x in loc.emb:
            out.append(frozenset(g.conj(x, y) for y in k))
    return out


def family_Q_n(g: FiniteGroup, k: int, h: Subgroup, n: int) -> FamilySet:
    """``Q_{k,H}(n)``: ``Q_{k,H}`` with the same orbit filter as ``F_k(n)``."""
    if k < n or k > n * g.order:
        warnings.warn(f"k = {k} is outside [{n}, {n * g.order}]; the family is empty", stacklevel=2)
        return FamilySet(g)
    out = list(family_Q(g, k, h, orbits=n - 1)) if n > 1 else []
    if k == n:
        out.extend(family_Q(g, k, h, orbits=k).filter(lambda m: m.is_trivial()))
    return FamilySet(g, out)


def universal_fixed_oracle(r: FamilySet, gamma: GraphSubgroup) -> str:
    """``"S0"`` if ``gamma`` is conjugate to a member of ``r``, else ``"point"``."""
    return "S0" if gamma in r else "point"


def aut_order(gamma: GraphSubgroup) -> int:
    """Order of the automorphism group of the L-set: ``∏ m! |W_L(K)|^m``."""
    loc = gamma.local
    lg = loc.group
    out = 1
    counts: dict[int, int] = {}
    for c in gamma.key:
        counts[c] = counts.get(c, 0) + 1
    for c, m in counts.items():
        k = lg.class_rep(c)
        weyl = len(lg.normalizer(k)) // len(k)
        out *= factorial(m) * weyl ** m
    return out


def handy_index(g: FiniteGroup, h: Subgroup, k: int, r: FamilySet) -> list[tuple[GraphSubgroup, int]]:
    """Classes of ``ρ: H -> Σ_k`` whose graph lies in ``r``, with automorphism orders."""
    out = []
    counts = sorted({m.orbit_count for m in r if m.k == k})
    for c in counts:
        for gamma in enumerate_hom_classes(h, k, orbits=c):
            if gamma in r:
                out.append((gamma, aut_order(gamma)))
    out.sort(key=lambda t: t[0].sort_key())
    return out


def all_normal_Q(g: FiniteGroup, k: int) -> dict[int, FamilySet]:
    """``Q_{k,H}`` for every normal ``H``, keyed by position in ``normal_subgroups``."""
    return {i: family_Q(g, k, h) for i, h in enumerate(normal_subgroups(g))}
