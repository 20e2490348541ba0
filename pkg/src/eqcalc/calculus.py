"""Index data for trees, towers and splittings of equivariant functors.

Everything here is combinatorial: families, posets and homology ranks.
No space-level object is ever evaluated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product

from .errors import PreconditionError, SizeBoundError
from .families import (
    FamilySet,
    aut_order,
    family_Fk_n,
    family_Q_n,
    handy_index,
    layer_family,
    truncate_family,
)
from .groups import (
    CATALOG_NAMES,
    FiniteGroup,
    Subgroup,
    catalog_group,
    conjugacy_classes_of_subgroups,
    enumerate_subgroups,
    is_isomorphic,
    normal_subgroups,
    quotient_group,
    weyl_group,
)
from .gsets import GSet, enumerate_gset_iso_classes, tree_leq
from .partitions import MAX_POINTS, t_homology


def identify_group(g: FiniteGroup) -> str:
    """Catalog name of a group isomorphic to ``g``, else ``order-N``."""
    for name in CATALOG_NAMES:
        c = catalog_group(name)
        if c.order == g.order and is_isomorphic(g, c):
            return name
    return f"order-{g.order}"


def _subgroup_record(g: FiniteGroup, h: Subgroup) -> dict:
    return {"subgroup": h.describe(), "order": len(h), "class": g.class_id(h)}


def _ranks(hom: dict[int, int]) -> dict[str, int]:
    return {str(d): r for d, r in sorted(hom.items())}


# ---------------------------------------------------------------------------
# the tree


@dataclass
class TreeDiagram:
    """Iso classes of G-sets ordered by orbit-injective maps.

    ``edges`` holds Hasse covers ``(a, b)`` meaning ``nodes[a] < nodes[b]``.
    """

    group: FiniteGroup
    nodes: list[GSet]
    leq: list[list[bool]]
    edges: list[tuple[int, int]]

    @property
    def keys(self) -> list[tuple[int, ...]]:
        return [n.iso_key() for n in self.nodes]

    def index_of(self, key) -> int:
        return self.keys.index(tuple(key))

    def less(self, a: int, b: int) -> bool:
        return a != b and self.leq[a][b]

    def to_json(self) -> dict:
        return {
            "group": self.group.name,
            "nodes": [{"id": i, "key": list(n.iso_key()), "label": n.key_label(), "size": n.size}
                      for i, n in enumerate(self.nodes)],
            "edges": [list(e) for e in self.edges],
        }

    def to_dot(self) -> str:
        lines = ["digraph tree {", "  rankdir=BT;"]
        for i, n in enumerate(self.nodes):
            lines.append(f'  n{i} [label="{n.key_label()}"];')
        for a, b in self.edges:
            lines.append(f"  n{a} -> n{b};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def goodwillie_tree(g: FiniteGroup, max_orbits: int | None, max_size: int) -> TreeDiagram:
    nodes = enumerate_gset_iso_classes(g, max_size, max_orbits)
    n = len(nodes)
    leq = [[tree_leq(a, b) for b in nodes] for a in nodes]
    strict = [[leq[a][b] and not leq[b][a] for b in range(n)] for a in range(n)]
    edges = []
    for a in range(n):
        for b in range(n):
            if strict[a][b] and not any(strict[a][c] and strict[c][b] for c in range(n)):
                edges.append((a, b))
    return TreeDiagram(g, nodes, leq, edges)


def preorder_problems(tree: TreeDiagram) -> list[str]:
    """Reflexivity, transitivity and antisymmetry-up-to-isomorphism failures."""
    out = []
    n = len(tree.nodes)
    leq = tree.leq
    for a in range(n):
        if not leq[a][a]:
            out.append(f"not reflexive at {a}")
        for b in range(n):
            if a != b and leq[a][b] and leq[b][a]:
                out.append(f"distinct classes {a} and {b} are mutually below each other")
            for c in range(n):
                if leq[a][b] and leq[b][c] and not leq[a][c]:
                    out.append(f"not transitive on {a}, {b}, {c}")
    return out


# ---------------------------------------------------------------------------
# restriction to subgroups


def restriction_index(j: GSet, h: Subgroup) -> tuple[list[tuple[tuple[int, ...], ...]], list[GSet]]:
    """Choices of one H-orbit inside each G-orbit, and the union H-set per choice.

    Each choice is a tuple of H-orbits (as point tuples), one per G-orbit.
    """
    if h.parent is not j.group:
        raise PreconditionError("H must be a subgroup of the acting group")
    jh = j.restrict(h)
    horbit = jh.orbit_of
    per_orbit = []
    for o in j.orbits:
        seen: dict[int, list[int]] = {}
        for x in o:
            seen.setdefault(horbit[x], []).append(x)
        per_orbit.append([tuple(v) for _, v in sorted(seen.items(), key=lambda kv: min(kv[1]))])
    choices = list(product(*per_orbit))
    sets = [jh.sub(x for part in w for x in part) for w in choices]
    return choices, sets


# ---------------------------------------------------------------------------
# symmetric powers


def png_triviality(g: FiniteGroup, k_set: GSet, h: Subgroup, n: int) -> bool:
    """Triviality predicate for the nG-excisive approximation of the K-indexed power."""
    return n < k_set.size and n <= len(k_set.restrict(h).orbits)


def connectivity_estimate(g: FiniteGroup, k_set: GSet, n: int) -> int:
    """Per-iteration connectivity gain: min over nonempty U of p(U) - |U| + 1.

    U ranges over subsets of ``{1..n} ∪ {+}``; ``p(U)`` is the orbit count of
    K when ``+`` is absent and the size of K when it is present.
    """
    if n < 1:
        raise PreconditionError("n must be at least 1")
    orbits = len(k_set.orbits)
    best = None
    pts = list(range(n)) + ["+"]
    for r in range(1, n + 2):
        for u in combinations(pts, r):
            p = k_set.size if "+" in u else orbits
            val = p - len(u) + 1
            best = val if best is None else min(best, val)
    return best


def symmetric_power_tower(g: FiniteGroup, k: int, r: FamilySet) -> dict[int, tuple[FamilySet, FamilySet]]:
    """``n -> (R(<n), R(n))`` for ``1 <= n <= k``."""
    return {n: (truncate_family(r, n), layer_family(r, n)) for n in range(1, k + 1)}


# ---------------------------------------------------------------------------
# splittings


@dataclass
class SplittingDescriptor:
    variant: str
    group: FiniteGroup
    summands: list[dict]
    empty: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "variant": self.variant,
            "group": self.group.name,
            "count": len(self.summands),
            "summands": self.summands,
            "empty": self.empty,
        }


def tomdieck_summands(g: FiniteGroup, mode: str = "conjugacy") -> SplittingDescriptor:
    """Classical splitting summands.

    ``abelian-normal``: one per subgroup with quotient group. ``conjugacy``:
    one per conjugacy class with the Weyl group.
    """
    if mode == "abelian-normal":
        subs = enumerate_subgroups(g)
        if not all(g.is_normal(h) for h in subs):
            raise PreconditionError("abelian-normal mode needs every subgroup to be normal")
        out = []
        for h in subs:
            q = quotient_group(g, h)
            out.append({**_subgroup_record(g, h), "group": identify_group(q), "group_order": q.order})
        return SplittingDescriptor("normal-subgroup", g, out)
    if mode == "conjugacy":
        out = []
        for cls in conjugacy_classes_of_subgroups(g):
            h = cls[0]
            w = weyl_group(g, h)
            out.append({**_subgroup_record(g, h), "conjugates": len(cls),
                        "group": identify_group(w), "group_order": w.order})
        return SplittingDescriptor("classical", g, out)
    raise PreconditionError(f"unknown mode {mode!r}")


def _k_range(g: FiniteGroup, n: int) -> range:
    if n < 1:
        raise PreconditionError("n must be at least 1")
    return range(n, n * g.order + 1)


def higher_tomdieck_summands(g: FiniteGroup, n: int) -> SplittingDescriptor:
    """One record per normal H and k with ``Q_{k,H}(n)`` nonempty."""
    out, empty = [], []
    for h in normal_subgroups(g):
        q = quotient_group(g, h)
        for k in _k_range(g, n):
            fam = family_Q_n(g, k, h, n)
            rec = {**_subgroup_record(g, h), "k": k, "classes": len(fam),
                   "group": identify_group(q), "group_order": q.order}
            (out if len(fam) else empty).append(rec)
    return SplittingDescriptor("higher", g, out, empty)


# ---------------------------------------------------------------------------
# layers of the identity


@dataclass
class LayerEntry:
    k: int
    family: FamilySet
    homology: dict[int, int]
    index: dict[int, list[tuple]]

    @property
    def empty(self) -> bool:
        return len(self.family) == 0

    def to_json(self, g: FiniteGroup) -> dict:
        return {
            "k": self.k,
            "empty": self.empty,
            "family_size": len(self.family),
            "family": self.family.to_json(),
            "t_homology": _ranks(self.homology),
            "index": [
                {"subgroup_class": c, "subgroup": g.class_rep(c).describe(),
                 "classes": [{"orbit_types": gam.orbit_labels(), "aut": aut} for gam, aut in items]}
                for c, items in sorted(self.index.items())
            ],
        }


@dataclass
class LayerDescriptor:
    group: FiniteGroup
    n: int
    entries: list[LayerEntry]
    complete: bool = True

    def entry(self, k: int) -> LayerEntry:
        for e in self.entries:
            if e.k == k:
                return e
        raise KeyError(k)

    def nonempty(self) -> list[int]:
        return [e.k for e in self.entries if not e.empty]

    def to_json(self) -> dict:
        return {
            "group": self.group.name,
            "n": self.n,
            "complete": self.complete,
            "k_range": [self.n, self.n * self.group.order],
            "entries": [e.to_json(self.group) for e in self.entries],
        }


def identity_layer_descriptor(g: FiniteGroup, n: int, max_k: int = MAX_POINTS) -> LayerDescriptor:
    """Families, partition-complex ranks and per-subgroup index data of the n-th layer.

    Raises SizeBoundError when ``n|G|`` exceeds ``max_k`` (at most the
    partition-complex bound); its ``partial`` attribute carries the entries
    computed so far.
    """
    bound = min(max_k, MAX_POINTS)
    desc = LayerDescriptor(g, n, [])
    for k in _k_range(g, n):
        if k > bound:
            desc.complete = False
            raise SizeBoundError(f"k = {k} exceeds the size bound {bound}", partial=desc)
        fam = family_Fk_n(g, k, n)
        index = {}
        for c in range(len(g._classes)):
            index[c] = handy_index(g, g.class_rep(c), k, fam)
        desc.entries.append(LayerEntry(k, fam, t_homology(k), index))
    return desc


__all__ = [
    "LayerDescriptor",
    "LayerEntry",
    "SplittingDescriptor",
    "TreeDiagram",
    "aut_order",
    "connectivity_estimate",
    "goodwillie_tree",
    "higher_tomdieck_summands",
    "identify_group",
    "identity_layer_descriptor",
    "png_triviality",
    "preorder_problems",
    "restriction_index",
    "symmetric_power_tower",
    "tomdieck_summands",
]
