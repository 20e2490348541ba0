"""Finite G-sets, equivariant maps and the orbit-injective order."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations_with_replacement
from typing import Iterable, Sequence

from .errors import InvalidInputError, PreconditionError, SizeBoundError, ValidationError
from .groups import FiniteGroup, Subgroup, cosets

MAX_ISO_SIZE = 12


class GSet:
    """Points ``0..n-1`` with ``act[g][x]`` the image of ``x`` under ``g``.

    ``basepoint`` (if not None) names a point fixed by the whole group; it
    plays the role of the added point in ``J_+``.
    """

    def __init__(self, group: FiniteGroup, act: Sequence[Sequence[int]], basepoint: int | None = None,
                 labels: Sequence[str] | None = None, check: bool = True) -> None:
        self.group = group
        self.act = tuple(tuple(int(x) for x in row) for row in act)
        self.basepoint = basepoint
        n = len(self.act[0]) if self.act else 0
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(n))
        if check:
            self.validate()

    @property
    def size(self) -> int:
        return len(self.act[0]) if self.act else 0

    def __len__(self) -> int:
        return self.size

    @property
    def points(self) -> range:
        return range(self.size)

    def __repr__(self) -> str:
        return f"GSet(size={self.size}, orbits={len(self.orbits)}, basepoint={self.basepoint})"

    def validate(self) -> None:
        g = self.group
        if len(self.act) != g.order:
            raise ValidationError("action table needs one row per group element")
        n = self.size
        for a in g.elements:
            if sorted(self.act[a]) != list(range(n)):
                raise ValidationError("group element does not act by a bijection", {"element": a})
        if self.act[g.identity] != tuple(range(n)):
            raise ValidationError("identity does not act trivially")
        for a in g.elements:
            for b in g.elements:
                ab = g.mul(a, b)
                for x in range(n):
                    if self.act[ab][x] != self.act[a][self.act[b][x]]:
                        raise ValidationError("action is not compatible with multiplication",
                                              {"pair": (a, b), "point": x})
        if self.basepoint is not None:
            if not 0 <= self.basepoint < n:
                raise ValidationError("basepoint out of range")
            if any(self.act[a][self.basepoint] != self.basepoint for a in g.elements):
                raise ValidationError("basepoint is not fixed")

    # construction ----------------------------------------------------------

    @classmethod
    def from_orbits(cls, group: FiniteGroup, stabilizers: Iterable[Subgroup], basepoint: bool = False) -> "GSet":
        """Disjoint union of the coset sets ``G/H`` (plus a basepoint if asked)."""
        pts: list[tuple[int, frozenset[int]]] = []
        labels = []
        for oi, h in enumerate(stabilizers):
            if h.parent is not group:
                raise PreconditionError("stabilizer belongs to another group")
            for c in cosets(group, h):
                pts.append((oi, c))
                labels.append(f"o{oi}:{group.label(min(c))}H" if len(h) > 1 else f"o{oi}:{group.label(min(c))}")
        where = {}
        for i, (oi, c) in enumerate(pts):
            where[(oi, min(c))] = i
        act = []
        for g in group.elements:
            row = []
            for oi, c in pts:
                image = frozenset(group.mul(g, x) for x in c)
                row.append(where[(oi, min(image))])
            act.append(row)
        bp = None
        if basepoint:
            bp = len(pts)
            for row in act:
                row.append(bp)
            labels.append("+")
        if not pts and not basepoint:
            act = [[] for _ in group.elements]
        return cls(group, act, bp, labels, check=False)

    @classmethod
    def trivial(cls, group: FiniteGroup, n: int) -> "GSet":
        return cls.from_orbits(group, [group.whole] * n)

    @classmethod
    def free(cls, group: FiniteGroup, n: int = 1) -> "GSet":
        return cls.from_orbits(group, [group.trivial_subgroup] * n)

    def plus(self) -> "GSet":
        """``J_+``: add a new fixed basepoint as the last point."""
        if self.basepoint is not None:
            raise PreconditionError("already based")
        n = self.size
        act = [list(row) + [n] for row in self.act]
        return GSet(self.group, act, n, list(self.labels) + ["+"], check=False)

    def unbased(self) -> "GSet":
        """Forget the basepoint flag (the point stays)."""
        return GSet(self.group, self.act, None, self.labels, check=False)

    def disjoint_union(self, other: "GSet") -> "GSet":
        if other.group is not self.group:
            raise PreconditionError("different groups")
        n = self.size
        act = [list(a) + [x + n for x in b] for a, b in zip(self.act, other.act)]
        return GSet(self.group, act, None, list(self.labels) + list(other.labels), check=False)

    # orbits and stabilizers -----------------------------------------------

    @cached_property
    def orbits(self) -> tuple[tuple[int, ...], ...]:
        """Orbits sorted by smallest point, each listed in increasing order."""
        seen: set[int] = set()
        out = []
        for x in self.points:
            if x in seen:
                continue
            orb = sorted({row[x] for row in self.act})
            seen.update(orb)
            out.append(tuple(orb))
        return tuple(out)

    @cached_property
    def orbit_of(self) -> tuple[int, ...]:
        res = [0] * self.size
        for i, o in enumerate(self.orbits):
            for x in o:
                res[x] = i
        return tuple(res)

    def stabilizer(self, x: int) -> Subgroup:
        return Subgroup(self.group, frozenset(g for g in self.group.elements if self.act[g][x] == x), check=False)

    def fixed_points(self, h: Subgroup | Iterable[int]) -> frozenset[int]:
        elems = h.members if isinstance(h, Subgroup) else list(h)
        return frozenset(x for x in self.points if all(self.act[g][x] == x for g in elems))

    def image(self, g: int, subset: Iterable[int]) -> frozenset[int]:
        row = self.act[g]
        return frozenset(row[x] for x in subset)

    def orbit_types(self) -> list[int]:
        """Conjugacy-class id of the stabilizer of each orbit (in orbit order)."""
        return [self.group.class_id(self.stabilizer(o[0])) for o in self.orbits]

    def iso_key(self) -> tuple[int, ...]:
        """Sorted multiset of stabilizer class ids: a complete isomorphism invariant."""
        return tuple(sorted(self.orbit_types()))

    def is_isomorphic(self, other: "GSet") -> bool:
        return self.group is other.group and self.iso_key() == other.iso_key()

    def restrict(self, h: Subgroup) -> "GSet":
        """Restriction to ``H``, as a G-set over ``H`` viewed as its own group."""
        hg, emb = h.as_group()
        act = [self.act[x] for x in emb]
        return GSet(hg, act, self.basepoint, self.labels, check=False)

    def sub(self, subset: Iterable[int]) -> "GSet":
        """The invariant subset as a G-set (points renumbered in order)."""
        pts = sorted(set(subset))
        pos = {x: i for i, x in enumerate(pts)}
        try:
            act = [[pos[row[x]] for x in pts] for row in self.act]
        except KeyError as exc:
            raise PreconditionError("subset is not invariant") from exc
        bp = pos.get(self.basepoint) if self.basepoint is not None else None
        return GSet(self.group, act, bp, [self.labels[x] for x in pts], check=False)

    def key_label(self) -> str:
        return iso_key_label(self.iso_key())


def iso_key_label(key: Sequence[int]) -> str:
    """Readable label of an iso class: ``2*G/H0+G/H1`` style, ``0`` for the empty set."""
    if not key:
        return "0"
    parts = []
    for c in sorted(set(key)):
        m = list(key).count(c)
        parts.append(f"{m}*G/H{c}" if m > 1 else f"G/H{c}")
    return "+".join(parts)


# ---------------------------------------------------------------------------
# maps


@dataclass(frozen=True)
class EquivariantMap:
    source: GSet
    target: GSet
    mapping: tuple[int, ...]

    def __post_init__(self) -> None:
        s, t = self.source, self.target
        if s.group is not t.group:
            raise ValidationError("source and target have different groups")
        if len(self.mapping) != s.size:
            raise ValidationError("map needs one image per source point")
        for g in s.group.elements:
            for x in s.points:
                if self.mapping[s.act[g][x]] != t.act[g][self.mapping[x]]:
                    raise ValidationError("map is not equivariant", {"element": g, "point": x})

    def orbit_map(self) -> tuple[int, ...]:
        return tuple(self.target.orbit_of[self.mapping[o[0]]] for o in self.source.orbits)


def is_injective_on_orbits(f: EquivariantMap) -> bool:
    om = f.orbit_map()
    return len(set(om)) == len(om)


def orbit_decomposition(j: GSet) -> list[tuple[int, ...]]:
    return list(j.orbits)


def fixed_points(j: GSet, h: Subgroup) -> frozenset[int]:
    return j.fixed_points(h)


def quotient_gset(j: GSet, h: Subgroup) -> tuple[GSet, EquivariantMap]:
    """``J/H`` for normal ``H`` with its induced G-action, and the projection."""
    g = j.group
    if not g.is_normal(h):
        raise PreconditionError("quotient by a non-normal subgroup")
    seen: set[int] = set()
    classes = []
    for x in j.points:
        if x in seen:
            continue
        c = sorted({j.act[a][x] for a in h.members})
        seen.update(c)
        classes.append(c)
    which = {}
    for i, c in enumerate(classes):
        for x in c:
            which[x] = i
    act = [[which[j.act[a][c[0]]] for c in classes] for a in g.elements]
    bp = which[j.basepoint] if j.basepoint is not None else None
    labels = ["{" + ",".join(j.labels[x] for x in c) + "}" for c in classes]
    q = GSet(g, act, bp, labels, check=False)
    proj = EquivariantMap(j, q, tuple(which[x] for x in j.points))
    return q, proj


def _match(adj: list[list[int]], n_right: int) -> bool:
    """Is there a matching saturating the left side?"""
    owner = [-1] * n_right

    def augment(u: int, seen: list[bool]) -> bool:
        for v in adj[u]:
            if seen[v]:
                continue
            seen[v] = True
            if owner[v] == -1 or augment(owner[v], seen):
                owner[v] = u
                return True
        return False

    return all(augment(u, [False] * n_right) for u in range(len(adj)))


def tree_leq(k: GSet, j: GSet) -> bool:
    """Is there a G-map ``K -> J`` that is injective on orbits?

    An orbit ``G/A`` maps to ``G/B`` iff ``A`` is subconjugate to ``B``; an
    orbit-injective map is then a matching of orbits.
    """
    if k.group is not j.group:
        raise PreconditionError("different groups")
    sub = k.group.subconjugacy
    kt = k.orbit_types()
    jt = j.orbit_types()
    if len(kt) > len(jt):
        return False
    adj = [[b for b, tb in enumerate(jt) if sub[ta][tb]] for ta in kt]
    return _match(adj, len(jt))


def gset_from_key(group: FiniteGroup, key: Sequence[int], basepoint: bool = False) -> GSet:
    return GSet.from_orbits(group, [group.class_rep(c) for c in key], basepoint)


def enumerate_gset_iso_classes(group: FiniteGroup, max_size: int, max_orbits: int | None = None) -> list[GSet]:
    """One G-set per iso class of size ``<= max_size`` (the empty set included).

    Sorted by size, then number of orbits, then iso key.
    """
    if max_size > MAX_ISO_SIZE:
        raise SizeBoundError(f"iso-class enumeration is limited to size {MAX_ISO_SIZE}")
    sizes = [group.order // len(group.class_rep(c)) for c in range(len(group._classes))]
    keys: list[tuple[int, ...]] = []
    top = max_size if max_orbits is None else min(max_size, max_orbits)
    for r in range(0, top + 1):
        for combo in combinations_with_replacement(range(len(sizes)), r):
            if sum(sizes[c] for c in combo) <= max_size:
                keys.append(combo)
    keys.sort(key=lambda t: (sum(sizes[c] for c in t), len(t), t))
    return [gset_from_key(group, key) for key in keys]


# ---------------------------------------------------------------------------
# text input


def parse_gset(group: FiniteGroup, data: dict) -> GSet:
    """Build a G-set from a JSON-style description.

    ``{"orbits": [<orbit>, ...], "basepoint": bool}`` where each orbit is a
    subgroup spec string or ``{"stabilizer": spec, "count": n}``.  Subgroup
    specs: ``1`` (trivial), ``G`` (whole group), ``#i`` (i-th subgroup in
    canonical order) or ``<c1, c2, ...>`` (generated by permutations in cycle
    notation, for permutation groups).
    """
    if not isinstance(data, dict) or "orbits" not in data:
        raise InvalidInputError("G-set description needs an 'orbits' list")
    stabs: list[Subgroup] = []
    for entry in data["orbits"]:
        if isinstance(entry, str):
            spec, count = entry, 1
        elif isinstance(entry, dict):
            spec, count = entry.get("stabilizer"), entry.get("count", 1)
        else:
            raise InvalidInputError(f"bad orbit entry {entry!r}")
        if not isinstance(count, int) or count < 0:
            raise InvalidInputError("orbit count must be a non-negative integer")
        stabs.extend([parse_subgroup(group, str(spec))] * count)
    bp = data.get("basepoint", False)
    if not isinstance(bp, bool):
        raise InvalidInputError("basepoint must be true or false")
    return GSet.from_orbits(group, stabs, basepoint=bp)


def parse_subgroup(group: FiniteGroup, spec: str) -> Subgroup:
    from .groups import enumerate_subgroups, parse_cycles

    s = spec.strip()
    if s == "1":
        return group.trivial_subgroup
    if s.upper() == "G":
        return group.whole
    if s.startswith("#"):
        subs = enumerate_subgroups(group)
        try:
            i = int(s[1:])
        except ValueError as exc:
            raise InvalidInputError(f"bad subgroup index {s!r}") from exc
        if not 0 <= i < len(subs):
            raise InvalidInputError(f"subgroup index {i} out of range (0..{len(subs) - 1})")
        return subs[i]
    if s.startswith("<") and s.endswith(">"):
        if group.perms is None:
            raise InvalidInputError("generator specs need a permutation group")
        degree = len(group.perms[0])
        index = {p: i for i, p in enumerate(group.perms)}
        gens = []
        inner = s[1:-1].strip()
        # split on commas that separate whole permutations
        chunks = []
        depth = 0
        cur = ""
        for ch in inner:
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            if ch == "," and depth == 0:
                chunks.append(cur)
                cur = ""
            else:
                cur += ch
        if cur.strip():
            chunks.append(cur)
        for c in chunks:
            p = parse_cycles(c, degree)
            if p not in index:
                raise InvalidInputError(f"{c.strip()} is not an element of the group")
            gens.append(index[p])
        return group.generate(gens)
    raise InvalidInputError(f"unknown subgroup spec {spec!r}")
