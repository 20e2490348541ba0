"""Finite groups as multiplication tables.

Elements are the integers ``0..n-1``.  Groups built from permutations
order their elements by the lexicographic order of the permutation tuples,
so the identity is always element ``0``.  Subgroups are sorted by
``(order, sorted member tuple)``; every enumeration in the library follows
that order.
"""

from __future__ import annotations

import re
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

from .errors import InvalidInputError, SizeBoundError, ValidationError

MAX_ORDER = 64  # subgroup enumeration bound


class FiniteGroup:
    """A finite group given by its Cayley table."""

    def __init__(self, table: Sequence[Sequence[int]], identity: int = 0, name: str | None = None,
                 labels: Sequence[str] | None = None, perms: Sequence[tuple[int, ...]] | None = None,
                 validate: bool = True) -> None:
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        self.identity = identity
        self.name = name
        self.labels = tuple(labels) if labels is not None else None
        self.perms = tuple(perms) if perms is not None else None
        if validate:
            self.validate()
        inv = [0] * self.order
        for a in range(self.order):
            row = self.table[a]
            for b in range(self.order):
                if row[b] == identity:
                    inv[a] = b
                    break
        self._inv = tuple(inv)

    # construction ----------------------------------------------------------

    @classmethod
    def from_permutations(cls, gens: Iterable[Sequence[int]], degree: int, name: str | None = None) -> "FiniteGroup":
        """Close a set of permutations of ``0..degree-1`` into a group."""
        ident = tuple(range(degree))
        gens = [tuple(g) for g in gens]
        for g in gens:
            if sorted(g) != list(ident):
                raise InvalidInputError(f"not a permutation of {degree} points: {g}")
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for p in frontier:
                for g in gens:
                    q = tuple(g[p[i]] for i in range(degree))
                    if q not in seen:
                        seen.add(q)
                        nxt.append(q)
                        if len(seen) > 10 * MAX_ORDER * MAX_ORDER:
                            raise SizeBoundError("permutation group too large")
            frontier = nxt
        elems = sorted(seen)
        index = {p: i for i, p in enumerate(elems)}
        # (a*b)(x) = a(b(x)): apply b first
        table = [[index[tuple(a[b[x]] for x in range(degree))] for b in elems] for a in elems]
        labels = [cycle_string(p) for p in elems]
        return cls(table, index[ident], name=name, labels=labels, perms=elems, validate=False)

    # basic structure -------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.table)

    def __len__(self) -> int:
        return self.order

    @property
    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self._inv[a]

    def conj(self, g: int, x: int) -> int:
        """``g x g^-1``."""
        return self.table[self.table[g][x]][self._inv[g]]

    def label(self, a: int) -> str:
        if self.labels is not None:
            return self.labels[a]
        return str(a)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name or '?'}, order={self.order})"

    def validate(self) -> None:
        n = len(self.table)
        if n == 0:
            raise ValidationError("a group needs at least one element")
        for i, row in enumerate(self.table):
            if len(row) != n:
                raise ValidationError("table is not square", {"row": i})
            for x in row:
                if not 0 <= x < n:
                    raise ValidationError("table entry out of range", {"row": i, "value": x})
        e = self.identity
        for a in range(n):
            if self.table[e][a] != a or self.table[a][e] != a:
                raise ValidationError("identity is not two-sided", {"element": a})
            if e not in self.table[a]:
                raise ValidationError("element has no inverse", {"element": a})
        t = self.table
        for a, b, c in product(range(n), repeat=3):
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise ValidationError("associativity fails", {"triple": (a, b, c)})

    @cached_property
    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(a))

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.table[x][a]
            k += 1
        return k

    # subgroups -------------------------------------------------------------

    def closure(self, gens: Iterable[int]) -> frozenset[int]:
        gens = [g for g in gens if g != self.identity]
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.table[x][g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def subgroup(self, members: Iterable[int], check: bool = True) -> "Subgroup":
        return Subgroup(self, frozenset(members), check=check)

    def generate(self, gens: Iterable[int]) -> "Subgroup":
        return Subgroup(self, self.closure(gens), check=False)

    @cached_property
    def trivial_subgroup(self) -> "Subgroup":
        return Subgroup(self, frozenset([self.identity]), check=False)

    @cached_property
    def whole(self) -> "Subgroup":
        return Subgroup(self, frozenset(self.elements), check=False)

    @cached_property
    def _subgroups(self) -> tuple["Subgroup", ...]:
        if self.order > MAX_ORDER:
            raise SizeBoundError(f"subgroup enumeration is limited to order {MAX_ORDER}")
        cyclic = {g: self.closure([g]) for g in self.elements}
        found = {frozenset([self.identity])}
        frontier = [frozenset([self.identity])]
        while frontier:
            nxt = []
            for s in frontier:
                for g in self.elements:
                    if g in s or cyclic[g] <= s:
                        continue
                    t = self.closure(list(s) + [g])
                    if t not in found:
                        found.add(t)
                        nxt.append(t)
            frontier = nxt
        subs = sorted(found, key=lambda m: (len(m), sorted(m)))
        return tuple(Subgroup(self, m, check=False) for m in subs)

    def subgroup_index(self, h: "Subgroup") -> int:
        """Position of ``h`` in the canonical subgroup list."""
        return self._subgroup_pos[h.members]

    @cached_property
    def _subgroup_pos(self) -> dict[frozenset[int], int]:
        return {h.members: i for i, h in enumerate(self._subgroups)}

    def conjugate(self, h: "Subgroup", g: int) -> "Subgroup":
        return Subgroup(self, frozenset(self.conj(g, x) for x in h.members), check=False)

    def normalizer(self, h: "Subgroup") -> "Subgroup":
        return Subgroup(self, frozenset(g for g in self.elements
                                        if all(self.conj(g, x) in h.members for x in h.members)),
                        check=False)

    def is_normal(self, h: "Subgroup") -> bool:
        return all(self.conj(g, x) in h.members for g in self.elements for x in h.members)

    @cached_property
    def _classes(self) -> tuple[tuple["Subgroup", ...], ...]:
        classes: list[tuple[Subgroup, ...]] = []
        assigned: set[frozenset[int]] = set()
        for h in self._subgroups:
            if h.members in assigned:
                continue
            orbit = {self.conjugate(h, g).members for g in self.elements}
            assigned |= orbit
            members = sorted(orbit, key=lambda m: (len(m), sorted(m)))
            classes.append(tuple(Subgroup(self, m, check=False) for m in members))
        return tuple(classes)

    @cached_property
    def _class_of(self) -> dict[frozenset[int], int]:
        return {h.members: i for i, cl in enumerate(self._classes) for h in cl}

    def class_id(self, h: "Subgroup") -> int:
        """Index of the conjugacy class of ``h`` in ``conjugacy_classes_of_subgroups``."""
        return self._class_of[h.members]

    def class_rep(self, i: int) -> "Subgroup":
        return self._classes[i][0]

    def is_subconjugate(self, a: "Subgroup", b: "Subgroup") -> bool:
        """True iff some conjugate of ``a`` is contained in ``b``."""
        if len(b) % len(a):
            return False
        return any(self.conjugate(a, g).members <= b.members for g in self.elements)

    @cached_property
    def subconjugacy(self) -> tuple[tuple[bool, ...], ...]:
        """``subconjugacy[i][j]``: class ``i`` is subconjugate to class ``j``."""
        reps = [cl[0] for cl in self._classes]
        return tuple(tuple(any(h.members <= r.members for h in cl) for r in reps) for cl in self._classes)

    def element_string(self, a: int) -> str:
        return self.label(a)


class Subgroup:
    """A subgroup of a :class:`FiniteGroup`, stored as a member set."""

    __slots__ = ("parent", "members", "__weakref__")

    def __init__(self, parent: FiniteGroup, members: frozenset[int], check: bool = True) -> None:
        self.parent = parent
        self.members = frozenset(members)
        if check:
            self.validate()

    def validate(self) -> None:
        g = self.parent
        if g.identity not in self.members:
            raise ValidationError("subgroup does not contain the identity")
        for a in self.members:
            if g.inv(a) not in self.members:
                raise ValidationError("subgroup not closed under inverses", {"element": a})
            for b in self.members:
                if g.mul(a, b) not in self.members:
                    raise ValidationError("subgroup not closed under products", {"pair": (a, b)})

    def __len__(self) -> int:
        return len(self.members)

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, x: int) -> bool:
        return x in self.members

    def __iter__(self):
        return iter(sorted(self.members))

    def __le__(self, other: "Subgroup") -> bool:
        return self.members <= other.members

    def __lt__(self, other: "Subgroup") -> bool:
        return self.members < other.members

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent is other.parent and self.members == other.members

    def __hash__(self) -> int:
        return hash(self.members)

    def sort_key(self) -> tuple:
        return (len(self.members), sorted(self.members))

    def __repr__(self) -> str:
        return f"Subgroup(order={len(self)}, index={self.parent.subgroup_index(self)})"

    def generators(self) -> list[int]:
        """A small generating set, chosen greedily in element order."""
        gens: list[int] = []
        span = frozenset([self.parent.identity])
        for x in sorted(self.members):
            if x not in span:
                gens.append(x)
                span = self.parent.closure(gens)
        return gens

    def describe(self) -> str:
        g = self.parent
        if len(self) == 1:
            return "1"
        if len(self) == g.order:
            return "G"
        return "<" + ", ".join(g.label(x) for x in self.generators()) + ">"

    def as_group(self) -> tuple[FiniteGroup, list[int]]:
        """The subgroup as a group in its own right, plus the embedding.

        Element ``i`` of the returned group is ``embedding[i]`` in the parent.
        """
        cache = self.parent.__dict__.setdefault("_as_group_cache", {})
        hit = cache.get(self.members)
        if hit is not None:
            return hit[0], list(hit[1])
        elems = sorted(self.members)
        if self.parent.identity != elems[0]:
            elems.remove(self.parent.identity)
            elems.insert(0, self.parent.identity)
        pos = {x: i for i, x in enumerate(elems)}
        table = [[pos[self.parent.mul(a, b)] for b in elems] for a in elems]
        labels = [self.parent.label(x) for x in elems]
        perms = [self.parent.perms[x] for x in elems] if self.parent.perms else None
        sub = FiniteGroup(table, 0, name=None, labels=labels, perms=perms, validate=False)
        cache[self.members] = (sub, tuple(elems))
        return sub, elems


# ---------------------------------------------------------------------------
# public operations


def enumerate_subgroups(g: FiniteGroup) -> list[Subgroup]:
    """All subgroups, sorted by order and then by sorted member tuple."""
    return list(g._subgroups)


def conjugacy_classes_of_subgroups(g: FiniteGroup) -> list[list[Subgroup]]:
    """Conjugacy classes, ordered by their first (canonical) member."""
    return [list(cl) for cl in g._classes]


def normal_subgroups(g: FiniteGroup) -> list[Subgroup]:
    return [h for h in g._subgroups if g.is_normal(h)]


def cosets(g: FiniteGroup, h: Subgroup) -> list[frozenset[int]]:
    """Left cosets ``xH`` ordered by smallest element."""
    seen: set[int] = set()
    out = []
    for x in g.elements:
        if x in seen:
            continue
        c = frozenset(g.mul(x, y) for y in h.members)
        seen |= c
        out.append(c)
    return out


def quotient_group(g: FiniteGroup, n: Subgroup) -> FiniteGroup:
    """``G/N`` with cosets labelled by their smallest element."""
    if not g.is_normal(n):
        raise ValidationError("quotient by a non-normal subgroup")
    cs = cosets(g, n)
    which = {}
    for i, c in enumerate(cs):
        for x in c:
            which[x] = i
    reps = [min(c) for c in cs]
    table = [[which[g.mul(a, b)] for b in reps] for a in reps]
    labels = [g.label(r) + "N" if len(n) > 1 else g.label(r) for r in reps]
    name = None
    if g.name:
        name = g.name if len(n) == 1 else f"{g.name}/N"
    return FiniteGroup(table, which[g.identity], name=name, labels=labels, validate=False)


def weyl_group(g: FiniteGroup, h: Subgroup) -> FiniteGroup:
    """``N_G(H)/H``."""
    nh = g.normalizer(h)
    ng, emb = nh.as_group()
    pos = {x: i for i, x in enumerate(emb)}
    hh = ng.subgroup([pos[x] for x in h.members], check=False)
    return quotient_group(ng, hh)


def is_isomorphic(a: FiniteGroup, b: FiniteGroup) -> bool:
    """Brute-force isomorphism test for small groups (generator images search)."""
    if a.order != b.order:
        return False
    if sorted(a.element_order(x) for x in a.elements) != sorted(b.element_order(x) for x in b.elements):
        return False
    gens = a.whole.generators()
    orders = {x: b.element_order(x) for x in b.elements}
    cands = [[y for y in b.elements if orders[y] == a.element_order(x)] for x in gens]
    for images in product(*cands):
        m = {a.identity: b.identity}
        frontier = [a.identity]
        ok = True
        while frontier and ok:
            nxt = []
            for x in frontier:
                for gx, gy in zip(gens, images):
                    z = a.mul(x, gx)
                    w = b.mul(m[x], gy)
                    if z in m:
                        if m[z] != w:
                            ok = False
                            break
                    else:
                        m[z] = w
                        nxt.append(z)
                if not ok:
                    break
            frontier = nxt
        if ok and len(set(m.values())) == a.order:
            if all(m[a.mul(x, y)] == b.mul(m[x], m[y]) for x in a.elements for y in a.elements):
                return True
    return False


# ---------------------------------------------------------------------------
# cycle notation and the built-in catalog


def cycle_string(p: Sequence[int]) -> str:
    """Cycle notation on points ``1..n``; the identity is ``()``."""
    seen = set()
    parts = []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = p[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = p[j]
        parts.append("(" + " ".join(str(x + 1) for x in cyc) + ")")
    return "".join(parts) or "()"


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, degree: int | None = None) -> tuple[int, ...]:
    """Parse ``"(1 2 3)(4 5)"`` into a permutation tuple of ``0..degree-1``."""
    text = text.strip()
    if not text or _CYCLE_RE.sub("", text).replace(" ", "").replace(",", ""):
        raise InvalidInputError(f"malformed cycle notation: {text!r}")
    cycles = []
    for body in _CYCLE_RE.findall(text):
        pts = [t for t in re.split(r"[\s,]+", body.strip()) if t]
        try:
            cyc = [int(t) for t in pts]
        except ValueError as exc:
            raise InvalidInputError(f"non-integer point in {text!r}") from exc
        if any(x < 1 for x in cyc):
            raise InvalidInputError(f"points are numbered from 1: {text!r}")
        if len(set(cyc)) != len(cyc):
            raise InvalidInputError(f"repeated point in a cycle: {text!r}")
        cycles.append(cyc)
    top = max([x for c in cycles for x in c], default=0)
    n = degree if degree is not None else top
    if top > n:
        raise InvalidInputError(f"point {top} exceeds degree {n}")
    perm = list(range(n))
    # cycles compose right to left
    for cyc in reversed(cycles):
        step = list(range(n))
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            step[a - 1] = b - 1
        perm = [step[perm[i]] for i in range(n)]
    return tuple(perm)


def _quaternion_perms() -> list[tuple[int, ...]]:
    # elements (sign, unit) with unit in 1,i,j,k; index = 4*(sign<0) + unit
    unit_mul = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }

    def mul(x: int, y: int) -> int:
        sx, ux = (-1 if x >= 4 else 1), x % 4
        sy, uy = (-1 if y >= 4 else 1), y % 4
        s, u = unit_mul[(ux, uy)]
        s *= sx * sy
        return u + (4 if s < 0 else 0)

    return [tuple(mul(g, x) for x in range(8)) for g in (1, 2)]


def _catalog_generators() -> dict[str, tuple[list[tuple[int, ...]], int]]:
    cat: dict[str, tuple[list[tuple[int, ...]], int]] = {"C1": ([], 1)}
    for n in range(2, 7):
        cat[f"C{n}"] = ([tuple(list(range(1, n)) + [0])], n)
    cat["V4"] = ([parse_cycles("(1 2)(3 4)", 4), parse_cycles("(1 3)(2 4)", 4)], 4)
    cat["S3"] = ([parse_cycles("(1 2)", 3), parse_cycles("(1 2 3)", 3)], 3)
    cat["D4"] = ([parse_cycles("(1 2 3 4)", 4), parse_cycles("(1 3)", 4)], 4)
    cat["Q8"] = (_quaternion_perms(), 8)
    return cat


CATALOG_NAMES = ("C1", "C2", "C3", "C4", "C5", "C6", "V4", "S3", "D4", "Q8")

_ALIASES = {"1": "C1", "TRIVIAL": "C1", "KLEIN": "V4"}
_CACHE: dict[str, FiniteGroup] = {}


def catalog_group(name: str) -> FiniteGroup:
    """Look up a built-in group; accepts ``Cn``, ``Zn`` and ``Z/n`` spellings."""
    key = name.strip().upper().replace("Z/", "C")
    if key.startswith("Z") and key[1:].isdigit():
        key = "C" + key[1:]
    key = _ALIASES.get(key, key)
    if key not in CATALOG_NAMES:
        raise InvalidInputError(f"unknown catalog group {name!r}; known: {', '.join(CATALOG_NAMES)}")
    if key not in _CACHE:
        gens, degree = _catalog_generators()[key]
        _CACHE[key] = FiniteGroup.from_permutations(gens, degree, name=key)
    return _CACHE[key]


def parse_group_text(text: str) -> FiniteGroup:
    """Parse the group input format.

    Either a line ``catalog: <name>`` or a line ``permutations:`` followed
    by one generator per line in cycle notation on points ``1..n``.  An
    optional ``degree: <n>`` line fixes the number of points.  Blank lines
    and ``#`` comments are ignored.
    """
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise InvalidInputError("empty group description")
    head = lines[0].lower()
    if head.startswith("catalog:"):
        if len(lines) != 1:
            raise InvalidInputError("catalog form takes a single line")
        return catalog_group(lines[0].split(":", 1)[1])
    degree = None
    body = []
    seen_header = False
    for ln in lines:
        low = ln.lower()
        if low.startswith("degree:"):
            try:
                degree = int(ln.split(":", 1)[1])
            except ValueError as exc:
                raise InvalidInputError("degree must be an integer") from exc
            if degree < 1:
                raise InvalidInputError("degree must be positive")
        elif low.startswith("permutations:"):
            seen_header = True
            rest = ln.split(":", 1)[1].strip()
            if rest:
                body.append(rest)
        elif seen_header:
            body.append(ln)
        else:
            raise InvalidInputError(f"unexpected line {ln!r}")
    if not seen_header:
        raise InvalidInputError("expected 'catalog:' or 'permutations:'")
    perms = [parse_cycles(b) for b in body]
    n = degree if degree is not None else max([len(p) for p in perms], default=1)
    n = max(n, 1)
    gens = []
    for b in body:
        gens.append(parse_cycles(b, n))
    return FiniteGroup.from_permutations(gens, n, name="custom")


def load_group(spec: str) -> FiniteGroup:
    """A catalog name, or a path to a group input file."""
    from pathlib import Path

    p = Path(spec)
    if p.exists() and p.is_file():
        return parse_group_text(p.read_text(encoding="utf-8"))
    return catalog_group(spec)


def table_group(table: Sequence[Sequence[int]], identity: int = 0, name: str | None = None) -> FiniteGroup:
    """Build and validate a group from an explicit Cayley table."""
    return FiniteGroup(table, identity, name=name, validate=True)
