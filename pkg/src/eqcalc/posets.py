"""Finite posets with a group action.

Objects are kept in a linear extension (``i < j`` in the order implies
``i < j`` as indices), and the order is stored as bitmasks of up-sets.
Power posets use frozensets of points as objects; for ``J_+`` the basepoint
is the last point, ``J.size``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable, Hashable, Iterable, Iterator, Sequence

from .errors import PreconditionError, ValidationError
from .groups import FiniteGroup, Subgroup
from .gsets import GSet


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class GPoset:
    """A finite poset, optionally with an action of a subgroup of ``group``.

    ``action[g]`` is a tuple mapping object index to object index, for each
    element ``g`` of the acting subgroup (given as parent-group element ids).
    """

    def __init__(self, objects: Sequence[Hashable], leq: Callable[[Hashable, Hashable], bool],
                 group: FiniteGroup | None = None, action: dict[int, Sequence[int]] | None = None,
                 acting: Subgroup | None = None, check: bool = False,
                 act_fn: Callable[[int, Hashable], Hashable] | None = None) -> None:
        objs = list(objects)
        n = len(objs)
        rel = [[leq(a, b) for b in objs] for a in objs]
        # linear extension: sort by size of the down-set
        down = [sum(rel[j][i] for j in range(n)) for i in range(n)]
        order = sorted(range(n), key=lambda i: (down[i], i))
        self.objects: tuple = tuple(objs[i] for i in order)
        self.index = {o: i for i, o in enumerate(self.objects)}
        if len(self.index) != n:
            raise ValidationError("duplicate objects")
        up = []
        for a in order:
            m = 0
            for pos, b in enumerate(order):
                if rel[a][b]:
                    m |= 1 << pos
            up.append(m)
        self.up = up
        self.group = group
        self.acting = acting
        if act_fn is not None and group is not None:
            elems = sorted(acting.members) if acting is not None else list(group.elements)
            action = {g: [self.index[act_fn(g, o)] for o in self.objects] for g in elems}
        elif action is not None:
            # perms are given in input indexing
            inv = {old: new for new, old in enumerate(order)}
            action = {g: [inv[perm[order[i]]] for i in range(n)] for g, perm in action.items()}
        self.action = {g: tuple(p) for g, p in (action or {}).items()}
        if check:
            self.validate()

    @classmethod
    def _raw(cls, objects: tuple, up: list[int], group, action, acting) -> "GPoset":
        p = cls.__new__(cls)
        p.objects = objects
        p.index = {o: i for i, o in enumerate(objects)}
        p.up = up
        p.group = group
        p.action = action
        p.acting = acting
        return p

    # order ----------------------------------------------------------------

    def __len__(self) -> int:
        return len(self.objects)

    def __repr__(self) -> str:
        return f"GPoset({len(self)} objects)"

    def leq(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    def less(self, i: int, j: int) -> bool:
        return i != j and self.leq(i, j)

    def strict_up(self, i: int) -> int:
        return self.up[i] & ~(1 << i)

    @property
    def down(self) -> list[int]:
        cached = self.__dict__.get("_down")
        if cached is None:
            cached = [0] * len(self)
            for i, m in enumerate(self.up):
                for j in _bits(m):
                    cached[j] |= 1 << i
            self.__dict__["_down"] = cached
        return cached

    def above(self, i: int) -> list[int]:
        return list(_bits(self.strict_up(i)))

    def covers(self) -> list[tuple[int, int]]:
        out = []
        for i in range(len(self)):
            su = self.strict_up(i)
            reach = 0
            for k in _bits(su):
                reach |= self.strict_up(k)
            out.extend((i, j) for j in _bits(su & ~reach))
        return out

    def is_initial(self, i: int) -> bool:
        return self.up[i] == (1 << len(self)) - 1

    def initial_objects(self) -> list[int]:
        return [i for i in range(len(self)) if self.is_initial(i)]

    def chains(self, starts: Iterable[int] | None = None, within: int | None = None) -> Iterator[tuple[int, ...]]:
        """Strictly increasing chains (non-degenerate nerve simplices).

        ``starts`` restricts the first element; ``within`` is a bitmask of
        allowed objects.
        """
        allowed = (1 << len(self)) - 1 if within is None else within
        first = range(len(self)) if starts is None else starts
        up = self.up
        stack: list[tuple[int, ...]] = []
        for s in first:
            if not allowed >> s & 1:
                continue
            stack.append((s,))
            while stack:
                ch = stack.pop()
                yield ch
                nxt = up[ch[-1]] & ~(1 << ch[-1]) & allowed
                for j in sorted(_bits(nxt), reverse=True):
                    stack.append(ch + (j,))

    def validate(self) -> None:
        n = len(self)
        for i in range(n):
            if not self.leq(i, i):
                raise ValidationError("order is not reflexive", {"object": repr(self.objects[i])})
            for j in _bits(self.strict_up(i)):
                if self.leq(j, i):
                    raise ValidationError("order is not antisymmetric")
                if self.up[j] & ~self.up[i]:
                    raise ValidationError("order is not transitive")
        if self.group is None or not self.action:
            return
        g = self.group
        for a, perm in self.action.items():
            if sorted(perm) != list(range(n)):
                raise ValidationError("action map is not a bijection", {"element": a})
            for i in range(n):
                for j in _bits(self.up[i]):
                    if not self.leq(perm[i], perm[j]):
                        raise ValidationError("action does not preserve the order", {"element": a})
        if g.identity in self.action and self.action[g.identity] != tuple(range(n)):
            raise ValidationError("identity does not act trivially")
        for a, pa in self.action.items():
            for b, pb in self.action.items():
                ab = g.mul(a, b)
                if ab in self.action and any(self.action[ab][i] != pa[pb[i]] for i in range(n)):
                    raise ValidationError("action does not compose", {"pair": (a, b)})

    # group action -----------------------------------------------------------

    def act(self, g: int, i: int) -> int:
        return self.action[g][i]

    def fixed_objects(self, h: Subgroup | Iterable[int]) -> list[int]:
        elems = h.members if isinstance(h, Subgroup) else list(h)
        missing = [g for g in elems if g not in self.action]
        if missing:
            raise PreconditionError("subgroup does not act on this poset")
        return [i for i in range(len(self)) if all(self.action[g][i] == i for g in elems)]

    def subposet(self, indices: Iterable[int], keep_action: bool = True) -> "GPoset":
        """Full subposet on ``indices``; the action is kept for elements that preserve it."""
        idx = sorted(set(indices))
        pos = {i: k for k, i in enumerate(idx)}
        up = []
        for i in idx:
            m = 0
            for j in _bits(self.up[i]):
                if j in pos:
                    m |= 1 << pos[j]
            up.append(m)
        action = {}
        if keep_action:
            s = set(idx)
            for g, perm in self.action.items():
                if all(perm[i] in s for i in idx):
                    action[g] = tuple(pos[perm[i]] for i in idx)
        return GPoset._raw(tuple(self.objects[i] for i in idx), up, self.group, action, None)

    def fixed_subposet(self, h: Subgroup) -> "GPoset":
        return self.subposet(self.fixed_objects(h))

    # export ---------------------------------------------------------------

    def to_dot(self, name: str = "poset", label: Callable[[Hashable], str] | None = None) -> str:
        lab = label or default_label
        lines = [f'digraph "{name}" {{', "  rankdir=BT;"]
        for i, o in enumerate(self.objects):
            lines.append(f'  n{i} [label="{lab(o)}"];')
        for i, j in self.covers():
            lines.append(f"  n{i} -> n{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def default_label(o: Hashable) -> str:
    if isinstance(o, frozenset):
        return "{" + ",".join(str(x) for x in sorted(o)) + "}"
    if isinstance(o, tuple):
        return "(" + ",".join(default_label(x) for x in o) + ")"
    return str(o)


def subset_label(j: GSet) -> Callable[[Hashable], str]:
    def lab(o: Hashable) -> str:
        if isinstance(o, frozenset):
            return "{" + ",".join(j.labels[x] for x in sorted(o)) + "}"
        if isinstance(o, tuple):
            return "(" + ",".join(lab(x) for x in o) + ")"
        return str(o)
    return lab


# ---------------------------------------------------------------------------
# power posets and star categories


def subsets(points: Iterable[int], min_size: int = 0) -> list[frozenset[int]]:
    pts = sorted(points)
    out = []
    for r in range(min_size, len(pts) + 1):
        out.extend(frozenset(c) for c in combinations(pts, r))
    return out


def _subset_poset(j: GSet, objs: list[frozenset[int]]) -> GPoset:
    g = j.group
    objset = set(objs)
    acting = [a for a in g.elements if all(j.image(a, s) in objset for s in objs)]
    sub = Subgroup(g, frozenset(acting), check=False)
    return GPoset(objs, lambda a, b: a <= b, group=g, acting=sub, act_fn=lambda a, s: j.image(a, s))


def power_poset(j: GSet, based: bool = False) -> GPoset:
    """``P(J)`` or, with ``based``, ``P(J_+)`` (the basepoint is point ``J.size``)."""
    jj = j.plus() if based else j
    return _subset_poset(jj, subsets(jj.points))


def plus(j: GSet) -> GSet:
    return j if j.basepoint is not None else j.plus()


def star_objects(j: GSet, u: Iterable[int] | None = None) -> list[frozenset[int]]:
    """Objects of ``St(U)``: the union over orbits of ``P(o_+ ∩ U)`` minus ``o_+``."""
    jp = plus(j)
    bp = jp.basepoint
    uu = frozenset(jp.points) if u is None else frozenset(u)
    if not uu <= frozenset(jp.points):
        raise PreconditionError("U is not a subset of J_+")
    found: set[frozenset[int]] = set()
    for o in j.orbits:
        if bp in o:
            continue
        op = frozenset(o) | {bp}
        for s in subsets(op & uu):
            if s != op:
                found.add(s)
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def star_category(j: GSet, u: Iterable[int] | None = None) -> GPoset:
    """``St(U)`` as a subposet of ``P(J_+)``; ``u=None`` means ``U = J_+``."""
    return _subset_poset(plus(j), star_objects(j, u))


def outside_star(j: GSet) -> list[frozenset[int]]:
    """Subsets ``S`` of ``J_+`` not in ``St(J_+)``, sorted by size then members."""
    jp = plus(j)
    st = set(star_objects(j))
    return [s for s in subsets(jp.points) if s not in st]


# ---------------------------------------------------------------------------
# homotopy types of the vertices of the generating cube


@dataclass(frozen=True)
class HomotopyTypeExpr:
    """A symbolic homotopy type of a vertex ``Λ_U``.

    ``variant`` is ``"Contractible"``, ``"JoinWithPoints"`` (with ``m`` cone
    points) or ``"WedgeOfOrbitSuspensions"`` (with the orbit indices and
    sizes being suspended by).
    """

    variant: str
    m: int = 0
    orbits: tuple[int, ...] = ()
    orbit_sizes: tuple[int, ...] = ()

    def predicted_homology(self, base: dict[int, int]) -> dict[int, int]:
        """Reduced homology ranks, given the ranks of the input complex ``c``."""
        out: dict[int, int] = {}
        if self.variant == "Contractible":
            return out
        if self.variant == "JoinWithPoints":
            if self.m == 0:
                return dict(base)
            for n, r in base.items():
                if (self.m - 1) * r:
                    out[n + 1] = (self.m - 1) * r
            return out
        for size in self.orbit_sizes:
            for n, r in base.items():
                out[n + size] = out.get(n + size, 0) + r
        return {n: r for n, r in out.items() if r}

    def connectivity(self, base: int | Callable[[Subgroup], int], k: Subgroup | None = None,
                     j: GSet | None = None) -> float:
        """Lower bound for the connectivity of the ``K``-fixed points.

        ``base`` is the connectivity of ``c^K`` (an int, or a function of
        ``K``); for wedges each orbit ``o`` contributes ``|o/K|`` suspensions,
        so ``j`` is needed when ``K`` is nontrivial.
        """
        b = base(k) if callable(base) else base
        if self.variant == "Contractible":
            return float("inf")
        if self.variant == "JoinWithPoints":
            if self.m == 0:
                return b
            if self.m == 1:
                return float("inf")
            return b + 1
        if not self.orbits:
            return float("inf")
        best = float("inf")
        for oi, size in zip(self.orbits, self.orbit_sizes):
            if k is None or j is None:
                shift = size
            else:
                o = set(j.orbits[oi])
                seen: set[int] = set()
                shift = 0
                for x in sorted(o):
                    if x not in seen:
                        shift += 1
                        seen |= {j.act[a][x] for a in k.members}
            best = min(best, b + shift)
        return best

    def to_json(self) -> dict:
        return {"variant": self.variant, "m": self.m, "orbits": list(self.orbits),
                "orbit_sizes": list(self.orbit_sizes)}


def lambda_classify(j: GSet, u: Iterable[int]) -> HomotopyTypeExpr:
    """Homotopy type of the ``U``-vertex by the three-case orbit formula."""
    jp = plus(j)
    bp = jp.basepoint
    uu = frozenset(u)
    if not uu <= frozenset(jp.points):
        raise PreconditionError("U is not a subset of J_+")
    orbs = [o for o in j.orbits if bp not in o]
    if bp not in uu:
        m = sum(1 for o in orbs if uu & set(o))
        return HomotopyTypeExpr("JoinWithPoints", m=m)
    full = [i for i, o in enumerate(orbs) if set(o) <= uu]
    if not full:
        return HomotopyTypeExpr("Contractible")
    return HomotopyTypeExpr("WedgeOfOrbitSuspensions", orbits=tuple(full),
                            orbit_sizes=tuple(len(orbs[i]) for i in full))


# ---------------------------------------------------------------------------
# covers


@dataclass
class EquivariantCover:
    """Subposets ``pieces[x]`` of ``poset`` indexed by the points of ``index``."""

    poset: GPoset
    index: GSet
    pieces: tuple[frozenset[int], ...]
    index_map: Callable[[int], int] | None = field(default=None, repr=False)

    def intersection(self, points: Iterable[int]) -> frozenset[int]:
        res = frozenset(range(len(self.poset)))
        for x in points:
            res &= self.pieces[x]
        return res


def cover_problems(i: GPoset, cover: EquivariantCover) -> list[str]:
    """Reasons why ``cover`` is not an equivariant cover (empty if it is one)."""
    probs: list[str] = []
    n = len(i)
    pieces = cover.pieces
    if len(pieces) != cover.index.size:
        return ["one piece per index point is required"]
    union = frozenset().union(*pieces) if pieces else frozenset()
    if union != frozenset(range(n)):
        missing = sorted(set(range(n)) - union)
        probs.append(f"objects not covered: {[default_label(i.objects[k]) for k in missing]}")
    # every relation lies in a piece
    for a in range(n):
        for b in _bits(i.strict_up(a)):
            if not any(a in p and b in p for p in pieces):
                probs.append(f"relation {default_label(i.objects[a])} <= {default_label(i.objects[b])} in no piece")
                break
    # unions of pieces are closed under composition
    for x, px in enumerate(pieces):
        for y, py in enumerate(pieces):
            for a in px:
                for b in _bits(i.strict_up(a)):
                    if b not in px:
                        continue
                    for c in _bits(i.strict_up(b)):
                        if c not in py or b not in py:
                            continue
                        if not ((a in px and c in px) or (a in py and c in py)):
                            probs.append(f"pieces {x},{y} not closed under composition")
                            break
    # equivariance
    grp = cover.index.group
    if grp is not None and i.action:
        for g in grp.elements:
            if g not in i.action:
                continue
            for x, px in enumerate(pieces):
                gx = cover.index.act[g][x]
                if not all(i.action[g][a] in pieces[gx] for a in px):
                    probs.append(f"element {g} does not map piece {x} into piece {gx}")
    return probs


def validate_equivariant_cover(i: GPoset, cover: EquivariantCover) -> bool:
    return not cover_problems(i, cover)


def trivial_cover(i: GPoset, group: FiniteGroup) -> EquivariantCover:
    """The one-piece cover indexed by a single fixed point."""
    idx = GSet.trivial(group, 1)
    return EquivariantCover(i, idx, (frozenset(range(len(i))),))


def product_poset(p: GPoset, k: int) -> GPoset:
    """``p^k`` with the diagonal action; objects are k-tuples of objects."""
    objs = list(product(p.objects, repeat=k))

    def leq(a: tuple, b: tuple) -> bool:
        return all(p.leq(p.index[x], p.index[y]) for x, y in zip(a, b))

    if p.group is None or not p.action:
        return GPoset(objs, leq)

    def act(g: int, t: tuple) -> tuple:
        return tuple(p.objects[p.action[g][p.index[x]]] for x in t)

    acting = Subgroup(p.group, frozenset(p.action), check=False)
    return GPoset(objs, leq, group=p.group, acting=acting, act_fn=act)


def delooping_cover(j: GSet, orbit: Sequence[int] | int, k: int) -> EquivariantCover:
    """The cover ``{A^k_l}`` of ``P_0(J_+)^k`` indexed by ``o_+``.

    ``A^k_l`` (``l`` in ``o``) holds the tuples with some entry containing
    ``l``; ``A^k_+`` holds the tuples none of whose entries lies inside ``o``.
    """
    if k < 1:
        raise PreconditionError("k must be at least 1")
    jp = plus(j)
    bp = jp.basepoint
    o = tuple(j.orbits[orbit]) if isinstance(orbit, int) else tuple(sorted(orbit))
    if tuple(sorted(o)) not in j.orbits:
        raise PreconditionError("not an orbit of J")
    base = _subset_poset(jp, subsets(jp.points, 1))
    poset = base if k == 1 else product_poset(base, k)

    def entries(obj) -> tuple:
        return (obj,) if k == 1 else obj

    oset = frozenset(o)
    pieces = []
    for l in o:
        pieces.append(frozenset(i for i, obj in enumerate(poset.objects) if any(l in s for s in entries(obj))))
    pieces.append(frozenset(i for i, obj in enumerate(poset.objects) if all(not s <= oset for s in entries(obj))))
    index = jp.sub(list(o) + [bp])
    return EquivariantCover(poset, index, tuple(pieces))


def star_orbit_cover(j: GSet) -> EquivariantCover:
    """``St(J_+)`` covered by the punctured orbit cubes ``P_1(o_+)``, indexed by ``J/G``."""
    st = star_category(j)
    bp = plus(j).basepoint
    orbs = [o for o in j.orbits if bp not in o]
    pieces = []
    for o in orbs:
        op = frozenset(o) | {bp}
        pieces.append(frozenset(i for i, s in enumerate(st.objects) if s <= op and s != op))
    index = GSet.trivial(j.group, len(orbs))
    return EquivariantCover(st, index, tuple(pieces))


# ---------------------------------------------------------------------------
# invariant initial objects and the comma poset from the strong cocartesian proof


def has_invariant_initial(c: GPoset, h: Subgroup) -> Hashable | None:
    """An ``H``-fixed object initial in ``C`` and in each ``C^K`` for ``K <= H``."""
    from .groups import enumerate_subgroups

    fixed = set(c.fixed_objects(h))
    for i in sorted(fixed):
        if not c.is_initial(i):
            continue
        ok = True
        for k in enumerate_subgroups(h.parent):
            if not k.members <= h.members:
                continue
            fk = c.fixed_objects(k)
            if i not in fk or not all(c.leq(i, x) for x in fk):
                ok = False
                break
        if ok:
            return c.objects[i]
    return None


def star_comma_poset(j: GSet, s: Iterable[int], v: Iterable[int] | None = None) -> GPoset:
    """Pairs ``(U, W)`` with ``U`` a proper subset of ``S`` and ``W`` in ``St(U)``.

    Ordered componentwise by inclusion.  With ``v`` given, only the pairs
    with ``V ⊆ W`` are kept (the under-category of the projection at ``V``).
    The acting group is the setwise stabilizer of ``S`` (and of ``V``).
    """
    jp = plus(j)
    ss = frozenset(s)
    vv = frozenset(v) if v is not None else None
    objs = []
    for u in subsets(ss):
        if u == ss:
            continue
        for w in star_objects(j, u):
            if vv is None or vv <= w:
                objs.append((u, w))
    g = j.group
    stab = [a for a in g.elements if jp.image(a, ss) == ss and (vv is None or jp.image(a, vv) == vv)]
    acting = Subgroup(g, frozenset(stab), check=False)
    return GPoset(objs, lambda a, b: a[0] <= b[0] and a[1] <= b[1], group=g, acting=acting,
                  act_fn=lambda a, t: (jp.image(a, t[0]), jp.image(a, t[1])))


def fixed_poset_comparison(j: GSet, h: Subgroup) -> bool:
    """Check ``P(J)^H ≅ P(J/H)`` via the image map, for normal ``H``."""
    from .gsets import quotient_gset

    q, proj = quotient_gset(j, h)
    fixed = power_poset(j).fixed_subposet(h)
    target = power_poset(q)
    img = [frozenset(proj.mapping[x] for x in s) for s in fixed.objects]
    if sorted(img, key=lambda s: (len(s), sorted(s))) != list(target.objects):
        return False
    pos = [target.index[s] for s in img]
    n = len(fixed)
    return all(fixed.leq(a, b) == target.leq(pos[a], pos[b]) for a in range(n) for b in range(n))
