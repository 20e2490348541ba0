"""Poset-shaped diagrams of chain complexes, homotopy (co)limits and cubes.

Homotopy limits and colimits are the Bousfield-Kan totalizations over the
non-degenerate chains ``i0 < ... < ip`` of the shape:

* ``holim``: the product of ``D(ip)`` over all chains, an element of
  ``D(ip)_m`` sitting in total degree ``m - p``;
* ``hocolim``: the sum of ``D(i0)`` over all chains, an element of
  ``D(i0)_m`` sitting in total degree ``m + p``.

A cube is a diagram over a full power poset whose objects are frozensets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .chains import ChainComplex, ChainMap, cone, homology, is_quasi_isomorphism, zero_complex
from .errors import PreconditionError, ValidationError
from .gsets import GSet
from .linalg import Matrix
from .posets import GPoset, _bits, outside_star, plus, power_poset, star_category


class PosetDiagram:
    """A functor from a finite poset to chain complexes.

    ``maps`` must contain a chain map for every covering relation ``(i, j)``
    (object indices of ``shape``); other pairs are optional and, when
    present, are checked against the composites.  ``group_maps[g][i]`` is
    the structure map ``value(i) -> value(g i)``.
    """

    def __init__(self, shape: GPoset, values: Sequence[ChainComplex],
                 maps: Mapping[tuple[int, int], ChainMap],
                 group_maps: Mapping[int, Sequence[ChainMap]] | None = None,
                 check: bool = True) -> None:
        if len(values) != len(shape):
            raise ValidationError("one value per object is required",
                                  {"objects": len(shape), "values": len(values)})
        self.shape = shape
        self.values = list(values)
        self._given = dict(maps)
        self._cache: dict[tuple[int, int], ChainMap] = {}
        self.group_maps = {g: list(v) for g, v in (group_maps or {}).items()}
        if check:
            self.validate()

    def __len__(self) -> int:
        return len(self.shape)

    def value(self, i: int) -> ChainComplex:
        return self.values[i]

    def map(self, i: int, j: int) -> ChainMap:
        """The map ``value(i) -> value(j)`` for ``i <= j``."""
        if i == j:
            return ChainMap.identity(self.values[i])
        key = (i, j)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if key in self._given:
            f = self._given[key]
        else:
            if not self.shape.less(i, j):
                raise ValidationError("no morphism between these objects", {"pair": key})
            # first step along a covering relation towards j
            step = self._first_cover(i, j)
            f = self.map(step, j).compose(self._given[(i, step)])
        self._cache[key] = f
        return f

    def _first_cover(self, i: int, j: int) -> int:
        sh = self.shape
        between = sh.strict_up(i) & sh.down[j]
        for k in _bits(between):
            if (i, k) in self._given and not (sh.strict_up(i) & sh.down[k] & ~(1 << k)):
                return k
        raise ValidationError("missing map for a covering relation", {"pair": (i, j)})

    def validate(self) -> None:
        sh = self.shape
        for c in self.values:
            c.validate()
        for i, j in sh.covers():
            if (i, j) not in self._given:
                raise ValidationError("missing map for a covering relation",
                                      {"pair": (repr(sh.objects[i]), repr(sh.objects[j]))})
        for (i, j), f in self._given.items():
            if f.source is not self.values[i] and f.source.dims != self.values[i].dims:
                raise ValidationError("map source does not match the diagram", {"pair": (i, j)})
            if f.target is not self.values[j] and f.target.dims != self.values[j].dims:
                raise ValidationError("map target does not match the diagram", {"pair": (i, j)})
            f.validate()
        # every path agrees with the canonical composite
        for i in range(len(sh)):
            for k in _bits(sh.strict_up(i)):
                ref = self.map(i, k)
                for j in _bits(sh.strict_up(i) & sh.down[k]):
                    if (i, j) not in self._given:
                        continue
                    via = self._given[(i, j)] if j == k else self.map(j, k).compose(self._given[(i, j)])
                    if via != ref:
                        raise ValidationError("diagram is not functorial",
                                              {"from": repr(sh.objects[i]), "to": repr(sh.objects[k])})
        if self.group_maps:
            self._validate_group()

    def _validate_group(self) -> None:
        sh = self.shape
        g = sh.group
        if g is None:
            raise ValidationError("group structure needs a shape with a group action")
        for a, phis in self.group_maps.items():
            if a not in sh.action:
                raise ValidationError("structure map for an element not acting on the shape", {"element": a})
            perm = sh.action[a]
            for i, phi in enumerate(phis):
                phi.validate()
                if phi.source.dims != self.values[i].dims or phi.target.dims != self.values[perm[i]].dims:
                    raise ValidationError("structure map has the wrong endpoints", {"element": a})
            for i, j in sh.covers():
                left = phis[j].compose(self.map(i, j))
                right = self.map(perm[i], perm[j]).compose(phis[i])
                if left != right:
                    raise ValidationError("structure map is not natural", {"element": a})
        if g.identity in self.group_maps:
            for i, phi in enumerate(self.group_maps[g.identity]):
                if phi != ChainMap.identity(self.values[i]):
                    raise ValidationError("identity element does not act trivially")
        for a, pa in self.group_maps.items():
            for b, pb in self.group_maps.items():
                ab = g.mul(a, b)
                if ab not in self.group_maps:
                    continue
                perm_b = sh.action[b]
                for i in range(len(sh)):
                    if pa[perm_b[i]].compose(pb[i]) != self.group_maps[ab][i]:
                        raise ValidationError("structure maps do not compose", {"pair": (a, b)})

    def restrict(self, indices: Iterable[int]) -> "PosetDiagram":
        """The diagram on the full subposet spanned by ``indices``."""
        idx = sorted(set(indices))
        sub = self.shape.subposet(idx)
        maps = {(a, b): self.map(idx[a], idx[b]) for a, b in sub.covers()}
        group_maps = {}
        for a, perm in sub.action.items():
            if a in self.group_maps:
                group_maps[a] = [self.group_maps[a][i] for i in idx]
        return PosetDiagram(sub, [self.values[i] for i in idx], maps, group_maps, check=False)

    def index_of(self, obj: Hashable) -> int:
        return self.shape.index[obj]


# ---------------------------------------------------------------------------
# Bousfield-Kan totalizations


@dataclass
class Totalization:
    """A totalization together with its block layout.

    ``blocks[n]`` maps a chain (a tuple of object indices of the diagram)
    to the offset of its block in total degree ``n``.
    """

    complex: ChainComplex
    blocks: dict[int, dict[tuple[int, ...], int]]
    kind: str


def _layout(chains: list[tuple[int, ...]], values: Sequence[ChainComplex], kind: str):
    blocks: dict[int, dict[tuple[int, ...], int]] = {}
    dims: dict[int, int] = {}
    for ch in chains:
        p = len(ch) - 1
        c = values[ch[-1]] if kind == "holim" else values[ch[0]]
        for m, d in c.dims.items():
            n = m - p if kind == "holim" else m + p
            blocks.setdefault(n, {})[ch] = dims.get(n, 0)
            dims[n] = dims.get(n, 0) + d
    return blocks, dims


def _put(cols: list[dict], src: int, tgt: int, mat: Matrix, sign: int) -> None:
    for c, col in enumerate(mat.cols):
        dest = cols[src + c]
        for r, v in col.items():
            key = tgt + r
            x = dest.get(key, 0) + sign * v
            if x:
                dest[key] = x
            else:
                dest.pop(key, None)


def _put_identity(cols: list[dict], src: int, tgt: int, dim: int, sign: int) -> None:
    for c in range(dim):
        dest = cols[src + c]
        key = tgt + c
        x = dest.get(key, 0) + sign
        if x:
            dest[key] = x
        else:
            dest.pop(key, None)


def bk_holim(d: PosetDiagram, within: int | None = None) -> Totalization:
    """Homotopy limit; ``within`` is a bitmask of objects to restrict to."""
    sh = d.shape
    chains = list(sh.chains(within=within))
    blocks, dims = _layout(chains, d.values, "holim")
    allowed = (1 << len(sh)) - 1 if within is None else within
    diff: dict[int, Matrix] = {}
    for n, blk in blocks.items():
        cols: list[dict] = [dict() for _ in range(dims[n])]
        tgt_blocks = blocks.get(n - 1, {})
        for ch, off in blk.items():
            p = len(ch) - 1
            last = ch[-1]
            x = d.values[last]
            m = n + p
            dm = x.dim(m)
            sgn = -1 if m % 2 else 1
            if m in x.diff:
                _put(cols, off, tgt_blocks[ch], x.diff[m], 1)
            # insert one object into the chain
            for pos in range(p + 2):
                lo = sh.strict_up(ch[pos - 1]) if pos > 0 else allowed
                hi = sh.down[ch[pos]] & ~(1 << ch[pos]) if pos <= p else allowed
                for e in _bits(lo & hi & allowed):
                    new = ch[:pos] + (e,) + ch[pos:]
                    t = tgt_blocks.get(new)
                    if t is None:
                        continue
                    if pos <= p:
                        _put_identity(cols, off, t, dm, sgn * (-1) ** pos)
                    else:
                        f = d.map(last, e).at(m)
                        _put(cols, off, t, f, sgn * (-1) ** (p + 1))
        diff[n] = Matrix(dims.get(n - 1, 0), dims[n], cols)
    return Totalization(ChainComplex(dims, diff, check=False), blocks, "holim")


def bk_hocolim(d: PosetDiagram, within: int | None = None) -> Totalization:
    """Homotopy colimit; ``within`` is a bitmask of objects to restrict to."""
    sh = d.shape
    chains = list(sh.chains(within=within))
    blocks, dims = _layout(chains, d.values, "hocolim")
    diff: dict[int, Matrix] = {}
    for n, blk in blocks.items():
        cols: list[dict] = [dict() for _ in range(dims[n])]
        tgt_blocks = blocks.get(n - 1, {})
        for ch, off in blk.items():
            p = len(ch) - 1
            first = ch[0]
            x = d.values[first]
            m = n - p
            dm = x.dim(m)
            if m in x.diff:
                _put(cols, off, tgt_blocks[ch], x.diff[m], -1 if p % 2 else 1)
            if p == 0:
                continue
            t = tgt_blocks.get(ch[1:])
            if t is not None:
                _put(cols, off, t, d.map(first, ch[1]).at(m), 1)
            for j in range(1, p + 1):
                t = tgt_blocks.get(ch[:j] + ch[j + 1:])
                if t is not None:
                    _put_identity(cols, off, t, dm, -1 if j % 2 else 1)
        diff[n] = Matrix(dims.get(n - 1, 0), dims[n], cols)
    return Totalization(ChainComplex(dims, diff, check=False), blocks, "hocolim")


def holim(d: PosetDiagram) -> ChainComplex:
    return bk_holim(d).complex


def hocolim(d: PosetDiagram) -> ChainComplex:
    return bk_hocolim(d).complex


def cone_from_initial(d: PosetDiagram, source: int, tot: Totalization) -> ChainMap:
    """``value(source) -> holim`` sending ``x`` to its images on length-0 chains."""
    x = d.values[source]
    tgt = tot.complex
    mats = {}
    for m, dim in x.dims.items():
        cols: list[dict] = [dict() for _ in range(dim)]
        for ch, off in tot.blocks.get(m, {}).items():
            if len(ch) == 1:
                _put(cols, 0, off, d.map(source, ch[0]).at(m), 1)
        mats[m] = Matrix(tgt.dim(m), dim, cols)
    return ChainMap(x, tgt, mats)


def cocone_to_terminal(d: PosetDiagram, target: int, tot: Totalization) -> ChainMap:
    """``hocolim -> value(target)`` using the maps on length-0 chains."""
    y = d.values[target]
    src = tot.complex
    mats = {}
    for n, blk in tot.blocks.items():
        cols: list[dict] = [dict() for _ in range(src.dim(n))]
        for ch, off in blk.items():
            if len(ch) == 1:
                f = d.map(ch[0], target).at(n)
                for c, col in enumerate(f.cols):
                    cols[off + c] = dict(col)
        mats[n] = Matrix(y.dim(n), src.dim(n), cols)
    return ChainMap(src, y, mats)


def restriction_map(d: PosetDiagram, big: Totalization, small: Totalization) -> ChainMap:
    """Projection ``holim_A -> holim_B`` for a full subposet ``B`` of ``A``."""
    mats = {}
    for n, blk in big.blocks.items():
        cols: list[dict] = [dict() for _ in range(big.complex.dim(n))]
        sblk = small.blocks.get(n, {})
        for ch, off in blk.items():
            t = sblk.get(ch)
            if t is None:
                continue
            p = len(ch) - 1
            _put_identity(cols, off, t, d.values[ch[-1]].dim(n + p), 1)
        mats[n] = Matrix(small.complex.dim(n), big.complex.dim(n), cols)
    return ChainMap(big.complex, small.complex, mats)


# ---------------------------------------------------------------------------
# cubes


def cube_diagram(points: Iterable[int], value: Callable[[frozenset], ChainComplex],
                 edge: Callable[[frozenset, frozenset], ChainMap], check: bool = True) -> PosetDiagram:
    """A cube over ``P(points)``; ``edge(U, V)`` is the map for ``V = U + {v}``."""
    pts = sorted(points)
    from .posets import subsets

    objs = subsets(pts)
    shape = GPoset(objs, lambda a, b: a <= b)
    vals = [value(u) for u in shape.objects]
    maps = {}
    for i, j in shape.covers():
        maps[(i, j)] = edge(shape.objects[i], shape.objects[j])
    return PosetDiagram(shape, vals, maps, check=check)


def _cube_points(d: PosetDiagram) -> frozenset:
    objs = d.shape.objects
    if not objs or not all(isinstance(o, frozenset) for o in objs):
        raise PreconditionError("a cube must be indexed by subsets")
    top = frozenset().union(*objs)
    if len(objs) != 2 ** len(top):
        raise PreconditionError("shape is not a full power poset")
    return top


def subcube(d: PosetDiagram, s: Iterable) -> PosetDiagram:
    """Restriction of a cube to ``P(S)``."""
    ss = frozenset(s)
    return d.restrict(i for i, o in enumerate(d.shape.objects) if o <= ss)


def face(d: PosetDiagram, u: Iterable, directions: Iterable) -> PosetDiagram:
    """The cube ``V -> X(U ∪ V)`` over ``P(directions)``."""
    uu = frozenset(u)
    dirs = frozenset(directions)
    keep = [i for i, o in enumerate(d.shape.objects) if uu <= o and o <= uu | dirs]
    sub = d.restrict(keep)
    objs = [o - uu for o in sub.shape.objects]
    shape = GPoset._raw(tuple(objs), sub.shape.up, None, {}, None)
    return PosetDiagram(shape, sub.values, sub._given, check=False)


def total_fiber(d: PosetDiagram) -> ChainComplex:
    """Iterated fiber: ``X_U`` placed in degree ``m - |U|``."""
    return _total(d, fiber=True)


def total_cofiber(d: PosetDiagram) -> ChainComplex:
    """Iterated cofiber: ``X_U`` placed in degree ``m + |S - U|``."""
    return _total(d, fiber=False)


def _total(d: PosetDiagram, fiber: bool) -> ChainComplex:
    top = _cube_points(d)
    pts = sorted(top)
    objs = d.shape.objects
    shift = {i: (-len(o) if fiber else len(top - o)) for i, o in enumerate(objs)}
    dims: dict[int, int] = {}
    offs: dict[tuple[int, int], int] = {}
    for i, x in enumerate(d.values):
        for m, dm in x.dims.items():
            n = m + shift[i]
            offs[(i, n)] = dims.get(n, 0)
            dims[n] = dims.get(n, 0) + dm
    cols_by: dict[int, list[dict]] = {n: [dict() for _ in range(k)] for n, k in dims.items()}
    for i, o in enumerate(objs):
        x = d.values[i]
        s = -1 if abs(shift[i]) % 2 else 1
        for m in x.dims:
            n = m + shift[i]
            src = offs[(i, n)]
            cols = cols_by[n]
            if m in x.diff:
                _put(cols, src, offs[(i, n - 1)], x.diff[m], s)
            for u in pts:
                if u in o:
                    continue
                j = d.shape.index[o | {u}]
                ref = o if fiber else top - o
                eps = -1 if sum(1 for w in ref if w < u) % 2 else 1
                f = d.map(i, j).at(m)
                if d.values[j].dim(m):
                    _put(cols, src, offs[(j, n - 1)], f, eps)
    diff = {n: Matrix(dims.get(n - 1, 0), dims[n], cols) for n, cols in cols_by.items()}
    return ChainComplex(dims, diff, check=False)


def cartesian_comparison(d: PosetDiagram) -> ChainMap:
    """``X_∅ -> holim over P_0`` for a cube ``d``."""
    _cube_points(d)
    bottom = d.shape.index[frozenset()]
    mask = ((1 << len(d)) - 1) & ~(1 << bottom)
    tot = bk_holim(d, within=mask)
    return cone_from_initial(d, bottom, tot)


def cocartesian_comparison(d: PosetDiagram) -> ChainMap:
    """``hocolim over P_1 -> X_S`` for a cube ``d``."""
    top = _cube_points(d)
    t = d.shape.index[top]
    mask = ((1 << len(d)) - 1) & ~(1 << t)
    tot = bk_hocolim(d, within=mask)
    return cocone_to_terminal(d, t, tot)


def is_cartesian(d: PosetDiagram, method: str = "holim") -> bool:
    """Whether ``X_∅`` computes the homotopy limit of the rest of the cube.

    ``method="holim"`` tests the comparison map into the Bousfield-Kan
    homotopy limit; ``method="total"`` tests acyclicity of the total fiber.
    """
    if method == "holim":
        return is_quasi_isomorphism(cartesian_comparison(d))
    if method == "total":
        return not homology(total_fiber(d), check=False)
    raise ValueError(f"unknown method {method!r}")


def is_cocartesian(d: PosetDiagram, method: str = "bk") -> bool:
    """Whether ``X_S`` computes the homotopy colimit of the rest of the cube."""
    if method in ("bk", "hocolim"):
        return is_quasi_isomorphism(cocartesian_comparison(d))
    if method == "total":
        return not homology(total_cofiber(d), check=False)
    raise ValueError(f"unknown method {method!r}")


def strongly_cocartesian_failures(d: PosetDiagram, j: GSet, method: str = "bk",
                                  first_only: bool = False) -> list[frozenset]:
    """Subsets ``S`` outside the star for which ``X|P(S)`` is not cocartesian."""
    top = _cube_points(d)
    jp = plus(j)
    if top != frozenset(jp.points):
        raise PreconditionError("cube is not indexed by the subsets of J_+")
    bad = []
    for s in outside_star(j):
        if not is_cocartesian(subcube(d, s), method=method):
            bad.append(s)
            if first_only:
                break
    return bad


def is_strongly_cocartesian(d: PosetDiagram, j: GSet, method: str = "bk") -> bool:
    return not strongly_cocartesian_failures(d, j, method=method, first_only=True)


# ---------------------------------------------------------------------------
# the generating cube


def lambda_cube(j: GSet, c: ChainComplex, check: bool = False) -> PosetDiagram:
    """The ``J_+``-cube whose ``U``-vertex is the hocolim over ``St(U)`` of the star diagram of ``c``.

    The star diagram is ``c`` at the empty set and ``0`` elsewhere, so only
    chains starting at the empty set contribute; a chain
    ``(∅ < W1 < ... < Wp)`` with ``x`` in ``c_m`` lives in degree ``m + p``.
    The group acts by moving chains.
    """
    st = star_category(j)
    empty = st.index.get(frozenset())
    # with no orbits the star category is empty and every vertex is 0
    chains = [] if empty is None else list(st.chains(starts=[empty]))
    cube_shape = power_poset(j, based=True)
    objs = cube_shape.objects

    vertex_chains: list[list[tuple[int, ...]]] = []
    values: list[ChainComplex] = []
    layouts: list[dict[tuple[tuple[int, ...], int], int]] = []
    for u in objs:
        mine = [ch for ch in chains if st.objects[ch[-1]] <= u]
        vertex_chains.append(mine)
        off: dict[tuple[tuple[int, ...], int], int] = {}
        dims: dict[int, int] = {}
        for ch in mine:
            p = len(ch) - 1
            for m, dm in c.dims.items():
                off[(ch, m + p)] = dims.get(m + p, 0)
                dims[m + p] = dims.get(m + p, 0) + dm
        diff = {}
        for n, dn in dims.items():
            cols: list[dict] = [dict() for _ in range(dn)]
            for ch in mine:
                p = len(ch) - 1
                m = n - p
                if (ch, n) not in off:
                    continue
                src = off[(ch, n)]
                if m in c.diff:
                    _put(cols, src, off[(ch, n - 1)], c.diff[m], -1 if p % 2 else 1)
                for k in range(1, p + 1):
                    _put_identity(cols, src, off[(ch[:k] + ch[k + 1:], n - 1)], c.dim(m), -1 if k % 2 else 1)
            diff[n] = Matrix(dims.get(n - 1, 0), dn, cols)
        values.append(ChainComplex(dims, diff, check=False))
        layouts.append(off)

    def move(i: int, k: int, relabel: Callable[[tuple[int, ...]], tuple[int, ...]]) -> ChainMap:
        src, tgt = values[i], values[k]
        mats = {}
        for n, dn in src.dims.items():
            cols: list[dict] = [dict() for _ in range(dn)]
            for ch in vertex_chains[i]:
                key = (ch, n)
                if key not in layouts[i]:
                    continue
                _put_identity(cols, layouts[i][key], layouts[k][(relabel(ch), n)], c.dim(n - len(ch) + 1), 1)
            mats[n] = Matrix(tgt.dim(n), dn, cols)
        return ChainMap(src, tgt, mats)

    maps = {(a, b): move(a, b, lambda ch: ch) for a, b in cube_shape.covers()}
    group_maps = {}
    for g, perm in cube_shape.action.items():
        sperm = st.action[g]
        group_maps[g] = [move(i, perm[i], lambda ch, sp=sperm: tuple(sp[x] for x in ch))
                         for i in range(len(objs))]
    return PosetDiagram(cube_shape, values, maps, group_maps, check=check)


# ---------------------------------------------------------------------------
# verifiers for diagram lemmas


def covering_cube(d: PosetDiagram, pieces: Sequence[frozenset[int]]) -> PosetDiagram:
    """The cube ``W -> holim over the intersection of the pieces in W``.

    The empty intersection is the whole shape; restriction maps are the
    projections onto chains inside the smaller subposet.
    """
    n = len(d)
    full = (1 << n) - 1
    k = len(pieces)
    masks = [sum(1 << i for i in p) for p in pieces]
    from .posets import subsets

    objs = subsets(range(k))
    tots: dict[frozenset, Totalization] = {}
    for w in objs:
        m = full
        for x in w:
            m &= masks[x]
        tots[w] = bk_holim(d, within=m)

    def edge(u: frozenset, v: frozenset) -> ChainMap:
        return restriction_map(d, tots[u], tots[v])

    return cube_diagram(range(k), lambda w: tots[w].complex, edge, check=False)


def verify_covering_lemma(d: PosetDiagram, cover) -> bool:
    """Whether the holim over the shape is the holim of the holims over the pieces."""
    from .posets import cover_problems

    probs = cover_problems(d.shape, cover)
    if probs:
        raise PreconditionError("not an equivariant cover: " + probs[0])
    return is_cartesian(covering_cube(d, cover.pieces))


def check_sections(d: PosetDiagram, sections: Mapping[tuple[int, int], ChainMap]) -> list[str]:
    """Problems with a family of sections ``S(i<j): value(j) -> value(i)``."""
    sh = d.shape
    probs: list[str] = []
    for i in range(len(sh)):
        for j in _bits(sh.strict_up(i)):
            s = sections.get((i, j))
            if s is None:
                probs.append(f"missing section for {i}<{j}")
                continue
            try:
                s.validate()
            except ValidationError:
                probs.append(f"section {i}<{j} is not a chain map")
                continue
            if d.map(i, j).compose(s) != ChainMap.identity(d.values[j]):
                probs.append(f"section {i}<{j} does not split the map")
            for k in _bits(sh.strict_up(j)):
                sk = sections.get((i, k))
                if sk is None:
                    continue
                sjk = sections.get((j, k))
                if sjk is None:
                    continue
                if s.compose(sjk) != sk:
                    probs.append(f"sections {i}<{j}<{k} do not compose")
                if d.map(i, j).compose(sk) != sjk:
                    probs.append(f"sections {i}<{j}<{k} are not compatible with the maps")
    return probs


def fiber_over_above(d: PosetDiagram, i: int) -> ChainComplex:
    """Homotopy fiber of ``value(i) -> holim over objects strictly above i``."""
    above = d.shape.strict_up(i)
    if not above:
        return d.values[i]
    tot = bk_holim(d, within=above)
    f = cone_from_initial(d, i, tot)
    return cone(f).shift(-1)


def verify_decomp(d: PosetDiagram, sections: Mapping[tuple[int, int], ChainMap]) -> tuple[bool, dict]:
    """Compare the homology of the initial value with the sum over all fibers."""
    inits = d.shape.initial_objects()
    if not inits:
        raise PreconditionError("shape has no initial object")
    probs = check_sections(d, sections)
    if probs:
        raise PreconditionError("sections do not split the diagram: " + probs[0])
    base = homology(d.values[inits[0]], check=False)
    fibers = {}
    total: dict[int, int] = {}
    for i in range(len(d)):
        h = homology(fiber_over_above(d, i), check=False)
        fibers[i] = h
        for n, r in h.items():
            total[n] = total.get(n, 0) + r
    report = {"initial": base, "fibers": fibers, "sum": total}
    return base == total, report


def iterated_pushout_map(d: PosetDiagram, j: GSet, u: Iterable[int]) -> ChainMap:
    """Map from the iterated pushout of the ``X_{U ∩ o_+}`` over ``X_{U ∩ +}`` to ``X_U``."""
    jp = plus(j)
    bp = jp.basepoint
    uu = frozenset(u)
    orbs = [frozenset(o) for o in j.orbits if bp not in o]
    base = uu & {bp}
    corners = [uu & (o | {bp}) for o in orbs]
    idx = d.shape.index
    # star shape: object 0 below objects 1..n
    n = len(corners)
    objs = list(range(n + 1))
    shape = GPoset(objs, lambda a, b: a == b or a == 0)
    vals = [d.values[idx[base]]] + [d.values[idx[w]] for w in corners]
    maps = {(0, k + 1): d.map(idx[base], idx[w]) for k, w in enumerate(corners)}
    star = PosetDiagram(shape, vals, maps, check=False)
    tot = bk_hocolim(star)
    t = idx[uu]
    mats = {}
    for deg, blk in tot.blocks.items():
        cols: list[dict] = [dict() for _ in range(tot.complex.dim(deg))]
        for ch, off in blk.items():
            if len(ch) != 1:
                continue
            src = idx[base] if ch[0] == 0 else idx[corners[ch[0] - 1]]
            f = d.map(src, t).at(deg)
            for c, col in enumerate(f.cols):
                cols[off + c] = dict(col)
        mats[deg] = Matrix(d.values[t].dim(deg), tot.complex.dim(deg), cols)
    return ChainMap(tot.complex, d.values[t], mats)


def verify_iterated_pushout(d: PosetDiagram, j: GSet) -> list[frozenset]:
    """Subsets ``U`` where the iterated pushout is not equivalent to ``X_U``."""
    bad = []
    for u in d.shape.objects:
        if not is_quasi_isomorphism(iterated_pushout_map(d, j, u)):
            bad.append(u)
    return bad


def zero_vertex(d: PosetDiagram, obj: Hashable) -> PosetDiagram:
    """Replace one vertex by the zero complex (only functorial at the top or bottom)."""
    k = d.shape.index[obj]
    values = list(d.values)
    values[k] = zero_complex()
    maps = {}
    for (i, j) in d.shape.covers():
        src, tgt = values[i], values[j]
        maps[(i, j)] = ChainMap.zero(src, tgt) if k in (i, j) else d.map(i, j)
    return PosetDiagram(d.shape, values, maps, check=False)
