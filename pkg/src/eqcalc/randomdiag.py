"""Seeded random chain complexes, diagrams and cubes.

Every generator takes a ``random.Random`` instance.  Diagrams are built from
functorial vector-space diagrams tensored with small random complexes, then
disguised by random integral changes of basis at each object so that the
matrices are dense.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .chains import ChainComplex, ChainMap
from .diagrams import PosetDiagram, cube_diagram, zero_vertex
from .linalg import Matrix, rref, solve_columns
from .posets import GPoset, _bits, subsets

DEFAULT_SEED = 20240601


# ---------------------------------------------------------------------------
# complexes


def unimodular(rng: random.Random, n: int, steps: int | None = None) -> tuple[list[list[int]], list[list[int]]]:
    """A random integer matrix with determinant ±1 and its integral inverse."""
    a = [[int(i == j) for j in range(n)] for i in range(n)]
    ainv = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps if steps is not None else 2 * n):
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        t = rng.choice([-2, -1, 1, 2])
        # a <- E a with E = I + t e_ij (row op), inverse applied on the right
        a[i] = [x + t * y for x, y in zip(a[i], a[j])]
        for row in ainv:
            row[j] -= t * row[i]
    if n and rng.random() < 0.5:
        k = rng.randrange(n)
        a[k] = [-x for x in a[k]]
        for row in ainv:
            row[k] = -row[k]
    return a, ainv


def _dense(m: Sequence[Sequence[int]], nrows: int, ncols: int) -> Matrix:
    return Matrix.from_dense([list(r) for r in m], ncols=ncols) if nrows else Matrix.zeros(0, ncols)


def elementary_complex(lo: int, hi: int, spheres: dict[int, int], disks: dict[int, int]) -> ChainComplex:
    """Sum of spheres ``Q[n]`` and disks ``Q[n] -> Q[n-1]`` (identity differential)."""
    dims: dict[int, int] = {}
    for n, k in spheres.items():
        dims[n] = dims.get(n, 0) + k
    for n, k in disks.items():
        dims[n] = dims.get(n, 0) + k
        dims[n - 1] = dims.get(n - 1, 0) + k
    # layout in each degree: spheres, then disk tops, then disk bottoms
    diff = {}
    for n in range(lo, hi + 1):
        k = disks.get(n, 0)
        if not k:
            continue
        src_off = spheres.get(n, 0)
        tgt_off = spheres.get(n - 1, 0) + disks.get(n - 1, 0)
        cols: list[dict] = [dict() for _ in range(dims[n])]
        for t in range(k):
            cols[src_off + t] = {tgt_off + t: 1}
        diff[n] = Matrix(dims.get(n - 1, 0), dims[n], cols)
    return ChainComplex(dims, diff)


def conjugate_complex(c: ChainComplex, basis: dict[int, tuple[list[list[int]], list[list[int]]]]) -> ChainComplex:
    """``B d B^{-1}`` for graded invertible ``B``."""
    diff = {}
    for n, m in c.diff.items():
        b_lo = _dense(basis[n - 1][0], c.dim(n - 1), c.dim(n - 1))
        b_inv = _dense(basis[n][1], c.dim(n), c.dim(n))
        diff[n] = b_lo @ m @ b_inv
    return ChainComplex(c.dims, diff)


def random_complex(rng: random.Random, lo: int = 0, hi: int = 2, max_dim: int = 3) -> ChainComplex:
    spheres = {n: rng.randint(0, max_dim) for n in range(lo, hi + 1)}
    disks = {n: rng.randint(0, max_dim - 1) for n in range(lo + 1, hi + 1)}
    c = elementary_complex(lo, hi, spheres, disks)
    basis = {n: unimodular(rng, c.dim(n)) for n in range(lo - 1, hi + 2)}
    return conjugate_complex(c, basis)


# ---------------------------------------------------------------------------
# vector space diagrams


def _basis(vectors: list[list[Fraction]]) -> list[list[Fraction]]:
    if not vectors:
        return []
    red, _ = rref(vectors)
    return [r for r in red if any(r)]


def _coords(basis: list[list[Fraction]], v: list[Fraction]) -> list[Fraction]:
    return solve_columns([list(b) for b in basis], v)


def vector_diagram(rng: random.Random, shape: GPoset, kind: str = "sub", ambient: int = 4,
                   density: float = 0.5) -> tuple[list[int], dict[tuple[int, int], list[list[Fraction]]]]:
    """Random functorial vector-space diagram: dimensions and matrices on covers.

    ``kind="sub"``: ``V_i`` is the span of random vectors attached at objects
    below ``i``, with inclusions.  ``kind="quotient"``: ``Q^N / W_i`` with
    ``W_i`` increasing, with the induced projections.
    """
    n = len(shape)
    attached: list[list[list[Fraction]]] = []
    for _ in range(n):
        vecs = []
        for _ in range(rng.randint(0, 2)):
            vecs.append([Fraction(rng.randint(-2, 2)) if rng.random() < density else Fraction(0)
                         for _ in range(ambient)])
        attached.append(vecs)
    spans = []
    for i in range(n):
        vecs = [v for j in _bits(shape.down[i]) for v in attached[j]]
        spans.append(_basis(vecs))
    if kind == "sub":
        dims = [len(b) for b in spans]
        maps = {}
        for i, j in shape.covers():
            cols = [_coords(spans[j], v) for v in spans[i]]
            maps[(i, j)] = [[cols[c][r] for c in range(len(cols))] for r in range(dims[j])]
        return dims, maps
    if kind == "quotient":
        # complement basis: standard vectors outside the pivot columns of W_i
        comps = []
        for i in range(n):
            _, piv = rref(spans[i]) if spans[i] else ([], [])
            comps.append([k for k in range(ambient) if k not in piv])
        dims = [len(c) for c in comps]

        def reduce(i: int, v: list[Fraction]) -> list[Fraction]:
            # coordinates of v mod W_i in the complement basis
            if spans[i]:
                red, piv = rref(spans[i])
                v = list(v)
                for row, p in zip(red, piv):
                    if v[p]:
                        f = v[p]
                        v = [x - f * y for x, y in zip(v, row)]
            return [v[k] for k in comps[i]]

        maps = {}
        for i, j in shape.covers():
            cols = []
            for k in comps[i]:
                e = [Fraction(int(t == k)) for t in range(ambient)]
                cols.append(reduce(j, e))
            maps[(i, j)] = [[cols[c][r] for c in range(len(cols))] for r in range(dims[j])]
        return dims, maps
    raise ValueError(f"unknown kind {kind!r}")


def _tensor_map(f: Sequence[Sequence[Fraction]], c: ChainComplex, n: int, rows: int, cols: int) -> Matrix:
    """``f ⊗ id`` on degree ``n`` with copy-major ordering."""
    d = c.dim(n)
    out: list[dict] = [dict() for _ in range(cols * d)]
    for a in range(cols):
        for a2 in range(rows):
            v = f[a2][a]
            if v:
                for b in range(d):
                    out[a * d + b][a2 * d + b] = v
    return Matrix(rows * d, cols * d, out)


def _tensor_complex(c: ChainComplex, k: int) -> ChainComplex:
    dims = {n: d * k for n, d in c.dims.items()}
    diff = {}
    for n, m in c.diff.items():
        blocks: list[dict] = []
        for a in range(k):
            for col in m.cols:
                blocks.append({a * c.dim(n - 1) + r: v for r, v in col.items()})
        diff[n] = Matrix(dims.get(n - 1, 0), dims[n], blocks)
    return ChainComplex(dims, diff, check=False)


def _sum_layout(parts: list[ChainComplex]) -> tuple[ChainComplex, list[dict[int, int]]]:
    from .chains import direct_sum

    offs: list[dict[int, int]] = []
    acc: dict[int, int] = {}
    for p in parts:
        o = {}
        for n in p.dims:
            o[n] = acc.get(n, 0)
            acc[n] = acc.get(n, 0) + p.dim(n)
        offs.append(o)
    return direct_sum(*parts) if parts else ChainComplex({}), offs


def random_diagram(rng: random.Random, shape: GPoset, pieces: int = 2, kinds: Sequence[str] = ("sub", "quotient"),
                   ambient: int = 3, disguise: bool = True) -> PosetDiagram:
    """A random diagram over ``shape``: a sum of vector diagrams tensored with random complexes."""
    n = len(shape)
    per_piece = []
    for _ in range(pieces):
        kind = rng.choice(list(kinds))
        dims, maps = vector_diagram(rng, shape, kind=kind, ambient=ambient)
        c = random_complex(rng, lo=rng.randint(-1, 1), hi=rng.randint(1, 2), max_dim=2)
        per_piece.append((dims, maps, c))
    values = []
    layouts = []
    for i in range(n):
        parts = [_tensor_complex(c, dims[i]) for dims, _, c in per_piece]
        v, offs = _sum_layout(parts)
        values.append(v)
        layouts.append(offs)
    maps: dict[tuple[int, int], ChainMap] = {}
    for i, j in shape.covers():
        mats = {}
        for deg in values[i].dims:
            cols: list[dict] = [dict() for _ in range(values[i].dim(deg))]
            for r, (dims, vmaps, c) in enumerate(per_piece):
                if not c.dim(deg) or not dims[i] or not dims[j]:
                    continue
                blk = _tensor_map(vmaps[(i, j)], c, deg, dims[j], dims[i])
                so, to = layouts[i][r].get(deg, 0), layouts[j][r].get(deg, 0)
                for k, col in enumerate(blk.cols):
                    cols[so + k] = {to + x: v for x, v in col.items()}
            mats[deg] = Matrix(values[j].dim(deg), values[i].dim(deg), cols)
        maps[(i, j)] = ChainMap(values[i], values[j], mats)
    d = PosetDiagram(shape, values, maps, check=False)
    return disguise_diagram(rng, d) if disguise else d


def _basis_change(rng: random.Random, c: ChainComplex) -> dict[int, tuple[Matrix, Matrix]]:
    out = {}
    for n, k in c.dims.items():
        a, ainv = unimodular(rng, k)
        out[n] = (_dense(a, k, k), _dense(ainv, k, k))
    return out


def disguise_diagram(rng: random.Random, d: PosetDiagram,
                     extra: dict[tuple[int, int], ChainMap] | None = None):
    """Conjugate every value by a random graded integral basis change.

    ``extra`` maps (reversed-direction sections ``value(j) -> value(i)``
    keyed by ``(i, j)``) are conjugated along; then a pair is returned.
    """
    bases = [_basis_change(rng, v) for v in d.values]

    def conj_complex(i: int) -> ChainComplex:
        v = d.values[i]
        b = bases[i]
        diff = {n: b[n - 1][0] @ m @ b[n][1] for n, m in v.diff.items()}
        return ChainComplex(v.dims, diff, check=False)

    values = [conj_complex(i) for i in range(len(d))]

    def conj_map(f: ChainMap, i: int, j: int) -> ChainMap:
        mats = {}
        for n, m in f.mats.items():
            if n in bases[j] and n in bases[i]:
                mats[n] = bases[j][n][0] @ m @ bases[i][n][1]
        return ChainMap(values[i], values[j], mats)

    maps = {(i, j): conj_map(d.map(i, j), i, j) for i, j in d.shape.covers()}
    group_maps = {g: [conj_map(phi, i, d.shape.action[g][i]) for i, phi in enumerate(phis)]
                  for g, phis in d.group_maps.items()}
    out = PosetDiagram(d.shape, values, maps, group_maps, check=False)
    if extra is None:
        return out
    sec = {(i, j): conj_map(s, j, i) for (i, j), s in extra.items()}
    return out, sec


# ---------------------------------------------------------------------------
# equivariant diagrams


def random_equivariant_diagram(rng: random.Random, shape: GPoset, ambient: int = 1, pieces: int = 1,
                               disguise: bool = False) -> PosetDiagram:
    """A random subspace diagram with a group structure.

    The ambient space is ``Q^a ⊗ Q[G]``; a vector ``v`` attached at ``i``
    brings ``g v`` attached at ``g i`` along, so ``g V_i = V_{g i}`` and the
    structure maps are restrictions of the permutation action.
    """
    g = shape.group
    order = g.order
    width = ambient * order
    elems = sorted(shape.action)

    def act_vec(a: int, v: list[Fraction]) -> list[Fraction]:
        out = [Fraction(0)] * width
        for blk in range(order):
            tgt = g.mul(a, blk)
            for t in range(ambient):
                out[tgt * ambient + t] = v[blk * ambient + t]
        return out

    n = len(shape)
    per_piece = []
    for _ in range(pieces):
        attached: list[list[list[Fraction]]] = [[] for _ in range(n)]
        for i in range(n):
            for _ in range(rng.randint(0, 1)):
                v = [Fraction(rng.randint(-1, 2)) if rng.random() < 0.5 else Fraction(0) for _ in range(width)]
                for a in elems:
                    attached[shape.action[a][i]].append(act_vec(a, v))
        spans = [_basis([v for j in _bits(shape.down[i]) for v in attached[j]]) for i in range(n)]
        c = random_complex(rng, lo=0, hi=rng.randint(0, 2), max_dim=2)
        per_piece.append((spans, c))

    values, layouts = [], []
    for i in range(n):
        parts = [_tensor_complex(c, len(spans[i])) for spans, c in per_piece]
        v, offs = _sum_layout(parts)
        values.append(v)
        layouts.append(offs)

    def linear_map(i: int, j: int, lin) -> ChainMap:
        mats = {}
        for deg in values[i].dims:
            cols: list[dict] = [dict() for _ in range(values[i].dim(deg))]
            for r, (spans, c) in enumerate(per_piece):
                if not c.dim(deg) or not spans[i]:
                    continue
                fcols = [_coords(spans[j], lin(v)) for v in spans[i]]
                f = [[fcols[a][b] for a in range(len(fcols))] for b in range(len(spans[j]))]
                blk = _tensor_map(f, c, deg, len(spans[j]), len(spans[i]))
                so, to = layouts[i][r].get(deg, 0), layouts[j][r].get(deg, 0)
                for k, col in enumerate(blk.cols):
                    cols[so + k] = {to + x: v for x, v in col.items()}
            mats[deg] = Matrix(values[j].dim(deg), values[i].dim(deg), cols)
        return ChainMap(values[i], values[j], mats)

    maps = {(i, j): linear_map(i, j, lambda v: v) for i, j in shape.covers()}
    group_maps = {a: [linear_map(i, shape.action[a][i], lambda v, a=a: act_vec(a, v)) for i in range(n)]
                  for a in elems}
    d = PosetDiagram(shape, values, maps, group_maps, check=False)
    return disguise_diagram(rng, d) if disguise else d


# ---------------------------------------------------------------------------
# split diagrams


def random_split_diagram(rng: random.Random, shape: GPoset, disguise: bool = True):
    """``P_i = ⊕_{j >= i} M_j`` with projections and inclusion sections.

    Returns ``(diagram, sections)`` with sections keyed by ``(i, j)`` for
    every ``i < j``.
    """
    n = len(shape)
    ms = [random_complex(rng, lo=0, hi=rng.randint(0, 2), max_dim=2) for _ in range(n)]
    ups = [sorted(_bits(shape.up[i])) for i in range(n)]
    values, layouts = [], []
    for i in range(n):
        v, offs = _sum_layout([ms[j] for j in ups[i]])
        values.append(v)
        layouts.append(dict(zip(ups[i], offs)))

    def proj(i: int, j: int) -> ChainMap:
        mats = {}
        for deg in values[i].dims:
            cols: list[dict] = [dict() for _ in range(values[i].dim(deg))]
            for k in ups[j]:
                so, to = layouts[i][k].get(deg, 0), layouts[j][k].get(deg, 0)
                for t in range(ms[k].dim(deg)):
                    cols[so + t] = {to + t: 1}
            mats[deg] = Matrix(values[j].dim(deg), values[i].dim(deg), cols)
        return ChainMap(values[i], values[j], mats)

    def incl(i: int, j: int) -> ChainMap:
        p = proj(i, j)
        return ChainMap(values[j], values[i], {deg: m.transpose() for deg, m in p.mats.items()})

    maps = {(i, j): proj(i, j) for i, j in shape.covers()}
    secs = {(i, j): incl(i, j) for i in range(n) for j in _bits(shape.strict_up(i))}
    d = PosetDiagram(shape, values, maps, check=False)
    if not disguise:
        return d, secs
    return disguise_diagram(rng, d, extra=secs)


# ---------------------------------------------------------------------------
# cubes


def random_cube(rng: random.Random, size: int, kind: str | None = None) -> PosetDiagram:
    """A random cube over ``P({0..size-1})``.

    Kinds: ``"subquotient"`` (generic vector diagrams, usually neither
    cartesian nor cocartesian), ``"pushout"`` (split inclusions, always
    cartesian), ``"pushout-zero-top"`` / ``"pushout-zero-bottom"`` (a
    pushout cube with the terminal or initial vertex replaced by 0).
    """
    kind = kind or rng.choice(["subquotient", "pushout", "pushout-zero-top", "pushout-zero-bottom"])
    pts = list(range(size))
    if kind == "subquotient":
        shape = GPoset(subsets(pts), lambda a, b: a <= b)
        return random_diagram(rng, shape, pieces=rng.randint(1, 2), ambient=rng.randint(2, 3))
    base = random_complex(rng, 0, 1, 2)
    adds = [random_complex(rng, 0, rng.randint(0, 2), 2) for _ in pts]
    d = pushout_cube(pts, base, adds)
    d = disguise_diagram(rng, d)
    if kind == "pushout":
        return d
    if kind == "pushout-zero-top":
        return zero_vertex(d, frozenset(pts))
    if kind == "pushout-zero-bottom":
        return zero_vertex(d, frozenset())
    raise ValueError(f"unknown kind {kind!r}")


def pushout_cube(points: Sequence[int], base: ChainComplex, adds: Sequence[ChainComplex]) -> PosetDiagram:
    """``X_U = base ⊕ ⊕_{u in U} adds[u]`` with the evident inclusions."""
    pts = list(points)

    def value(u: frozenset) -> ChainComplex:
        return _sum_layout([base] + [adds[pts.index(x)] for x in sorted(u)])[0]

    def edge(u: frozenset, v: frozenset) -> ChainMap:
        src, offs_u = _sum_layout([base] + [adds[pts.index(x)] for x in sorted(u)])
        tgt, offs_v = _sum_layout([base] + [adds[pts.index(x)] for x in sorted(v)])
        keys_u = [None] + sorted(u)
        keys_v = [None] + sorted(v)
        comp = [base] + [adds[pts.index(x)] for x in sorted(u)]
        mats = {}
        for deg in src.dims:
            cols: list[dict] = [dict() for _ in range(src.dim(deg))]
            for r, key in enumerate(keys_u):
                so = offs_u[r].get(deg, 0)
                to = offs_v[keys_v.index(key)].get(deg, 0)
                for t in range(comp[r].dim(deg)):
                    cols[so + t] = {to + t: 1}
            mats[deg] = Matrix(tgt.dim(deg), src.dim(deg), cols)
        return ChainMap(src, tgt, mats)

    values: dict[frozenset, ChainComplex] = {}

    def cached(u: frozenset) -> ChainComplex:
        if u not in values:
            values[u] = value(u)
        return values[u]

    def cached_edge(u: frozenset, v: frozenset) -> ChainMap:
        f = edge(u, v)
        return ChainMap(cached(u), cached(v), f.mats)

    return cube_diagram(pts, cached, cached_edge, check=False)


def cube_of_cubes(rng: random.Random, a: PosetDiagram, i_points: Sequence[int], j_points: Sequence[int],
                  psi: dict[frozenset, frozenset]) -> PosetDiagram:
    """The ``(I ⊔ J)``-cube ``X(V ∪ U) = A(V)`` if ``U = ∅`` else ``A(I ∪ psi(U))``.

    ``a`` is a cube over ``P(I ⊔ K)``; ``psi`` sends nonempty subsets of
    ``J`` monotonically to subsets of ``K``.  The faces over nonempty ``U``
    are constant, hence cartesian.
    """
    ii = frozenset(i_points)
    jj = frozenset(j_points)

    def phi(w: frozenset) -> frozenset:
        u = w & jj
        return w & ii if not u else ii | psi[u]

    idx = a.shape.index

    def value(w: frozenset) -> ChainComplex:
        return a.values[idx[phi(w)]]

    def edge(w: frozenset, v: frozenset) -> ChainMap:
        return a.map(idx[phi(w)], idx[phi(v)])

    return cube_diagram(sorted(ii | jj), value, edge, check=False)
