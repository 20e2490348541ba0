"""Partition posets and the partition complexes ``T_K``.

``T_K`` is the pointed simplicial set whose non-basepoint ``p``-simplices
are the multichains ``0 = λ0 <= λ1 <= ... <= λp = 1`` in the poset of set
partitions of ``K`` ordered by refinement (``0`` discrete, ``1``
indiscrete).  Inner faces delete an entry; the outer face ``d_0`` keeps the
simplex only if ``λ1`` is discrete, and ``d_p`` only if ``λ(p-1)`` is
indiscrete; otherwise the face is the basepoint.  Degeneracies repeat an
entry.  So for ``k >= 2`` level 0 is just the basepoint, level 1 is two
points, and level ``p >= 2`` is the set of ``(p-2)``-simplices of the nerve
with a basepoint added.

The non-degenerate non-basepoint ``m``-simplices are the strict chains
``0 < λ1 < ... < λ(m-1) < 1``, and the reduced homology of ``T_k`` is that
of the proper part of the partition lattice shifted up by two.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial
from typing import Iterable, Iterator, Sequence

from .chains import ChainComplex, homology
from .errors import PreconditionError, SizeBoundError
from .groups import FiniteGroup, Subgroup
from .gsets import GSet
from .linalg import Matrix
from .posets import GPoset

MAX_POINTS = 7
BASEPOINT = "*"

Partition = tuple[tuple[int, ...], ...]


def set_partitions(points: Sequence[int]) -> list[Partition]:
    """All set partitions, each as a sorted tuple of sorted blocks."""
    pts = list(points)
    out: list[Partition] = []

    def rec(i: int, blocks: list[list[int]]) -> None:
        if i == len(pts):
            out.append(tuple(sorted(tuple(b) for b in blocks)))
            return
        x = pts[i]
        for b in blocks:
            b.append(x)
            rec(i + 1, blocks)
            b.pop()
        blocks.append([x])
        rec(i + 1, blocks)
        blocks.pop()

    rec(0, [])
    return sorted(out, key=lambda p: (-len(p), p))


def refines(a: Partition, b: Partition) -> bool:
    """``a <= b``: every block of ``a`` lies inside a block of ``b``."""
    where = {x: i for i, blk in enumerate(b) for x in blk}
    return all(len({where[x] for x in blk}) == 1 for blk in a)


def act_on_partition(perm: Sequence[int], p: Partition) -> Partition:
    return tuple(sorted(tuple(sorted(perm[x] for x in blk)) for blk in p))


def bell(n: int) -> int:
    """Bell numbers by the triangle recurrence."""
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


@dataclass
class PartitionPoset:
    """Set partitions of the points of an H-set, ordered by refinement."""

    ground: GSet
    elements: list[Partition] = field(init=False)

    def __post_init__(self) -> None:
        if self.ground.size > MAX_POINTS:
            raise SizeBoundError(f"partition posets are limited to {MAX_POINTS} points")
        self.elements = set_partitions(range(self.ground.size))
        self.index = {p: i for i, p in enumerate(self.elements)}

    @property
    def bottom(self) -> Partition:
        return tuple((x,) for x in range(self.ground.size))

    @property
    def top(self) -> Partition:
        return (tuple(range(self.ground.size)),) if self.ground.size else ()

    def leq(self, a: Partition, b: Partition) -> bool:
        return refines(a, b)

    def act(self, g: int, p: Partition) -> Partition:
        return act_on_partition(self.ground.act[g], p)

    def as_gposet(self, proper: bool = False) -> GPoset:
        objs = self.elements
        if proper:
            objs = [p for p in objs if p not in (self.bottom, self.top)]
        g = self.ground.group
        return GPoset(objs, refines, group=g, acting=g.whole, act_fn=self.act)


# ---------------------------------------------------------------------------
# the simplicial set


class TComplex:
    """The pointed simplicial set ``T_K``, built level by level on demand.

    Level ``p`` is a list whose entry 0 is the basepoint and whose other
    entries are multichains (tuples of ``p + 1`` partitions).
    """

    def __init__(self, ground: GSet, acting: Subgroup | None = None,
                 keep: Iterable[Partition] | None = None) -> None:
        self.poset = PartitionPoset(ground)
        self.ground = ground
        self.group: FiniteGroup = ground.group
        self.acting = acting or self.group.whole
        self.keep = None if keep is None else frozenset(keep)
        self._levels: dict[int, list] = {}
        self._index: dict[int, dict] = {}

    @property
    def k(self) -> int:
        return self.ground.size

    def _partitions(self) -> list[Partition]:
        ps = self.poset.elements
        if self.keep is not None:
            ps = [p for p in ps if p in self.keep]
        return ps

    def level(self, p: int) -> list:
        if p < 0:
            raise PreconditionError("levels are non-negative")
        if p not in self._levels:
            lo, hi = self.poset.bottom, self.poset.top
            ps = self._partitions()
            chains: list[tuple[Partition, ...]] = []
            if p == 0:
                if lo == hi and lo in ps:
                    chains.append((lo,))
            elif lo in ps and hi in ps:
                def rec(acc: list[Partition]) -> None:
                    if len(acc) == p:
                        if refines(acc[-1], hi):
                            chains.append(tuple(acc) + (hi,))
                        return
                    for q in ps:
                        if refines(acc[-1], q):
                            acc.append(q)
                            rec(acc)
                            acc.pop()

                rec([lo])
            chains.sort(key=lambda ch: tuple(self.poset.index[q] for q in ch))
            self._levels[p] = [BASEPOINT] + chains
            self._index[p] = {s: i for i, s in enumerate(self._levels[p])}
        return self._levels[p]

    def size(self, p: int) -> int:
        return len(self.level(p))

    def face_chain(self, p: int, i: int, ch):
        """``d_i`` on a multichain given as a tuple (basepoint passes through)."""
        if ch == BASEPOINT:
            return BASEPOINT
        lo, hi = self.poset.bottom, self.poset.top
        if i == 0:
            return ch[1:] if ch[1] == lo else BASEPOINT
        if i == p:
            return ch[:-1] if ch[p - 1] == hi else BASEPOINT
        return ch[:i] + ch[i + 1:]

    def face(self, p: int, i: int, s: int) -> int:
        """Index of ``d_i`` of simplex ``s`` of level ``p``."""
        if not 0 <= i <= p or p == 0:
            raise PreconditionError("face index out of range")
        new = self.face_chain(p, i, self.level(p)[s])
        if new == BASEPOINT:
            return 0
        self.level(p - 1)
        return self._index[p - 1][new]

    def degeneracy(self, p: int, i: int, s: int) -> int:
        if not 0 <= i <= p:
            raise PreconditionError("degeneracy index out of range")
        ch = self.level(p)[s]
        if ch == BASEPOINT:
            return 0
        new = ch[: i + 1] + ch[i:]
        self.level(p + 1)
        return self._index[p + 1][new]

    def act(self, g: int, p: int, s: int) -> int:
        ch = self.level(p)[s]
        if ch == BASEPOINT:
            return 0
        return self._index[p][tuple(self.poset.act(g, q) for q in ch)]

    def _strict_poset(self) -> GPoset:
        if not hasattr(self, "_sp"):
            self._sp = GPoset(self._partitions(), refines)
        return self._sp

    def nondegenerate(self, m: int) -> list[tuple[Partition, ...]]:
        """Non-basepoint non-degenerate ``m``-simplices: strict chains from bottom to top.

        Enumerated directly, without building level ``m``.
        """
        lo, hi = self.poset.bottom, self.poset.top
        ps = set(self._partitions())
        if lo not in ps or hi not in ps:
            return []
        if m == 0:
            return [(lo,)] if lo == hi else []
        sp = self._strict_poset()
        a, b = sp.index[lo], sp.index[hi]
        out = []
        for ch in sp.chains(starts=[a]):
            if len(ch) == m + 1 and ch[-1] == b:
                out.append(tuple(sp.objects[x] for x in ch))
        return out

    def validate(self, max_level: int = 3) -> None:
        """Check the simplicial identities, the basepoint and the action up to ``max_level``."""
        from .errors import ValidationError

        for p in range(0, max_level + 1):
            n = self.size(p)
            for s in range(n):
                for i in range(p + 2):
                    for j in range(p + 1):
                        # s_j then d_i
                        t = self.degeneracy(p, j, s)
                        got = self.face(p + 1, i, t)
                        if i < j:
                            want = self.degeneracy(p - 1, j - 1, self.face(p, i, s)) if p else None
                        elif i in (j, j + 1):
                            want = s
                        else:
                            want = self.degeneracy(p - 1, j, self.face(p, i - 1, s)) if p else None
                        if want is not None and got != want:
                            raise ValidationError("degeneracy/face identity fails", {"level": p, "i": i, "j": j})
                if p >= 2:
                    for i in range(p + 1):
                        for j in range(i + 1, p + 1):
                            a = self.face(p - 1, i, self.face(p, j, s))
                            b = self.face(p - 1, j - 1, self.face(p, i, s))
                            if a != b:
                                raise ValidationError("face identity fails", {"level": p, "i": i, "j": j})
                for g in self.acting.members:
                    gs = self.act(g, p, s)
                    for i in range(p + 1 if p else 0):
                        if self.face(p, i, gs) != self.act(g, p - 1, self.face(p, i, s)):
                            raise ValidationError("action does not commute with faces", {"level": p})
            if self.act(self.group.identity, p, 0) != 0:
                raise ValidationError("basepoint is not fixed")

    def to_json(self, max_level: int = 3) -> dict:
        def label(s) -> str:
            if s == BASEPOINT:
                return BASEPOINT
            return " <= ".join("|".join("".join(str(x + 1) for x in blk) for blk in q) for q in s)

        levels = []
        for p in range(max_level + 1):
            lvl = self.level(p)
            entry = {
                "level": p,
                "simplices": [label(s) for s in lvl],
                "faces": [[self.face(p, i, s) for s in range(len(lvl))] for i in range(p + 1)] if p else [],
                "degeneracies": ([[self.degeneracy(p, i, s) for s in range(len(lvl))] for i in range(p + 1)]
                                 if p < max_level else []),
            }
            levels.append(entry)
        return {"k": self.k, "basepoint": 0, "levels": levels}


def build_T(k_set: GSet | int) -> TComplex:
    """``T_K`` for an H-set ``K`` (an integer means the trivial group on ``k`` points)."""
    if isinstance(k_set, int):
        from .groups import catalog_group

        k_set = GSet.trivial(catalog_group("C1"), k_set)
    if k_set.size > MAX_POINTS:
        raise SizeBoundError(f"T_K is limited to {MAX_POINTS} points")
    return TComplex(k_set)


def nondegenerate_counts(t: TComplex, m: int) -> int:
    return len(t.nondegenerate(m))


def fixed_subcomplex(t: TComplex, l: Subgroup) -> TComplex:
    """Levelwise ``L``-fixed simplices: chains of ``L``-invariant partitions."""
    if l.parent is not t.group:
        raise PreconditionError("subgroup of another group")
    inv = [p for p in t._partitions() if all(t.poset.act(g, p) == p for g in l.members)]
    return TComplex(t.ground, acting=l, keep=inv)


def invariant_partitions(k_set: GSet, l: Subgroup) -> list[Partition]:
    pp = PartitionPoset(k_set)
    return [p for p in pp.elements if all(pp.act(g, p) == p for g in l.members)]


def normalized_complex(t: TComplex, reduced: bool = True) -> ChainComplex:
    """Chains on the non-degenerate simplices modulo the basepoint."""
    top = max(t.k, 1)
    nd = {m: t.nondegenerate(m) for m in range(top + 1)}
    pos = {m: {s: i for i, s in enumerate(v)} for m, v in nd.items()}
    dims = {m: len(v) for m, v in nd.items() if v}
    if not reduced:
        dims[0] = dims.get(0, 0) + 1
    diff = {}
    for m in range(1, top + 1):
        if not nd[m]:
            continue
        cols: list[dict] = []
        for s in nd[m]:
            col: dict[int, int] = {}
            for i in range(m + 1):
                f = t.face_chain(m, i, s)
                if f == BASEPOINT:
                    if not reduced and m == 1:
                        r = len(nd[0])
                        col[r] = col.get(r, 0) + (-1) ** i
                    continue
                r = pos[m - 1].get(f)
                if r is None:
                    continue  # degenerate faces vanish in the normalized complex
                col[r] = col.get(r, 0) + (-1) ** i
            cols.append({r: v for r, v in col.items() if v})
        diff[m] = Matrix(dims.get(m - 1, 0), dims[m], cols)
    return ChainComplex(dims, diff)


def t_homology(k_set: GSet | int, fixed: Subgroup | None = None) -> dict[int, int]:
    """Reduced rational homology of ``T_K`` (or of its ``L``-fixed subcomplex)."""
    t = build_T(k_set)
    if fixed is not None:
        t = fixed_subcomplex(t, fixed)
    return homology(normalized_complex(t))


# ---------------------------------------------------------------------------
# the proper part of the partition lattice


def order_complex(p: GPoset, reduced: bool = True) -> ChainComplex:
    """Chains of the nerve: strict chains of length ``q`` in degree ``q``.

    The reduced version adds the empty chain in degree ``-1``.
    """
    by_len: dict[int, list[tuple[int, ...]]] = {}
    for ch in p.chains():
        by_len.setdefault(len(ch) - 1, []).append(ch)
    if reduced:
        by_len[-1] = [()]
    pos = {q: {ch: i for i, ch in enumerate(v)} for q, v in by_len.items()}
    dims = {q: len(v) for q, v in by_len.items()}
    diff = {}
    for q, chs in by_len.items():
        if q - 1 not in by_len:
            continue
        cols = []
        for ch in chs:
            col = {}
            for i in range(len(ch)):
                col[pos[q - 1][ch[:i] + ch[i + 1:]]] = (-1) ** i
            cols.append(col)
        diff[q] = Matrix(dims[q - 1], dims[q], cols)
    return ChainComplex(dims, diff)


def proper_partition_nerve_homology(k: int) -> dict[int, int]:
    """Reduced homology of the nerve of the proper part of ``Π_k``.

    For ``k = 2`` the proper part is empty and the reduced homology is one
    class in degree ``-1``.
    """
    if not 2 <= k <= MAX_POINTS:
        raise SizeBoundError(f"k must lie in [2, {MAX_POINTS}]")
    from .groups import catalog_group

    pp = PartitionPoset(GSet.trivial(catalog_group("C1"), k))
    return homology(order_complex(pp.as_gposet(proper=True)))


# ---------------------------------------------------------------------------
# Snaith indexing


def integer_partitions(k: int) -> Iterator[tuple[int, ...]]:
    """Non-increasing tuples of positive integers summing to ``k``."""
    def rec(left: int, cap: int) -> Iterator[tuple[int, ...]]:
        if left == 0:
            yield ()
            return
        for x in range(min(left, cap), 0, -1):
            for rest in rec(left - x, x):
                yield (x,) + rest

    return rec(k, k)


@lru_cache(maxsize=None)
def partition_number(k: int) -> int:
    """``p(k)`` by Euler's pentagonal-number recurrence."""
    if k < 0:
        return 0
    if k == 0:
        return 1
    total = 0
    j = 1
    while True:
        g1 = j * (3 * j - 1) // 2
        if g1 > k:
            break
        sign = 1 if j % 2 else -1
        total += sign * partition_number(k - g1)
        g2 = j * (3 * j + 1) // 2
        if g2 <= k:
            total += sign * partition_number(k - g2)
        j += 1
    return total


def snaith_index_count(k: int) -> tuple[int, int]:
    """(multisets of positive integers summing to ``k``, integer partitions of ``k``)."""
    if not 0 <= k <= 40:
        raise SizeBoundError("k must lie in [0, 40]")
    return sum(1 for _ in integer_partitions(k)), partition_number(k)


def block_size_classes(k: int) -> int:
    """Number of ``Σ_k``-orbits of set partitions, via the block-size multiset."""
    return len({tuple(sorted(len(b) for b in p)) for p in set_partitions(range(k))})


def expected_rank(k: int) -> int:
    return factorial(k - 1)
