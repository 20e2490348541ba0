"""Finite-dimensional chain complexes over Q and chain maps between them.

Differentials lower degree: ``diff[n]`` maps degree ``n`` to ``n - 1``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping

from .errors import InvalidInputError, ValidationError
from .linalg import Matrix, parse_number, reduce_columns, smith_invariants


class ChainComplex:
    """Graded vector spaces ``Q^dims[n]`` with differentials ``d_n``."""

    __slots__ = ("dims", "diff")

    def __init__(self, dims: Mapping[int, int], diff: Mapping[int, Matrix] | None = None,
                 check: bool = True) -> None:
        self.dims = {int(n): int(d) for n, d in sorted(dims.items()) if d}
        diff = dict(diff or {})
        self.diff: dict[int, Matrix] = {}
        for n, m in diff.items():
            if m.is_zero():
                continue
            self.diff[int(n)] = m
        if check:
            self.validate()

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    def d(self, n: int) -> Matrix:
        m = self.diff.get(n)
        if m is None:
            return Matrix.zeros(self.dim(n - 1), self.dim(n))
        return m

    def degrees(self) -> list[int]:
        return sorted(self.dims)

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def validate(self) -> None:
        for n, m in self.diff.items():
            if (m.nrows, m.ncols) != (self.dim(n - 1), self.dim(n)):
                raise ValidationError("differential shape does not match dimensions",
                                      {"degree": n, "shape": (m.nrows, m.ncols),
                                       "expected": (self.dim(n - 1), self.dim(n))})
        for n in self.diff:
            if n - 1 in self.diff and not (self.diff[n - 1] @ self.diff[n]).is_zero():
                raise ValidationError("d∘d is not zero", {"degree": n})

    def shift(self, k: int) -> "ChainComplex":
        """Return the complex with ``C'_n = C_{n-k}`` (suspension by ``k``).

        The differential picks up the sign ``(-1)^k``.
        """
        s = -1 if k % 2 else 1
        return ChainComplex({n + k: d for n, d in self.dims.items()},
                            {n + k: m.scale(s) for n, m in self.diff.items()}, check=False)

    def __repr__(self) -> str:
        return f"ChainComplex(dims={self.dims})"

    # serialization -------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "dims": {str(n): d for n, d in sorted(self.dims.items())},
            "differentials": {str(n): [[str(x) if not isinstance(x, int) else x for x in row]
                                       for row in m.to_dense()]
                              for n, m in sorted(self.diff.items())},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "ChainComplex":
        try:
            dims = {int(n): int(d) for n, d in data["dims"].items()}
            diff = {}
            for n, rows in data.get("differentials", {}).items():
                n = int(n)
                ncols = dims.get(n, 0)
                mat = Matrix.from_dense([[parse_number(x) for x in r] for r in rows], ncols=ncols)
                diff[n] = mat
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInputError(f"malformed chain complex JSON: {exc}") from exc
        return cls(dims, diff)

    @classmethod
    def loads(cls, text: str) -> "ChainComplex":
        return cls.from_json(json.loads(text))


def zero_complex() -> ChainComplex:
    return ChainComplex({})


def direct_sum(*cs: ChainComplex) -> ChainComplex:
    degs = sorted({n for c in cs for n in c.dims})
    dims = {n: sum(c.dim(n) for c in cs) for n in degs}
    diff = {}
    for n in degs:
        cols: list[dict] = []
        roff = 0
        for c in cs:
            m = c.d(n)
            for col in m.cols:
                cols.append({r + roff: v for r, v in col.items()})
            roff += c.dim(n - 1)
        diff[n] = Matrix(dims.get(n - 1, 0), dims[n], cols)
    return ChainComplex(dims, diff, check=False)


def tensor_with_vector_space(c: ChainComplex, k: int) -> ChainComplex:
    """``c ⊗ Q^k`` with basis ordered (basis of c) x (basis of Q^k)."""
    return direct_sum(*([c] * k)) if k else zero_complex()


@dataclass
class ChainMap:
    """Degreewise matrices ``mats[n]: source_n -> target_n``."""

    source: ChainComplex
    target: ChainComplex
    mats: dict = field(default_factory=dict)

    def at(self, n: int) -> Matrix:
        m = self.mats.get(n)
        if m is None:
            return Matrix.zeros(self.target.dim(n), self.source.dim(n))
        return m

    def validate(self) -> None:
        for n, m in self.mats.items():
            if (m.nrows, m.ncols) != (self.target.dim(n), self.source.dim(n)):
                raise ValidationError("chain map shape mismatch", {"degree": n})
        for n in set(self.source.dims) | set(self.target.dims):
            left = self.target.d(n) @ self.at(n)
            right = self.at(n - 1) @ self.source.d(n)
            if left != right:
                raise ValidationError("map does not commute with differentials", {"degree": n})

    def compose(self, first: "ChainMap") -> "ChainMap":
        """``self ∘ first``."""
        mats = {}
        for n in first.source.dims:
            if n in self.mats and n in first.mats:
                mats[n] = self.mats[n] @ first.mats[n]
        return ChainMap(first.source, self.target, mats)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ChainMap):
            return NotImplemented
        degs = set(self.source.dims) | set(other.source.dims)
        return all(self.at(n) == other.at(n) for n in degs)

    @classmethod
    def identity(cls, c: ChainComplex) -> "ChainMap":
        return cls(c, c, {n: Matrix.identity(d) for n, d in c.dims.items()})

    @classmethod
    def zero(cls, a: ChainComplex, b: ChainComplex) -> "ChainMap":
        return cls(a, b, {})


def cone(f: ChainMap) -> ChainComplex:
    """Mapping cone: ``cone_n = B_n ⊕ A_{n-1}``, ``d(b, a) = (db + f a, -da)``."""
    a, b = f.source, f.target
    degs = sorted(set(b.dims) | {n + 1 for n in a.dims})
    dims = {n: b.dim(n) + a.dim(n - 1) for n in degs}
    diff = {}
    for n in degs:
        cols: list[dict] = []
        db = b.d(n)
        cols.extend(dict(c) for c in db.cols)
        fa = f.at(n - 1)
        da = a.d(n - 1)
        off = b.dim(n - 1)
        for j in range(a.dim(n - 1)):
            col = dict(fa.cols[j])
            for r, v in da.cols[j].items():
                col[r + off] = -v
            cols.append(col)
        diff[n] = Matrix(dims.get(n - 1, 0), dims[n], cols)
    return ChainComplex(dims, diff, check=False)


# --------------------------------------------------------------------------
# homology


def differential_ranks(c: ChainComplex) -> dict[int, int]:
    """Rank of each ``d_n``, computed top-down with the clearing shortcut."""
    ranks: dict[int, int] = {}
    cleared: dict[int, set[int]] = {}
    for n in sorted(c.dims, reverse=True):
        m = c.diff.get(n)
        if m is None:
            ranks[n] = 0
            continue
        piv = reduce_columns(m.cols, skip=cleared.get(n, ()))
        ranks[n] = len(piv)
        cleared[n - 1] = set(piv)
    return ranks


def homology(c: ChainComplex, check: bool = True) -> dict[int, int]:
    """Betti numbers ``{n: rank H_n}``; degrees with zero homology are omitted."""
    if check:
        c.validate()
    ranks = differential_ranks(c)
    out = {}
    for n, d in c.dims.items():
        h = d - ranks.get(n, 0) - ranks.get(n + 1, 0)
        if h:
            out[n] = h
    return out


def is_acyclic(c: ChainComplex) -> bool:
    return not homology(c, check=False)


def torsion(c: ChainComplex) -> dict[int, list[int]]:
    """Torsion coefficients of integral homology (from Smith normal form of ``d_{n+1}``)."""
    out = {}
    for n in c.dims:
        m = c.diff.get(n + 1)
        if m is None:
            continue
        tors = [x for x in smith_invariants(m) if x > 1]
        if tors:
            out[n] = tors
    return out


def is_quasi_isomorphism(f: ChainMap) -> bool:
    return is_acyclic(cone(f))
