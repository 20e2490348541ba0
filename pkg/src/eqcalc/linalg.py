"""Exact sparse linear algebra over the rationals.

Matrices are stored column-wise as ``{row: value}`` dictionaries with
``int`` or ``Fraction`` entries.  Ranks are computed by fraction-free
column reduction on integer-scaled copies, so no floating point is ever
involved.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence, Union

from .errors import ValidationError

Number = Union[int, Fraction]


def _norm(x: Number) -> Number:
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def parse_number(x: object) -> Number:
    """Read an int, a Fraction, or a string such as ``"-3/4"``."""
    if isinstance(x, bool):
        raise ValueError("booleans are not matrix entries")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return _norm(x)
    if isinstance(x, str):
        return _norm(Fraction(x))
    raise ValueError(f"not an exact number: {x!r}")


class Matrix:
    """A sparse ``nrows x ncols`` matrix with exact entries."""

    __slots__ = ("nrows", "ncols", "cols")

    def __init__(self, nrows: int, ncols: int, cols: Sequence[dict] | None = None) -> None:
        self.nrows = nrows
        self.ncols = ncols
        if cols is None:
            self.cols = [dict() for _ in range(ncols)]
        else:
            if len(cols) != ncols:
                raise ValidationError("column count mismatch", {"expected": ncols, "got": len(cols)})
            self.cols = [{r: _norm(v) for r, v in c.items() if v} for c in cols]

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Matrix":
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, [{i: 1} for i in range(n)])

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[object]], ncols: int | None = None) -> "Matrix":
        nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        cols: list[dict] = [dict() for _ in range(ncols)]
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise ValidationError("ragged matrix", {"row": i})
            for j, x in enumerate(row):
                v = parse_number(x)
                if v:
                    cols[j][i] = v
        return cls(nrows, ncols, cols)

    def to_dense(self) -> list[list[Number]]:
        out: list[list[Number]] = [[0] * self.ncols for _ in range(self.nrows)]
        for j, c in enumerate(self.cols):
            for i, v in c.items():
                out[i][j] = v
        return out

    def entry(self, i: int, j: int) -> Number:
        return self.cols[j].get(i, 0)

    def is_zero(self) -> bool:
        return not any(self.cols)

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.nrows, self.ncols, self.cols) == (other.nrows, other.ncols, other.cols)

    def __repr__(self) -> str:
        return f"Matrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValidationError("shape mismatch in product",
                                  {"left": (self.nrows, self.ncols), "right": (other.nrows, other.ncols)})
        out = []
        mine = self.cols
        for col in other.cols:
            acc: dict = {}
            for k, b in col.items():
                for i, a in mine[k].items():
                    acc[i] = acc.get(i, 0) + a * b
            out.append({i: v for i, v in acc.items() if v})
        return Matrix(self.nrows, other.ncols, out)

    def __add__(self, other: "Matrix") -> "Matrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValidationError("shape mismatch in sum")
        out = []
        for a, b in zip(self.cols, other.cols):
            c = dict(a)
            for i, v in b.items():
                c[i] = c.get(i, 0) + v
            out.append({i: v for i, v in c.items() if v})
        return Matrix(self.nrows, self.ncols, out)

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, s: Number) -> "Matrix":
        if not s:
            return Matrix(self.nrows, self.ncols)
        return Matrix(self.nrows, self.ncols, [{i: v * s for i, v in c.items()} for c in self.cols])

    def transpose(self) -> "Matrix":
        out: list[dict] = [dict() for _ in range(self.nrows)]
        for j, c in enumerate(self.cols):
            for i, v in c.items():
                out[i][j] = v
        return Matrix(self.ncols, self.nrows, out)

    def is_integral(self) -> bool:
        return all(isinstance(v, int) for c in self.cols for v in c.values())

    def rank(self) -> int:
        return rank(self)


# --------------------------------------------------------------------------
# rank by fraction-free column reduction


def _integral_column(col: dict) -> dict:
    den = 1
    for v in col.values():
        if isinstance(v, Fraction):
            den = den * v.denominator // gcd(den, v.denominator)
    if den == 1:
        out = dict(col)
    else:
        out = {r: int(v * den) for r, v in col.items()}
    return _primitive(out)


def _primitive(v: dict) -> dict:
    g = 0
    for x in v.values():
        g = gcd(g, x)
        if g == 1:
            return v
    if g > 1:
        return {r: x // g for r, x in v.items()}
    return v


def reduce_columns(cols: Sequence[dict], skip: Iterable[int] = ()) -> dict[int, dict]:
    """Column-reduce ``cols`` and return ``{pivot_row: reduced column}``.

    Pivot rows are the largest row index of each reduced column.  Columns
    whose index is in ``skip`` are ignored; the caller guarantees they lie
    in the span of the other columns.
    """
    skipped = set(skip)
    pivots: dict[int, dict] = {}
    for j, col in enumerate(cols):
        if j in skipped or not col:
            continue
        v = _integral_column(col)
        while v:
            low = max(v)
            p = pivots.get(low)
            if p is None:
                if v[low] < 0:
                    v = {r: -x for r, x in v.items()}
                pivots[low] = v
                break
            a = p[low]
            b = v.pop(low)
            if a == 1:
                for r, x in p.items():
                    if r == low:
                        continue
                    y = v.get(r, 0) - b * x
                    if y:
                        v[r] = y
                    else:
                        v.pop(r, None)
            else:
                g = gcd(a, b)
                a, b = a // g, b // g
                w = {r: a * x for r, x in v.items()}
                for r, x in p.items():
                    if r == low:
                        continue
                    y = w.get(r, 0) - b * x
                    if y:
                        w[r] = y
                    else:
                        w.pop(r, None)
                v = _primitive(w)
    return pivots


def rank(m: Matrix) -> int:
    """Exact rank of a sparse matrix."""
    if m.nrows == 0 or m.ncols == 0:
        return 0
    # reduce the thinner side
    if m.ncols > m.nrows:
        m = m.transpose()
    return len(reduce_columns(m.cols))


# --------------------------------------------------------------------------
# small dense helpers over Fractions (used to build random diagrams)


def rref(rows: Sequence[Sequence[Number]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot column list."""
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return [], []
    ncols = len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def dense_rank(rows: Sequence[Sequence[Number]]) -> int:
    return len(rref(rows)[1])


def solve_columns(basis_cols: Sequence[Sequence[Number]], target: Sequence[Number]) -> list[Fraction]:
    """Coordinates of ``target`` in the span of linearly independent columns."""
    n = len(target)
    k = len(basis_cols)
    aug = [[Fraction(basis_cols[j][i]) for j in range(k)] + [Fraction(target[i])] for i in range(n)]
    red, piv = rref(aug)
    if k in piv:
        raise ValidationError("target not in span")
    coords = [Fraction(0)] * k
    for row, c in zip(red, piv):
        coords[c] = row[k]
    return coords


def inverse(rows: Sequence[Sequence[Number]]) -> list[list[Fraction]]:
    n = len(rows)
    aug = [[Fraction(x) for x in rows[i]] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)) or len(red) < n:
        raise ValidationError("matrix is singular")
    return [r[n:] for r in red]


# --------------------------------------------------------------------------
# Smith normal form invariants (dense, small integral matrices)


def smith_invariants(m: Matrix) -> list[int]:
    """Nonzero invariant factors of an integral matrix, in divisibility order."""
    if not m.is_integral():
        raise ValidationError("Smith normal form needs an integral matrix")
    a = [list(map(int, r)) for r in m.to_dense()]
    nr, nc = m.nrows, m.ncols
    out: list[int] = []
    t = 0
    while t < min(nr, nc):
        # pick smallest nonzero entry in the remaining block
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, nr):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    dirty = True
            for j in range(t + 1, nc):
                q = a[t][j] // p
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j]:
                    dirty = True
            if not dirty:
                bad = next(((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc) if a[i][j] % p), None)
                if bad is None:
                    break
                a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
                continue
            # move the smallest remainder into the pivot slot
            best = None
            for i in range(t, nr):
                if a[i][t] and (best is None or abs(a[i][t]) < abs(best[2])):
                    best = (i, t, a[i][t])
            for j in range(t, nc):
                if a[t][j] and (best is None or abs(a[t][j]) < abs(best[2])):
                    best = (t, j, a[t][j])
            i, j, _ = best
            if i != t:
                a[t], a[i] = a[i], a[t]
            if j != t:
                for row in a:
                    row[t], row[j] = row[j], row[t]
        out.append(abs(a[t][t]))
        t += 1
    return out
