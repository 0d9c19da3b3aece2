"""Exact linear algebra over the rationals.

Matrices are lists of rows of :class:`Fraction` (ints are accepted).  Pivot
choice is deterministic: first nonzero entry in column order, preferring the
row whose pivot has the smallest numerator and denominator, which keeps
intermediate fractions small for the integer matrices produced here.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Matrix = list[list[Fraction]]


def to_fractions(mat: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in mat]


def _size(q: Fraction) -> int:
    return abs(q.numerator) * q.denominator


def rref(mat: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the pivot columns."""
    m = to_fractions(mat)
    if not m:
        return m, []
    rows, cols = len(m), len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        candidates = [i for i in range(r, rows) if m[i][c] != 0]
        if not candidates:
            continue
        p = min(candidates, key=lambda i: (_size(m[i][c]), i))
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                factor = m[i][c]
                m[i] = [x - factor * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(mat: Sequence[Sequence]) -> int:
    if not mat or not mat[0]:
        return 0
    return len(rref(mat)[1])


def nullspace(mat: Sequence[Sequence], ncols: int | None = None) -> Matrix:
    """Basis of the right kernel, one vector per free column.

    ``ncols`` gives the column count when ``mat`` has no rows.
    """
    if not mat:
        n = ncols or 0
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    n = len(mat[0])
    red, pivots = rref(mat)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * n
        v[fcol] = Fraction(1)
        for row, pc in enumerate(pivots):
            v[pc] = -red[row][fcol]
        basis.append(v)
    return basis


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum((a[i][k] * b[k][j] for k in range(inner)), Fraction(0)) for j in range(cols)] for i in range(len(a))]


def transpose(mat: Sequence[Sequence], ncols: int = 0) -> Matrix:
    if not mat:
        return [[] for _ in range(ncols)]
    return [list(col) for col in zip(*mat)]


SparseRows = dict[int, dict[int, Fraction]]


def sparse_rank(rows: "Iterable[dict[int, Fraction]]") -> int:
    """Rank of a matrix given as sparse rows ``{col: value}``.

    Rows are reduced one at a time against the stored pivot rows, keyed by
    leading column.  The matrices met here are close to bidiagonal, so the
    fill-in stays small.
    """
    pivots: dict[int, dict[int, Fraction]] = {}
    for row in rows:
        cur = {c: Fraction(v) for c, v in row.items() if v}
        while cur:
            lead = min(cur)
            piv = pivots.get(lead)
            if piv is None:
                inv = 1 / cur[lead]
                pivots[lead] = {c: v * inv for c, v in cur.items()}
                break
            factor = cur[lead]
            for c, v in piv.items():
                nv = cur.get(c, 0) - factor * v
                if nv:
                    cur[c] = nv
                else:
                    cur.pop(c, None)
    return len(pivots)


def dense_to_sparse(mat: Sequence[Sequence]) -> list[dict[int, Fraction]]:
    return [{c: Fraction(v) for c, v in enumerate(row) if v} for row in mat]
