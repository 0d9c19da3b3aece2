"""Open sublevel sets of linear forms on the extended boundary curve.

All homology of the chain model is computed on the curve rather than on
the two-dimensional complement region; the radial retraction onto the
boundary identifies the two.  On a line every sublevel set is a disjoint
union of open intervals, so the relative homology of a pair of sublevel
sets is combinatorial:

* ``H_0(X_b, X_a)`` has one generator per component of ``X_b`` that
  contains no component of ``X_a``;
* ``H_1(X_b, X_a)`` is the kernel of ``H_0(X_a) -> H_0(X_b)``, with one
  generator per gap between consecutive ``a``-components inside the same
  ``b``-component.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Optional, Union

from .boundary import INF, point_at
from .domain import LinearForm, Point, ToricProfile, as_rational
from .errors import ContractError, DegenerateEdgeError, InvalidThresholdError

Param = Union[Fraction, float]


@dataclass(frozen=True)
class Interval:
    """Open parameter interval ``(lo, hi)``; either end may be infinite."""

    lo: Param
    hi: Param
    rep: Fraction  # canonical interior parameter

    def __contains__(self, s) -> bool:
        return self.lo < s < self.hi

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi


@dataclass(frozen=True)
class SublevelDecomposition:
    form: LinearForm
    threshold: Param
    intervals: tuple[Interval, ...]

    def locate(self, s) -> Optional[int]:
        for k, iv in enumerate(self.intervals):
            if s in iv:
                return k
        return None


def _check_threshold(a) -> Param:
    if a == INF or (isinstance(a, float) and math.isinf(a) and a > 0):
        return INF
    a = as_rational(a)
    if a <= 0:
        raise InvalidThresholdError(f"threshold must be positive, got {a}")
    return a


def _representative(omega: ToricProfile, f: LinearForm, lo, hi, values) -> Fraction:
    """Vertex of least value inside ``(lo, hi)`` (ties: smallest parameter), else an interior point."""
    best = None
    for i, val in enumerate(values):
        if lo < i < hi and (best is None or val < values[best]):
            best = i
    if best is not None:
        return Fraction(best)
    if lo == -INF:
        return Fraction(math.floor(hi)) - 1
    if hi == INF:
        return Fraction(math.ceil(lo)) + 1
    return (lo + hi) / 2


def decompose(omega: ToricProfile, f: LinearForm, a, strict: bool = False) -> SublevelDecomposition:
    """Maximal open intervals of ``{A_f < a}`` on the extended boundary, in parameter order.

    Exact for every form: an edge on which ``f`` is constant is simply in
    or out of the set.  ``strict=True`` instead refuses such forms with
    :class:`DegenerateEdgeError`.
    """
    a = _check_threshold(a)
    if strict:
        for i in range(omega.n_edges):
            if f(omega.edge(i)) == 0:
                raise DegenerateEdgeError(f, i)
    return _decompose(omega, f, a)


# Capacity searches revisit the same (form, threshold) pairs many times.
@lru_cache(maxsize=1 << 16)
def _decompose(omega: ToricProfile, f: LinearForm, a) -> SublevelDecomposition:
    n = omega.n_edges
    values = [f(v) for v in omega.vertices]
    if a == INF:
        return SublevelDecomposition(f, a, (Interval(-INF, INF, Fraction(0)),))

    spans: list[tuple[Param, Param]] = []
    start: Optional[Param] = None
    # x1-ray: A = values[0] - m1 * s for s <= 0
    if f.m1 <= 0:
        if values[0] < a:
            start = -INF
        else:
            spans.append((-INF, Fraction(values[0] - a, f.m1)))
    elif values[0] < a:
        start = Fraction(values[0] - a, f.m1)
    for i in range(n):
        u, w = values[i], values[i + 1]
        if start is not None:
            if w >= a:
                spans.append((start, i + (a - u) / (w - u)))
                start = None
        elif w < a:
            start = i + (a - u) / (w - u) if u != a else Fraction(i)
    # x2-ray: A = values[n] + m2 * (s - n) for s >= n
    if f.m2 <= 0:
        if start is not None:
            spans.append((start, INF))
        else:
            spans.append((n + Fraction(values[n] - a, -f.m2), INF))
    elif start is not None:
        spans.append((start, n + Fraction(a - values[n], f.m2)))

    intervals = tuple(Interval(lo, hi, _representative(omega, f, lo, hi, values)) for lo, hi in spans)
    return SublevelDecomposition(f, a, intervals)


@dataclass(frozen=True)
class RelativeHomology:
    """Bases of ``H_0`` and ``H_1`` of the pair (``b``-sublevel, ``a``-sublevel) for one form.

    ``h0`` lists indices into ``upper.intervals`` (components free of
    ``a``-intervals).  ``h1`` lists indices ``q`` into ``lower.intervals``;
    generator ``q`` is the class ``[I_{q+1}] - [I_q]`` of two consecutive
    ``a``-intervals lying in the same ``b``-interval.
    """

    form: LinearForm
    lower: SublevelDecomposition
    upper: SublevelDecomposition
    h0: tuple[int, ...]
    h1: tuple[int, ...]
    parent: tuple[int, ...]  # b-interval containing each a-interval

    @property
    def a(self):
        return self.lower.threshold

    @property
    def b(self):
        return self.upper.threshold

    def basis(self, degree: int) -> tuple[int, ...]:
        return self.h0 if degree == 0 else self.h1

    def rank(self, degree: int) -> int:
        return len(self.basis(degree))

    @property
    def is_zero(self) -> bool:
        return not self.h0 and not self.h1

    def representatives(self, omega: ToricProfile) -> list[Point]:
        return [point_at(omega, self.upper.intervals[j].rep) for j in self.h0]


def relative_homology(omega: ToricProfile, f: LinearForm, a, b) -> RelativeHomology:
    a, b = _check_threshold(a), _check_threshold(b)
    if not a < b:
        raise InvalidThresholdError(f"window needs a < b, got [{a}, {b})")
    return _relative_homology(omega, f, a, b)


@lru_cache(maxsize=1 << 16)
def _relative_homology(omega: ToricProfile, f: LinearForm, a, b) -> RelativeHomology:
    lower, upper = _decompose(omega, f, a), _decompose(omega, f, b)
    parent = []
    for iv in lower.intervals:
        k = upper.locate(iv.rep)
        assert k is not None and upper.intervals[k].contains_interval(iv)
        parent.append(k)
    occupied = set(parent)
    h0 = tuple(k for k in range(len(upper.intervals)) if k not in occupied)
    h1 = tuple(q for q in range(len(parent) - 1) if parent[q] == parent[q + 1])
    return RelativeHomology(f, lower, upper, h0, h1, tuple(parent))


@dataclass(frozen=True)
class InclusionMap:
    """Matrix of the map induced by inclusion of sublevel pairs, in degree 0 or 1.

    Rows index the target basis, columns the source basis.
    """

    source: RelativeHomology
    target: RelativeHomology
    degree: int
    matrix: tuple[tuple[int, ...], ...]


def _check_nested(source: RelativeHomology, target: RelativeHomology) -> None:
    s, t = source.form, target.form
    if (s.m1 - t.m1, s.m2 - t.m2) not in ((1, 0), (0, 1), (0, 0)):
        raise ContractError(f"form {s} is not an upward neighbour of {t}")


def _check_window(source: RelativeHomology, target: RelativeHomology) -> None:
    if (source.a, source.b) != (target.a, target.b):
        raise ContractError("source and target windows differ")


def induced_matrix(source: RelativeHomology, target: RelativeHomology, degree: int) -> list[list[int]]:
    """Map induced by the inclusion of pairs; requires ``source`` sublevels inside ``target`` ones.

    Nestedness is checked through the representative parameters, so this
    also serves the threshold-enlarging maps used for window comparisons.
    """
    rows = len(target.basis(degree))
    mat = [[0] * len(source.basis(degree)) for _ in range(rows)]
    if degree == 0:
        index = {k: r for r, k in enumerate(target.h0)}
        for c, k in enumerate(source.h0):
            iv = source.upper.intervals[k]
            j = target.upper.locate(iv.rep)
            if j is None or not target.upper.intervals[j].contains_interval(iv):
                raise ContractError("source sublevel is not contained in target sublevel")
            if j in index:
                mat[index[j]][c] = 1
        return mat
    # degree 1: push the pair of a-intervals forward and telescope over target gaps
    gap_row = {q: r for r, q in enumerate(target.h1)}
    image = []
    for iv in source.lower.intervals:
        j = target.lower.locate(iv.rep)
        if j is None or not target.lower.intervals[j].contains_interval(iv):
            raise ContractError("source sublevel is not contained in target sublevel")
        image.append(j)
    for c, q in enumerate(source.h1):
        for g in range(image[q], image[q + 1]):
            mat[gap_row[g]][c] += 1
    return mat


def inclusion_map(source: RelativeHomology, target: RelativeHomology, degree: int = 0) -> InclusionMap:
    """Map from the pair of form ``target + (1,0)`` or ``target + (0,1)`` into the pair of ``target``."""
    _check_nested(source, target)
    _check_window(source, target)
    mat = induced_matrix(source, target, degree)
    return InclusionMap(source, target, degree, tuple(tuple(r) for r in mat))
