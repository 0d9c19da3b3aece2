"""E1 page of the filtration by ``m1 + m2`` and window homology.

For a window ``[a, b)`` the first page has, for every level ``p`` and every
form on the line ``m1 + m2 = p``, the relative homology of the sublevel
pair tensored with ``H_*(S^1) = <e0, e1>``.  A class of singular degree
``d`` tensored with ``e_j`` sits in total degree ``d + j + 2p - 1``.  The
only differential maps the ``e0`` copy at level ``p`` to the ``e1`` copy at
level ``p - 1``:

    (D x)_{m1,m2} = sign * (m2 * x_{m1+1,m2} - m1 * x_{m1,m2+1})

and all higher differentials vanish, so homology is read off from ranks of
these matrices, separately for ``d = 0`` and ``d = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import comb
from typing import Iterable, Optional

from .boundary import INF, candidate_forms, in_spectrum, min_spec, next_spectrum_value
from .domain import LinearForm, ToricProfile, as_rational
from .errors import InvalidParameterError, InvalidThresholdError, SpectrumBoundaryError, TruncationError
from .linalg import sparse_rank
from .sublevel import RelativeHomology, induced_matrix, relative_homology


def parse_threshold(value) -> Fraction | float:
    if isinstance(value, str) and value.strip().lower() in ("inf", "infinity", "∞"):
        return INF
    if value == INF:
        return INF
    return as_rational(value)


@dataclass
class E1Page:
    """Nonzero relative-homology blocks of a window, grouped by level."""

    omega: ToricProfile
    a: Fraction
    b: Fraction | float
    levels: dict[int, tuple[RelativeHomology, ...]]

    def blocks(self, p: int) -> tuple[RelativeHomology, ...]:
        return self.levels.get(p, ())

    def dim(self, p: int, degree: int = 0) -> int:
        return sum(blk.rank(degree) for blk in self.blocks(p))

    def offsets(self, p: int, degree: int = 0) -> dict[LinearForm, tuple[int, RelativeHomology]]:
        out, pos = {}, 0
        for blk in self.blocks(p):
            out[blk.form] = (pos, blk)
            pos += blk.rank(degree)
        return out

    def forms(self, p: int) -> list[LinearForm]:
        return [blk.form for blk in self.blocks(p)]

    def to_json(self) -> dict:
        levels = {}
        for p in sorted(self.levels):
            levels[str(p)] = [
                {
                    "form": [blk.form.m1, blk.form.m2],
                    "h0": len(blk.h0),
                    "h1": len(blk.h1),
                    "h0_representatives": [[str(x), str(y)] for x, y in blk.representatives(self.omega)],
                }
                for blk in self.blocks(p)
            ]
        return {"a": str(self.a), "b": str(self.b) if self.b != INF else "inf", "levels": levels}


def _window(a, b) -> tuple[Fraction, Fraction | float]:
    a, b = parse_threshold(a), parse_threshold(b)
    if a == INF or a <= 0:
        raise InvalidThresholdError(f"lower threshold must be positive and finite, got {a}")
    if not a < b:
        raise InvalidThresholdError(f"window needs a < b, got [{a}, {b})")
    return a, b


def check_off_spectrum(omega: ToricProfile, *values) -> None:
    finite = [v for v in values if v != INF]
    if not finite:
        return
    for v in finite:
        if in_spectrum(omega, v):
            raise SpectrumBoundaryError(v)


def _line_extent(forms: list[LinearForm], p: int) -> tuple[int, int]:
    if forms:
        return min(f.m1 for f in forms), max(f.m1 for f in forms)
    return min(0, p), max(0, p)


def assemble_e1(
    omega: ToricProfile,
    a,
    b,
    p_range: Iterable[int],
    check_spectrum: bool = True,
    truncation_margin: int = 0,
    degree1: bool = True,
) -> E1Page:
    """Assemble the nonzero blocks for every level in ``p_range``.

    ``degree1=False`` skips forms that can only carry singular degree 1
    classes when ``b = inf``; callers that only look at degree 0 use it.

    With ``truncation_margin > 0`` the forms just outside the enumerated
    range on each line are also computed and must be zero.
    """
    a, b = _window(a, b)
    if check_spectrum:
        check_off_spectrum(omega, a, b)
    levels = {}
    for p in p_range:
        forms = candidate_forms(omega, p, a, b, separating=degree1)
        blocks = []
        for f in forms:
            blk = relative_homology(omega, f, a, b)
            if not blk.is_zero:
                blocks.append(blk)
        levels[p] = tuple(blocks)
        if truncation_margin > 0:
            lo, hi = _line_extent(forms, p)
            extra = list(range(lo - truncation_margin, lo)) + list(range(hi + 1, hi + 1 + truncation_margin))
            for m1 in extra:
                if not LinearForm.is_valid(m1, p - m1):
                    continue
                f = LinearForm(m1, p - m1)
                if f in forms:
                    continue
                if not relative_homology(omega, f, a, b).is_zero:
                    raise TruncationError(f"form {f} outside the scanned range carries homology")
    return E1Page(omega, a, b, levels)


@dataclass(frozen=True)
class DifferentialMatrix:
    """``D_p`` from the ``e0`` copy at level ``p`` to the ``e1`` copy at level ``p - 1``.

    Stored as sparse rows (one per target basis element).  ``sign`` is the
    global factor ``(-1)^{|x|}``; it is recorded but not applied, since it
    does not change ranks.
    """

    level: int
    degree: int
    sign: int
    rows: tuple[dict[int, Fraction], ...]
    n_cols: int

    @property
    def matrix(self) -> list[list[Fraction]]:
        return [[row.get(c, Fraction(0)) for c in range(self.n_cols)] for row in self.rows]

    @cached_property
    def rank(self) -> int:
        return sparse_rank(self.rows)

    @property
    def nullity(self) -> int:
        return self.n_cols - self.rank


def _neighbour_map(page: E1Page, p: int, degree: int, coeffs) -> list[dict[int, Fraction]]:
    """Sparse block matrix from level ``p`` to level ``p - 1``; ``coeffs(form)`` gives the
    coefficients for the targets ``form - (1,0)`` and ``form - (0,1)``."""
    targets = page.offsets(p - 1, degree)
    rows: list[dict[int, Fraction]] = [{} for _ in range(page.dim(p - 1, degree))]
    for s, (col0, sblk) in page.offsets(p, degree).items():
        c_left, c_down = coeffs(s)
        for (m1, m2), coef in (((s.m1 - 1, s.m2), c_left), ((s.m1, s.m2 - 1), c_down)):
            if coef == 0 or not LinearForm.is_valid(m1, m2):
                continue
            hit = targets.get(LinearForm(m1, m2))
            if hit is None:
                continue
            row0, tblk = hit
            for r, sub in enumerate(induced_matrix(sblk, tblk, degree)):
                row = rows[row0 + r]
                for c, x in enumerate(sub):
                    if x:
                        val = row.get(col0 + c, 0) + coef * x
                        if val:
                            row[col0 + c] = Fraction(val)
                        else:
                            row.pop(col0 + c, None)
    return rows


def differential(page: E1Page, p: int, degree: int = 0) -> DifferentialMatrix:
    rows = _neighbour_map(page, p, degree, lambda s: (s.m2, -s.m1))
    sign = 1 if degree % 2 else -1
    return DifferentialMatrix(p, degree, sign, tuple(rows), page.dim(p, degree))


@dataclass(frozen=True)
class BettiTable:
    a: Fraction
    b: Fraction | float
    betti: dict[int, int]
    snapped: dict[str, str] = field(default_factory=dict)

    def nonzero(self) -> dict[int, int]:
        return {n: d for n, d in self.betti.items() if d}

    def to_json(self) -> dict:
        out = {
            "a": str(self.a),
            "b": "inf" if self.b == INF else str(self.b),
            "betti": {str(n): d for n, d in sorted(self.betti.items())},
        }
        if self.snapped:
            out["snapped"] = self.snapped
        return out


def level_range(n_range: Iterable[int]) -> range:
    ns = list(n_range)
    return range(math.floor(min(ns) / 2) - 1, math.ceil(max(ns) / 2) + 2)


def betti_from_page(page: E1Page, n_range: Iterable[int]) -> dict[int, int]:
    ns = list(n_range)
    ranks: dict[tuple[int, int], int] = {}

    def rk(p: int, d: int) -> int:
        if (p, d) not in ranks:
            ranks[(p, d)] = differential(page, p, d).rank
        return ranks[(p, d)]

    out = {}
    for n in ns:
        if n % 2:
            p = (n + 1) // 2
            dim = (page.dim(p, 0) - rk(p, 0)) + (page.dim(p - 1, 1) - rk(p, 1))
        else:
            p = n // 2
            dim = (page.dim(p, 0) - rk(p + 1, 0)) + (page.dim(p, 1) - rk(p, 1))
        out[n] = dim
    return out


def betti(
    omega: ToricProfile,
    a,
    b,
    n_range: Iterable[int],
    check_spectrum: bool = True,
    truncation_margin: int = 0,
) -> BettiTable:
    """Dimensions of the window homology in each degree of ``n_range``."""
    ns = list(n_range)
    a, b = _window(a, b)
    page = assemble_e1(omega, a, b, level_range(ns), check_spectrum, truncation_margin)
    return BettiTable(a, b, betti_from_page(page, ns))


def snap_threshold(omega: ToricProfile, value) -> tuple[Fraction | float, bool]:
    """Move a threshold lying in the spectrum to the midpoint of the gap just above it."""
    value = parse_threshold(value)
    if value == INF:
        return value, False
    if in_spectrum(omega, value):
        return (value + next_spectrum_value(omega, value)) / 2, True
    return value, False


def default_delta(omega: ToricProfile) -> Fraction:
    return min_spec(omega) / 2


# -- maps between windows -------------------------------------------------------------


def _threshold_map(src: E1Page, tgt: E1Page, p: int, degree: int) -> list[dict[int, Fraction]]:
    """Sparse matrix of the enlargement map on level ``p`` blocks (same form, larger thresholds)."""
    targets = tgt.offsets(p, degree)
    rows: list[dict[int, Fraction]] = [{} for _ in range(tgt.dim(p, degree))]
    for f, (col0, sblk) in src.offsets(p, degree).items():
        hit = targets.get(f)
        if hit is None:
            continue
        row0, tblk = hit
        for r, sub in enumerate(induced_matrix(sblk, tblk, degree)):
            for c, x in enumerate(sub):
                if x:
                    rows[row0 + r][col0 + c] = Fraction(x)
    return rows


def _image_rank_on_kernel(d_rows, m_rows) -> int:
    """``rank(M restricted to ker D)``, as ``rank [D; M] - rank D``."""
    return sparse_rank(list(d_rows) + list(m_rows)) - sparse_rank(d_rows)


def window_map(omega: ToricProfile, delta, a, a_prime, degree: int) -> int:
    """Rank of the map ``H_degree[delta, a) -> H_degree[delta, a_prime)`` for odd ``degree``.

    The odd-degree homology is an extension of ``ker D_{k+1}`` (singular
    degree 0) by the cokernel of ``D_{k+1}`` in singular degree 1.  The
    rank returned is the sum of the ranks on these two graded pieces; it
    equals the true rank when the target has no degree-1 piece (always the
    case for ``a_prime = inf``) or when both pieces map isomorphically.
    """
    if degree % 2 != 1:
        raise InvalidParameterError("window_map is defined for odd degrees 2k+1")
    k = (degree - 1) // 2
    delta, a = _window(delta, a)
    a_prime = parse_threshold(a_prime)
    if not a < a_prime:
        raise InvalidThresholdError("need a < a_prime")
    levels = range(k, k + 2)
    src = assemble_e1(omega, delta, a, levels, check_spectrum=False)
    tgt = assemble_e1(omega, delta, a_prime, levels, check_spectrum=False, degree1=a_prime != INF)

    rank_q = _image_rank_on_kernel(differential(src, k + 1, 0).rows, _threshold_map(src, tgt, k + 1, 0))

    rank_s = 0
    if tgt.dim(k, 1):
        # image of the pushed classes in the cokernel of the target differential
        image_d = differential(tgt, k + 1, 1)
        shift = image_d.n_cols
        pushed = _threshold_map(src, tgt, k, 1)
        joined = [{**ri, **{c + shift: v for c, v in rp.items()}} for ri, rp in zip(image_d.rows, pushed)]
        rank_s = sparse_rank(joined) - image_d.rank
    return rank_q + rank_s


def u_map_homology(omega: ToricProfile, delta, k: int) -> int:
    """Rank of the shift-sum map ``H_{2k+3} -> H_{2k+1}`` on the window ``[delta, inf)``.

    The map sends ``x`` to ``(u x)_{m1,m2} = x_{m1+1,m2} + x_{m1,m2+1}``.
    """
    if k < 1:
        raise InvalidParameterError("k must be at least 1")
    page = assemble_e1(omega, delta, INF, range(k + 1, k + 3), check_spectrum=False, degree1=False)
    shift = _neighbour_map(page, k + 2, 0, lambda s: (1, 1))
    return _image_rank_on_kernel(differential(page, k + 2, 0).rows, shift)


def positive_generator(k: int) -> list[Fraction]:
    """Coefficients ``a_1..a_k`` of the degree ``2k+1`` class on the window ``[delta, inf)``.

    They solve ``(k - j) a_{j+1} = j a_j`` with ``a_1 = 1``, which gives the
    reciprocal binomials ``1 / C(k-1, j-1)``.
    """
    return [Fraction(1, comb(k - 1, j - 1)) for j in range(1, k + 1)]
