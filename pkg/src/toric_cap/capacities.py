"""The capacities ``c_k``: filtered-homology search and closed forms.

``c_k`` is the least threshold ``a`` for which the degree ``2k+1`` class of
the window ``[delta, inf)`` is hit from ``[delta, a)``.  The general method
locates it by binary search over the finitely many threshold values where
the source window can change; the concave and convex formulas serve as
independent cross-checks.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .boundary import INF, SpectrumEntry, check_nice, cone_forms_on_line, in_spectrum, spectrum
from .domain import LinearForm, Point, ToricProfile, as_rational, classify, includes, scale
from .errors import ContractError, InvalidParameterError
from .homology import default_delta, window_map


@dataclass(frozen=True)
class CapacityResult:
    """``witness`` is a :class:`SpectrumEntry` for the general method and
    ``(j, point)`` for the closed formulas."""

    k: int
    value: Fraction
    method: str  # general | concave_formula | convex_formula
    witness: object = None

    def witness_text(self) -> str:
        w = self.witness
        if isinstance(w, SpectrumEntry):
            f = w.form
            form = f"({f.m1},{f.m2})" if f else f"m={w.m}"
            x, y = w.point.location
            return f"{w.kind} {form} at ({x},{y})"
        if isinstance(w, tuple):
            j, (x, y) = w
            return f"j={j} at ({x},{y})"
        return ""


def _check_k(k: int) -> None:
    if not isinstance(k, int) or k < 1:
        raise InvalidParameterError(f"k must be a positive integer, got {k!r}")


def _initial_bound(omega: ToricProfile, k: int) -> Fraction:
    # Any profile sits inside the triangle x1 + x2 <= R; used only as a
    # starting guess, the search widens it when the top window fails.
    r = max(x + y for x, y in omega.vertices)
    return r * ((k + 1) // 2)


def threshold_candidates(omega: ToricProfile, k: int, lo: Fraction, hi: Fraction) -> list[Fraction]:
    """Values in ``(lo, hi]`` at which a sublevel set of a form on line ``k`` or ``k+1`` changes.

    These are the values at vertices lying in the closed min or max cone of
    the form, so they include every spectrum value on those lines.
    """
    vals = set()
    for p in (k, k + 1):
        for i in range(omega.n_edges + 1):
            for kind in ("min", "max"):
                for f in cone_forms_on_line(omega, i, p, kind, lo=lo, hi=hi, hi_closed=True):
                    vals.add(f(omega.vertices[i]))
    return sorted(v for v in vals if lo < v <= hi)


def _witness(omega: ToricProfile, value: Fraction, k: int) -> Optional[SpectrumEntry]:
    hits = spectrum(omega, value, value)
    # prefer an entry of the matching degree
    hits.sort(key=lambda e: (e.index not in (2 * k + 1, 2 * k + 2), e.sort_key()))
    return hits[0] if hits else None


def c_k_general(omega: ToricProfile, k: int) -> CapacityResult:
    """Exact ``c_k`` from the window maps ``[delta, a) -> [delta, inf)`` in degree ``2k+1``."""
    _check_k(k)
    delta = default_delta(omega)
    degree = 2 * k + 1

    def hits(a: Fraction) -> bool:
        return window_map(omega, delta, a, INF, degree) >= 1

    bound = _initial_bound(omega, k)
    while True:
        cands = threshold_candidates(omega, k, delta, 2 * bound)
        low = [c for c in cands if c <= bound]
        upper = [c for c in cands if c > bound]
        top = upper[0] if upper else 2 * bound
        if low and hits((low[-1] + top) / 2):
            break
        bound *= 2
    # the rank only changes at candidate values, and it is monotone in a
    gaps = [(c + d) / 2 for c, d in zip(low, low[1:] + [top])]
    lo, hi = 0, len(low) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if hits(gaps[mid]):
            hi = mid
        else:
            lo = mid + 1
    value = low[lo]
    return CapacityResult(k, value, "general", _witness(omega, value, k))


def _boundary_points(omega: ToricProfile) -> tuple[Point, ...]:
    return omega.vertices


def c_k_concave(omega: ToricProfile, k: int) -> CapacityResult:
    """``max_j min_x (j x1 + (k+1-j) x2)`` over the closed complement, ``1 <= j <= k``.

    For positive coefficients the minimum over the complement region is
    attained on its boundary curve; the axis rays only increase the form,
    and an affine function on a segment is extremal at an end, so the
    polygon vertices suffice.
    """
    _check_k(k)
    if not classify(omega).concave:
        raise ContractError("closed concave formula needs a concave profile")
    best = None
    for j in range(1, k + 1):
        f = LinearForm(j, k + 1 - j)
        p = min(_boundary_points(omega), key=f)
        if best is None or f(p) > best[0]:
            best = (f(p), j, p)
    return CapacityResult(k, best[0], "concave_formula", (best[1], best[2]))


def c_k_convex(omega: ToricProfile, k: int) -> CapacityResult:
    """``min_j max_x (j x1 + (k-j) x2)`` over the region, ``0 <= j <= k``.

    The region is the convex hull of the origin and the vertices, so the
    maximum of a form with nonnegative coefficients sits at a vertex.
    """
    _check_k(k)
    if not classify(omega).weakly_convex:
        raise ContractError("closed convex formula needs a weakly convex profile")
    best = None
    for j in range(0, k + 1):
        a, b = j, k - j
        p = max(_boundary_points(omega), key=lambda v: a * v[0] + b * v[1])
        val = a * p[0] + b * p[1]
        if best is None or val < best[0]:
            best = (val, j, p)
    return CapacityResult(k, best[0], "convex_formula", (best[1], best[2]))


def c_k_formula(omega: ToricProfile, k: int) -> CapacityResult:
    cls = classify(omega)
    if cls.concave:
        return c_k_concave(omega, k)
    if cls.weakly_convex:
        return c_k_convex(omega, k)
    raise ContractError("no closed formula applies to this profile")


def c_k(omega: ToricProfile, k: int, method: str = "auto") -> CapacityResult:
    if method == "general":
        return c_k_general(omega, k)
    if method == "formula":
        return c_k_formula(omega, k)
    if method == "auto":
        cls = classify(omega)
        return c_k_formula(omega, k) if (cls.concave or cls.weakly_convex) else c_k_general(omega, k)
    raise InvalidParameterError(f"unknown method {method!r}")


def thread_count() -> int:
    raw = os.environ.get("TORIC_CAP_THREADS", "1")
    try:
        n = int(raw)
    except ValueError as exc:
        raise InvalidParameterError(f"TORIC_CAP_THREADS must be an integer, got {raw!r}") from exc
    return max(1, n)


def capacity_sequence(omega: ToricProfile, k_max: int, method: str = "auto", threads: Optional[int] = None) -> list[CapacityResult]:
    """``c_1 .. c_{k_max}``, computed as independent jobs; results are in ``k`` order."""
    _check_k(k_max)
    threads = threads or thread_count()
    ks = range(1, k_max + 1)
    if threads == 1:
        return [c_k(omega, k, method) for k in ks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda k: c_k(omega, k, method), ks))


# -- asymptotics ----------------------------------------------------------------------


def asymptotic_limit(omega: ToricProfile) -> Fraction:
    """Exact maximum of ``min(x1, x2)`` over the region.

    The maximum is attained at a vertex or where an edge crosses the
    diagonal; the diagonal exit point alone is not enough for profiles that
    bulge out beyond it on one side.
    """
    best = max(min(x, y) for x, y in omega.vertices)
    for i in range(omega.n_edges):
        (x0, y0), (x1, y1) = omega.vertices[i], omega.vertices[i + 1]
        d0, d1 = x0 - y0, x1 - y1
        if d0 * d1 < 0:
            t = d0 / (d0 - d1)
            best = max(best, x0 + t * (x1 - x0))
    return best


def inner_convex(omega: ToricProfile, eta: Fraction = Fraction(1, 64)) -> ToricProfile:
    """A convex region inside ``omega`` whose ``max min(x1, x2)`` is close to that of ``omega``.

    The square over the maximiser is used when it fits (then the two maxima
    agree); otherwise a thin triangle reaching ``(1 - eta)`` of the way to the
    maximiser, narrowed until it fits.
    """
    a = asymptotic_limit(omega)
    square = ToricProfile.from_points([(a, 0), (a, a), (0, a)])
    if includes(square, omega):
        return square
    q = _best_point(omega)
    t = ((1 - eta) * q[0], (1 - eta) * q[1])
    s = min(t[0] + t[1], omega.rho0, omega.rho90) / 2
    for _ in range(64):
        tri = ToricProfile.from_points([(s, 0), t, (0, s)])
        if includes(tri, omega):
            return tri
        s /= 2
    raise ContractError("no inner convex comparison region found")


def _best_point(omega: ToricProfile) -> Point:
    a = asymptotic_limit(omega)
    for v in omega.vertices:
        if min(v) == a:
            return v
    for i in range(omega.n_edges):
        (x0, y0), (x1, y1) = omega.vertices[i], omega.vertices[i + 1]
        d0, d1 = x0 - y0, x1 - y1
        if d0 * d1 < 0:
            t = d0 / (d0 - d1)
            p = (x0 + t * (x1 - x0), y0 + t * (y1 - y0))
            if p[0] == a:
                return p
    raise AssertionError("maximiser not found")


def outer_concave(omega: ToricProfile, margin: Fraction = Fraction(1, 8)) -> ToricProfile:
    """A concave region containing ``omega`` with ``max min(x1, x2)`` exceeded by ``margin``."""
    c = asymptotic_limit(omega) + margin
    big = max(max(x, y) for x, y in omega.vertices)
    r = c + 1
    while True:
        cand = ToricProfile.from_points([(r, 0), (c, c), (0, r)])
        if includes(omega, cand):
            return cand
        r = max(2 * r, big + c)


# -- property checks ------------------------------------------------------------------


@dataclass
class PropertyReport:
    checks: dict[str, bool] = field(default_factory=dict)
    failures: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def record(self, name: str, ok: bool, **data) -> None:
        self.checks[name] = self.checks.get(name, True) and ok
        if not ok:
            self.failures.append({"check": name, **{k: str(v) for k, v in data.items()}})


def verify_properties(
    omega: ToricProfile,
    omega_prime: ToricProfile,
    c,
    k_max: int,
    compute: Callable[[ToricProfile, int], CapacityResult] = c_k_general,
) -> PropertyReport:
    """Inclusion monotonicity, scaling, spectrality and monotonicity in ``k``.

    Inclusion is only checked when ``omega`` lies inside ``omega_prime``.
    """
    c = as_rational(c)
    report = PropertyReport()
    vals = [compute(omega, k).value for k in range(1, k_max + 1)]
    if includes(omega, omega_prime):
        for k, v in enumerate(vals, 1):
            w = compute(omega_prime, k).value
            report.record("inclusion", v <= w, k=k, inner=v, outer=w)
    scaled = scale(omega, c)
    for k, v in enumerate(vals, 1):
        w = compute(scaled, k).value
        report.record("scaling", w == c * v, k=k, value=v, scaled=w)
    for k, v in enumerate(vals, 1):
        report.record("spectrality", in_spectrum(omega, v), k=k, value=v)
    for k in range(1, k_max):
        report.record("monotone_in_k", vals[k - 1] <= vals[k], k=k, value=vals[k - 1], next=vals[k])
    nice = check_nice(omega, max(vals))
    if not nice.is_nice:
        report.failures.append({"check": "note", "detail": f"{len(nice.violations)} niceness violations"})
    return report
