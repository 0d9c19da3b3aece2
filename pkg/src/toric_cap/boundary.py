"""The extended boundary curve, critical points of linear forms and the action spectrum.

The extended boundary is the polyline of the region together with the two
axis rays beyond its end points.  It is parametrised by a single rational
parameter ``s``: the x1-ray is ``s <= 0`` (point ``(rho0 - s, 0)``), edge
``i`` is ``i <= s <= i + 1``, and the x2-ray is ``s >= n``.

On a polygon every linear form is affine on each piece, so a critical
point is a vertex where the form has a strict local extremum along the
polyline.  The forms for which vertex ``v`` is such an extremum fill an
open cone spanned by the normals of the two adjacent pieces; the spectrum
is enumerated cone by cone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Union

from .domain import LinearForm, Point, ToricProfile, as_rational, cross, dot
from .errors import DegenerateEdgeError, DegenerateTangentError, InvalidParameterError, TruncationError

INF = math.inf
Threshold = Union[Fraction, float]

X_RAY = (Fraction(-1), Fraction(0))  # direction of travel along the x1-ray toward the corner
Y_RAY = (Fraction(0), Fraction(1))


# -- geometry of the extended curve -------------------------------------------------


def incoming(omega: ToricProfile, i: int) -> Point:
    """Direction of travel arriving at vertex ``i`` (the x1-ray for the first corner)."""
    return X_RAY if i == 0 else omega.edge(i - 1)


def outgoing(omega: ToricProfile, i: int) -> Point:
    return Y_RAY if i == omega.n_edges else omega.edge(i)


def point_at(omega: ToricProfile, s: Fraction) -> Point:
    n = omega.n_edges
    if s <= 0:
        return (omega.rho0 - s, Fraction(0))
    if s >= n:
        return (Fraction(0), omega.rho90 + (s - n))
    i = int(math.floor(s))
    t = s - i
    (x0, y0), (x1, y1) = omega.vertices[i], omega.vertices[i + 1]
    return (x0 + t * (x1 - x0), y0 + t * (y1 - y0))


def corner_slopes(omega: ToricProfile) -> tuple[Fraction, Fraction]:
    """Slopes ``(t1, t2)``: the first edge is spanned by ``(-t1, 1)``, the last by ``(1, -t2)``."""
    dx, dy = omega.edge(0)
    if dy == 0:
        raise DegenerateTangentError("first edge is horizontal")
    t1 = -dx / dy
    dx, dy = omega.edge(omega.n_edges - 1)
    if dx == 0:
        raise DegenerateTangentError("last edge is vertical")
    t2 = -dy / dx
    return t1, t2


def primitive_normal(omega: ToricProfile, i: int) -> tuple[int, int]:
    """Primitive integer normal of edge ``i``, oriented so its form is positive on the edge."""
    dx, dy = omega.edge(i)
    den = dx.denominator * dy.denominator // math.gcd(dx.denominator, dy.denominator)
    a, b = int(dx * den), int(dy * den)
    g = math.gcd(a, b)
    n1, n2 = b // g, -a // g
    if n1 * omega.vertices[i][0] + n2 * omega.vertices[i][1] < 0:
        n1, n2 = -n1, -n2
    return n1, n2


# -- integer ranges on a line m1 + m2 = p ---------------------------------------------


def _int_range(constraints) -> Optional[tuple[float, float]]:
    """Integers ``m`` with ``alpha*m + beta (op) 0`` for all constraints, as a (lo, hi) pair.

    Bounds may be infinite; ``None`` means empty.
    """
    lo, hi = -INF, INF
    for alpha, beta, op in constraints:
        if alpha == 0:
            ok = {">=": beta >= 0, ">": beta > 0, "<=": beta <= 0, "<": beta < 0}[op]
            if not ok:
                return None
            continue
        if alpha < 0:
            alpha, beta = -alpha, -beta
            op = {">=": "<=", ">": "<", "<=": ">=", "<": ">"}[op]
        root = Fraction(-beta) / alpha
        if op == ">=":
            lo = max(lo, math.ceil(root))
        elif op == ">":
            lo = max(lo, math.floor(root) + 1)
        elif op == "<=":
            hi = min(hi, math.floor(root))
        else:
            hi = min(hi, math.ceil(root) - 1)
    if lo > hi:
        return None
    return lo, hi


def _on_line(u: Point, p: int) -> tuple[Fraction, Fraction]:
    """Coefficients of ``f . u`` as an affine function of m1 when ``f = (m1, p - m1)``."""
    return u[0] - u[1], p * u[1]


def cone_forms_on_line(
    omega: ToricProfile,
    i: int,
    p: int,
    kind: str,
    lo: Threshold = -INF,
    hi: Threshold = INF,
    closed: bool = True,
    hi_closed: bool = False,
    m1_bounds: tuple[Threshold, Threshold] = (-INF, INF),
) -> list[LinearForm]:
    """Forms on the line ``m1 + m2 = p`` for which vertex ``i`` is a local min (``kind='min'``)
    or max of the form along the curve, with value at the vertex in ``[lo, hi)``.

    ``closed`` admits forms constant on an adjacent piece; ``m1_bounds``
    restricts the first coefficient further.
    """
    sin, sout = ("<=", ">=") if kind == "min" else (">=", "<=")
    if not closed:
        sin, sout = sin[0], sout[0]
    v = omega.vertices[i]
    cons = [(*_on_line(incoming(omega, i), p), sin), (*_on_line(outgoing(omega, i), p), sout)]
    val = _on_line(v, p)
    if lo != -INF:
        cons.append((val[0], val[1] - lo, ">="))
    if hi != INF:
        cons.append((val[0], val[1] - hi, "<=" if hi_closed else "<"))
    if m1_bounds[0] != -INF:
        cons.append((Fraction(1), -Fraction(m1_bounds[0]), ">="))
    if m1_bounds[1] != INF:
        cons.append((Fraction(1), -Fraction(m1_bounds[1]), "<="))
    rng = _int_range(cons)
    if rng is None:
        return []
    a, b = rng
    if a == -INF or b == INF:
        raise TruncationError(f"unbounded cone at vertex {i} on line {p}")
    return [LinearForm(m, p - m) for m in range(a, b + 1) if LinearForm.is_valid(m, p - m)]


def candidate_forms(
    omega: ToricProfile, p: int, a: Threshold, b: Threshold, separating: bool = True
) -> list[LinearForm]:
    """Forms on line ``p`` whose relative homology in the window ``[a, b)`` may be nonzero.

    The topology of an open sublevel set changes only when the threshold
    crosses the value of a local extremum (a vertex, or a plateau whose end
    vertices lie on the boundary of a closed cone).  For ``b = inf`` only
    the forms with empty ``a``-sublevel (positive forms) and the forms with
    a separating local maximum above ``a`` can contribute; the latter only
    carry degree-1 classes and are skipped with ``separating=False``.
    """
    forms: set[LinearForm] = set()
    n = omega.n_edges
    if b == INF:
        forms.update(LinearForm(m, p - m) for m in range(1, p))
        for i in range(1, n if separating else 1):
            bounds = _separation_bounds(omega, i, p, a)
            forms.update(cone_forms_on_line(omega, i, p, "max", lo=a, m1_bounds=bounds))
    else:
        for i in range(0, n + 1):
            for kind in ("min", "max"):
                forms.update(cone_forms_on_line(omega, i, p, kind, lo=a, hi=b))
    return sorted(forms)


def _separation_bounds(omega: ToricProfile, i: int, p: int, a: Fraction) -> tuple[Threshold, Threshold]:
    """Range of ``m1`` on line ``p`` outside which a maximum at vertex ``i`` cannot separate the ``a``-sublevel set.

    A separating maximum needs points below ``a`` on both sides of the
    vertex.  For ``m1 -> +inf`` the axis ray after the vertex always dips
    below, so some earlier vertex must; along the line ``f(v_j)`` is
    ``m1 (x_j - y_j) + p y_j``, which stays at least ``a`` for large ``m1``
    exactly when ``x_j > y_j`` (or ties with ``p y_j >= a``).  The case
    ``m1 -> -inf`` is the mirror image with the later vertices.
    """

    def side(js, sign):
        limit = None
        for j in js:
            x, y = omega.vertices[j]
            d = sign * (x - y)
            if d < 0 or (d == 0 and p * y < a):
                return sign * INF  # the family really is unbounded on this side
            if d > 0:
                root = (a - p * y) / d  # f(v_j) < a  iff  sign * m1 < root
                limit = root if limit is None else max(limit, root)
        return INF if limit is None else sign * (math.floor(limit) + 1)

    return side(range(i + 1, omega.n_edges + 1), -1), side(range(0, i), 1)


# -- critical points and spectrum -----------------------------------------------------


@dataclass(frozen=True)
class CriticalPoint:
    """A critical datum on the boundary.

    ``kind`` is ``corner_x``, ``corner_y``, ``interior`` (a vertex that is a
    strict local extremum) or ``edge`` (an edge on which the form is constant
    and which is a local extremum set).  ``vertex`` is the vertex index, or
    the edge index for ``edge``.
    """

    kind: str
    location: Point
    vertex: int
    mu: Optional[int] = None
    form: Optional[LinearForm] = None


@dataclass(frozen=True)
class SpectrumEntry:
    point: CriticalPoint
    m: int
    action: Fraction
    index: int

    @property
    def kind(self) -> str:
        return self.point.kind

    @property
    def form(self) -> Optional[LinearForm]:
        return self.point.form

    @property
    def level(self) -> Optional[int]:
        return None if self.point.form is None else self.point.form.level

    def sort_key(self):
        order = {"corner_x": 0, "corner_y": 1, "interior": 2, "edge": 3}[self.kind]
        f = self.form
        return (self.action, order, self.m, (f.m1, f.m2) if f else (0, 0), self.point.vertex)


def _strict_extremum(fu_in, fu_out) -> Optional[int]:
    if fu_in < 0 < fu_out:
        return 0
    if fu_in > 0 > fu_out:
        return 1
    return None


def critical_points(omega: ToricProfile, f: LinearForm, strict: bool = False) -> list[CriticalPoint]:
    """Interior polygon vertices at which ``f`` has a strict local extremum with positive value.

    With ``strict=True`` a form that is constant on some edge raises
    :class:`DegenerateEdgeError` instead of being analysed.
    """
    if strict:
        for i in range(omega.n_edges):
            if f(omega.edge(i)) == 0:
                raise DegenerateEdgeError(f, i)
    out = []
    for i in range(1, omega.n_edges):
        v = omega.vertices[i]
        mu = _strict_extremum(f(incoming(omega, i)), f(outgoing(omega, i)))
        if mu is not None and f(v) > 0:
            out.append(CriticalPoint("interior", v, i, mu, f))
    return out


def _interior_cone(omega: ToricProfile, i: int) -> tuple[str, Point, Point]:
    """The open cone of vertex ``i`` on which the form is positive at the vertex.

    Returns the extremum kind and the two boundary rays.  Since polar angle
    increases strictly along the curve, the form ``cross(v, .)`` is positive
    on both adjacent pieces and so lies outside both closed cones; the sign of
    ``f . v`` is therefore constant on each cone.
    """
    uin, uout = incoming(omega, i), outgoing(omega, i)
    r1 = (-uin[1], uin[0])
    if dot(r1, uout) < 0:
        r1 = (-r1[0], -r1[1])
    r2 = (-uout[1], uout[0])
    if dot(r2, uin) > 0:
        r2 = (-r2[0], -r2[1])
    v = omega.vertices[i]
    if dot(r1, v) > 0:
        return "min", r1, r2
    return "max", (-r1[0], -r1[1]), (-r2[0], -r2[1])


def _interior_entries(omega: ToricProfile, i: int, a_max: Fraction, a_min=-INF) -> Iterator[SpectrumEntry]:
    kind, r1, r2 = _interior_cone(omega, i)
    v = omega.vertices[i]
    far = [(r[0] * a_max / dot(r, v), r[1] * a_max / dot(r, v)) for r in (r1, r2)]
    sums = [0] + [x + y for x, y in far]
    mu = 0 if kind == "min" else 1
    for p in range(math.floor(min(sums)), math.ceil(max(sums)) + 1):
        for f in cone_forms_on_line(omega, i, p, kind, lo=a_min, hi=a_max, closed=False, hi_closed=True):
            cp = CriticalPoint("interior", v, i, mu, f)
            yield SpectrumEntry(cp, math.gcd(f.m1, f.m2), f(v), 2 * f.level + mu - 1)


def plateau_type(omega: ToricProfile, i: int, normal: tuple[int, int]) -> Optional[int]:
    """0 or 1 if edge ``i`` is a local min/max set of the form ``normal``; ``None`` otherwise."""
    prev = incoming(omega, i)
    nxt = outgoing(omega, i + 1)
    return _strict_extremum(dot(normal, prev), dot(normal, nxt))


def _edge_entries(omega: ToricProfile, i: int, a_max: Fraction) -> Iterator[SpectrumEntry]:
    n = primitive_normal(omega, i)
    mu = plateau_type(omega, i, n)
    if mu is None:
        return
    v0, v1 = omega.vertices[i], omega.vertices[i + 1]
    base = n[0] * v0[0] + n[1] * v0[1]
    mid = ((v0[0] + v1[0]) / 2, (v0[1] + v1[1]) / 2)
    k = 1
    while k * base <= a_max:
        f = LinearForm(k * n[0], k * n[1])
        yield SpectrumEntry(CriticalPoint("edge", mid, i, mu, f), k, k * base, 2 * f.level + mu - 1)
        k += 1


def _corner_entries(omega: ToricProfile, a_max: Fraction) -> Iterator[SpectrumEntry]:
    t1, t2 = corner_slopes(omega)
    n = omega.n_edges
    for kind, rho, t, vid in (("corner_x", omega.rho0, t1, 0), ("corner_y", omega.rho90, t2, n)):
        m = 1
        while m * rho <= a_max:
            cp = CriticalPoint(kind, omega.vertices[vid], vid)
            yield SpectrumEntry(cp, m, m * rho, 1 + 2 * (m + math.floor(m * t)))
            m += 1


def spectrum(omega: ToricProfile, a_max, a_min=None) -> list[SpectrumEntry]:
    """All spectrum entries with action in ``[a_min, a_max]``, sorted by action.

    Besides the two corner families and strict vertex extrema this
    includes ``edge`` entries: edges on which a form is constant and which
    are local extremum sets.  Topologically these act as nondegenerate
    critical points of index ``mu``.
    """
    a_max = as_rational(a_max)
    if a_max <= 0:
        raise InvalidParameterError("a_max must be positive")
    lo = -INF if a_min is None else as_rational(a_min)
    entries = list(_corner_entries(omega, a_max))
    for i in range(1, omega.n_edges):
        entries.extend(_interior_entries(omega, i, a_max, lo))
    for i in range(omega.n_edges):
        entries.extend(_edge_entries(omega, i, a_max))
    entries = [e for e in entries if e.action >= lo]
    entries.sort(key=SpectrumEntry.sort_key)
    return entries


def spectrum_values(omega: ToricProfile, a_max) -> list[Fraction]:
    return sorted({e.action for e in spectrum(omega, a_max)})


def in_spectrum(omega: ToricProfile, value) -> bool:
    value = as_rational(value)
    return value > 0 and bool(spectrum(omega, value, value))


def min_spec(omega: ToricProfile) -> Fraction:
    bound = min(omega.rho0, omega.rho90)
    return min(e.action for e in spectrum(omega, bound))


def next_spectrum_value(omega: ToricProfile, value: Fraction) -> Fraction:
    """Smallest spectrum value strictly above ``value``."""
    bound = max(value, Fraction(0)) + min(omega.rho0, omega.rho90)
    return min(v for v in spectrum_values(omega, bound) if v > value)


def prev_spectrum_value(omega: ToricProfile, value: Fraction) -> Optional[Fraction]:
    below = [v for v in spectrum_values(omega, value) if v < value]
    return below[-1] if below else None


# -- niceness -------------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str  # degenerate_edge | corner_critical | action_collision
    detail: tuple


@dataclass(frozen=True)
class NicenessReport:
    a_max: Fraction
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def is_nice(self) -> bool:
        return not self.violations


def check_nice(omega: ToricProfile, a_max, k_max: Optional[int] = None) -> NicenessReport:
    """Scan the spectrum up to ``a_max`` for the obstructions to the generic class.

    Only degeneracies that are visible to sublevel topology are reported:
    an edge on which a form is constant counts when it is a local extremum
    set, and a corner counts as critical when such an edge ends at it.
    Constant edges through which the form stays monotone do not change any
    sublevel set and are ignored.  ``k_max`` restricts edge and interior
    entries to lines ``m1 + m2 <= k_max + 1``.
    """
    a_max = as_rational(a_max)
    entries = spectrum(omega, a_max)
    if k_max is not None:
        entries = [e for e in entries if e.form is None or e.form.level <= k_max + 1]
    violations = []
    for e in entries:
        if e.kind != "edge":
            continue
        violations.append(Violation("degenerate_edge", (e.form, e.point.vertex)))
        if e.point.vertex == 0 or e.point.vertex == omega.n_edges - 1:
            violations.append(Violation("corner_critical", (e.form,)))
    for e1, e2 in zip(entries, entries[1:]):
        if e1.action == e2.action:
            violations.append(Violation("action_collision", (e1, e2)))
    return NicenessReport(a_max, tuple(violations))
