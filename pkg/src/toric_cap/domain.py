"""Star-shaped toric moment regions as exact rational polygons.

A region is stored by its boundary polyline, running from the point
``(rho(0), 0)`` on the x1-axis to ``(0, rho(pi/2))`` on the x2-axis with
strictly increasing polar angle.  All coordinates are :class:`Fraction`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence, Union

from .errors import InvalidDomainError, InvalidParameterError

Rational = Union[int, str, Fraction]
Point = tuple[Fraction, Fraction]


def as_rational(value: Rational) -> Fraction:
    if isinstance(value, float):
        raise InvalidParameterError("floats are not accepted; pass a string such as '13/8'")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise InvalidParameterError(f"not a rational number: {value!r}") from exc


def cross(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return u[0] * v[1] - u[1] * v[0]


def dot(u: Sequence, v: Sequence):
    return u[0] * v[0] + u[1] * v[1]


def sub(u: Point, v: Point) -> Point:
    return (u[0] - v[0], u[1] - v[1])


@dataclass(frozen=True, order=True)
class LinearForm:
    """The integer linear form ``A(x) = m1*x1 + m2*x2``.

    Forms with both coefficients nonpositive are excluded from the chain
    model, so they are rejected here.
    """

    m1: int
    m2: int

    def __post_init__(self):
        if not (isinstance(self.m1, int) and isinstance(self.m2, int)):
            raise InvalidParameterError("form coefficients must be integers")
        if self.m1 <= 0 and self.m2 <= 0:
            raise InvalidParameterError(f"form ({self.m1},{self.m2}) has no positive coefficient")

    def __call__(self, p: Sequence) -> Fraction:
        return self.m1 * p[0] + self.m2 * p[1]

    def __iter__(self):
        yield self.m1
        yield self.m2

    @property
    def level(self) -> int:
        return self.m1 + self.m2

    @property
    def positive(self) -> bool:
        return self.m1 > 0 and self.m2 > 0

    @staticmethod
    def is_valid(m1: int, m2: int) -> bool:
        return m1 > 0 or m2 > 0

    @classmethod
    def parse(cls, text: str) -> "LinearForm":
        try:
            a, b = (int(t) for t in text.split(","))
        except ValueError as exc:
            raise InvalidParameterError(f"form must look like 'm1,m2', got {text!r}") from exc
        return cls(a, b)

    def __str__(self) -> str:
        return f"({self.m1},{self.m2})"


@dataclass(frozen=True)
class ToricProfile:
    """Boundary polyline of a star-shaped moment region in the closed quadrant.

    Construct through :meth:`from_points`, which validates and normalises
    (collinear interior vertices are dropped).
    """

    vertices: tuple[Point, ...]

    @classmethod
    def from_points(cls, points: Iterable[Sequence[Rational]]) -> "ToricProfile":
        pts = [(as_rational(p[0]), as_rational(p[1])) for p in points]
        if len(pts) < 2:
            raise InvalidDomainError("a profile needs at least two vertices")
        for a, b in zip(pts, pts[1:]):
            if a == b:
                raise InvalidDomainError(f"zero-length edge at {a}")
        first, last = pts[0], pts[-1]
        if not (first[1] == 0 and first[0] > 0):
            raise InvalidDomainError("first vertex must lie on the positive x1-axis")
        if not (last[0] == 0 and last[1] > 0):
            raise InvalidDomainError("last vertex must lie on the positive x2-axis")
        for p in pts[1:-1]:
            if p[0] <= 0 or p[1] <= 0:
                raise InvalidDomainError(f"intermediate vertex {p} is not in the open quadrant")
        for a, b in zip(pts, pts[1:]):
            if cross(a, b) <= 0:
                raise InvalidDomainError(f"polar angle does not increase from {a} to {b}")
        merged = [pts[0]]
        for i in range(1, len(pts) - 1):
            if cross(sub(pts[i], merged[-1]), sub(pts[i + 1], pts[i])) != 0:
                merged.append(pts[i])
        merged.append(pts[-1])
        return cls(tuple(merged))

    @property
    def n_edges(self) -> int:
        return len(self.vertices) - 1

    @property
    def rho0(self) -> Fraction:
        return self.vertices[0][0]

    @property
    def rho90(self) -> Fraction:
        return self.vertices[-1][1]

    def edge(self, i: int) -> Point:
        return sub(self.vertices[i + 1], self.vertices[i])

    def turns(self) -> list[Fraction]:
        """Cross products of consecutive edge directions at interior vertices."""
        return [cross(self.edge(i - 1), self.edge(i)) for i in range(1, self.n_edges)]

    def to_json(self) -> dict:
        return {"vertices": [[str(x), str(y)] for x, y in self.vertices]}

    def __str__(self) -> str:
        return "[" + ", ".join(f"({x},{y})" for x, y in self.vertices) + "]"


@dataclass(frozen=True)
class DomainClass:
    """Convexity flags of a region.

    Flags are not exclusive: a triangle touching both axes is concave and
    convex at once.
    """

    concave: bool
    weakly_convex: bool
    strongly_convex: bool

    @property
    def flags(self) -> frozenset[str]:
        names = ("concave", "weakly_convex", "strongly_convex")
        return frozenset(n for n in names if getattr(self, n))

    @property
    def tag(self) -> str:
        if self.concave:
            return "concave"
        if self.strongly_convex:
            return "strongly_convex_and_weakly_convex"
        if self.weakly_convex:
            return "weakly_convex"
        return "neither"


def _positive(name: str, value: Rational) -> Fraction:
    q = as_rational(value)
    if q <= 0:
        raise InvalidParameterError(f"{name} must be positive, got {q}")
    return q


def make_ellipsoid(a: Rational, b: Rational) -> ToricProfile:
    a, b = _positive("a", a), _positive("b", b)
    return ToricProfile.from_points([(a, 0), (0, b)])


def make_polydisk(a: Rational, b: Rational) -> ToricProfile:
    a, b = _positive("a", a), _positive("b", b)
    return ToricProfile.from_points([(a, 0), (a, b), (0, b)])


def scale(omega: ToricProfile, c: Rational) -> ToricProfile:
    c = _positive("c", c)
    return ToricProfile(tuple((c * x, c * y) for x, y in omega.vertices))


def classify(omega: ToricProfile) -> DomainClass:
    turns = omega.turns()
    # Interior vertices only; the turns at the two axis points are always
    # compatible with both convexity notions.
    weakly_convex = all(t > 0 for t in turns)
    concave = all(t < 0 for t in turns)
    first, last = omega.edge(0), omega.edge(omega.n_edges - 1)
    # Reflecting across the axes stays convex iff neither end edge leans outward.
    strongly_convex = weakly_convex and first[0] <= 0 and last[1] <= 0
    return DomainClass(concave, weakly_convex, strongly_convex)


def _sector_edge(omega: ToricProfile, p: Point) -> int:
    vs = omega.vertices
    for i in range(omega.n_edges):
        if cross(vs[i], p) >= 0 and cross(p, vs[i + 1]) >= 0:
            return i
    raise InvalidParameterError(f"point {p} is outside the closed quadrant")


def contains(omega: ToricProfile, p: Sequence[Rational], strict: bool = False) -> bool:
    """Exact membership test; ``strict`` asks for the interior (relative to the quadrant)."""
    q = (as_rational(p[0]), as_rational(p[1]))
    if q[0] < 0 or q[1] < 0:
        raise InvalidParameterError(f"point {q} is outside the closed quadrant")
    if q == (0, 0):
        return True
    i = _sector_edge(omega, q)
    side = cross(omega.edge(i), sub(q, omega.vertices[i]))
    return side > 0 if strict else side >= 0


def includes(inner: ToricProfile, outer: ToricProfile) -> bool:
    """True iff the region of ``inner`` is a subset of the region of ``outer``.

    Both regions are unions of origin triangles over common angular
    sectors, so comparing radii at every vertex angle of either polygon is
    enough.
    """
    if not all(contains(outer, v) for v in inner.vertices):
        return False
    return not any(contains(inner, v, strict=True) for v in outer.vertices)


PRESETS = {
    "ellipsoid": make_ellipsoid,
    "polydisk": make_polydisk,
}


def from_preset(spec: str) -> ToricProfile:
    """Build a preset from ``name:p1,p2``, e.g. ``ellipsoid:1,2``."""
    name, _, params = spec.partition(":")
    if name not in PRESETS:
        raise InvalidParameterError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    args = [t for t in params.split(",") if t]
    if len(args) != 2:
        raise InvalidParameterError(f"preset {name} takes two parameters")
    return PRESETS[name](*args)


def profile_from_json(data: dict) -> ToricProfile:
    if "preset" in data:
        return from_preset(data["preset"])
    try:
        verts = data["vertices"]
    except (KeyError, TypeError) as exc:
        raise InvalidDomainError("domain JSON needs a 'vertices' list") from exc
    for v in verts:
        if len(v) != 2:
            raise InvalidDomainError(f"vertex {v!r} is not a pair")
    return ToricProfile.from_points(verts)


def load_profile(path: Union[str, Path]) -> ToricProfile:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidDomainError(f"{path}: {exc}") from exc
    return profile_from_json(data)
