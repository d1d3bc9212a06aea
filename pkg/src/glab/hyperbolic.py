"""Upper half-plane H2 and upper half-space H3.

Model convention, fixed once for the whole package: H2 is the upper half
plane {x + i y : y > 0} with boundary R u {oo}, and H3 is upper half space
{(x, y, t) : t > 0} with boundary C u {oo}; H2 sits inside H3 as the vertical
plane over the real line, (x, y) -> (x, 0, y).  Geodesics are vertical
lines/half-planes and semicircles/hemispheres orthogonal to the boundary.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .mobius import OO, MobiusMap, chordal, is_oo


@dataclass(frozen=True)
class H2Point:
    x: float
    y: float

    def __post_init__(self):
        if not self.y > 0:
            raise ValueError("H2 point needs y > 0, got y=%r" % (self.y,))

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)

    @classmethod
    def from_complex(cls, z: complex) -> "H2Point":
        return cls(z.real, z.imag)

    def to_h3(self) -> "H3Point":
        return H3Point(self.x, 0.0, self.y)


@dataclass(frozen=True)
class H3Point:
    x: float
    y: float
    t: float

    def __post_init__(self):
        if not self.t > 0:
            raise ValueError("H3 point needs height t > 0, got t=%r" % (self.t,))

    @property
    def horizontal(self) -> complex:
        return complex(self.x, self.y)


def dist_h2(p: H2Point, q: H2Point) -> float:
    """Hyperbolic distance, cosh d = 1 + |p - q|^2 / (2 Im p Im q)."""
    d2 = (p.x - q.x) ** 2 + (p.y - q.y) ** 2
    return math.acosh(1.0 + d2 / (2.0 * p.y * q.y))


def dist_h3(p: H3Point, q: H3Point) -> float:
    """Hyperbolic distance, cosh d = 1 + (|dz|^2 + dt^2) / (2 t1 t2)."""
    d2 = (p.x - q.x) ** 2 + (p.y - q.y) ** 2 + (p.t - q.t) ** 2
    return math.acosh(1.0 + d2 / (2.0 * p.t * q.t))


def _as_boundary_real(e):
    """Validate an extended-real boundary point of H2."""
    if is_oo(e):
        return e
    e = complex(e)
    if abs(e.imag) > 1e-12 * max(1.0, abs(e)):
        raise ValueError("H2 ideal point must be real or oo, got %r" % (e,))
    return e.real


@dataclass(frozen=True)
class GeodesicH2:
    """Oriented geodesic of H2 given by distinct ideal endpoints (start, end)."""

    start: object
    end: object

    def __post_init__(self):
        s = _as_boundary_real(self.start)
        e = _as_boundary_real(self.end)
        object.__setattr__(self, "start", s)
        object.__setattr__(self, "end", e)
        if chordal(complex(s) if not is_oo(s) else s, complex(e) if not is_oo(e) else e) < 1e-12:
            raise ValueError("geodesic endpoints must be distinct: %r, %r" % (s, e))

    def reversed(self) -> "GeodesicH2":
        return GeodesicH2(self.end, self.start)


@dataclass(frozen=True)
class GeodesicH3:
    """Oriented geodesic of H3 given by distinct ideal endpoints in C u {oo}."""

    start: object
    end: object

    def __post_init__(self):
        s = self.start if is_oo(self.start) else complex(self.start)
        e = self.end if is_oo(self.end) else complex(self.end)
        object.__setattr__(self, "start", s)
        object.__setattr__(self, "end", e)
        if chordal(s, e) < 1e-12:
            raise ValueError("geodesic endpoints must be distinct: %r, %r" % (s, e))


def frame(p, q) -> MobiusMap:
    """Mobius map taking (0, oo) to (p, q); p, q distinct sphere points.

    Used to put an oriented geodesic into the standard position (0 -> oo).
    The third degree of freedom is fixed by the choices below, so frames are
    deterministic.  For real endpoints the representative with positive real
    determinant is used, so real frames preserve the upper half-plane.
    """
    if is_oo(p) and is_oo(q):
        raise ValueError("endpoints must be distinct")
    if is_oo(p):
        # 0 -> oo, oo -> q; det +1 variant keeps H2 upstairs for real q
        return MobiusMap.from_entries(q, -1.0, 1.0, 0.0)
    if is_oo(q):
        # 0 -> p, oo -> oo
        return MobiusMap.from_entries(1.0, p, 0.0, 1.0)
    pr = complex(p)
    qr = complex(q)
    if abs(pr.imag) < 1e-12 and abs(qr.imag) < 1e-12 and qr.real < pr.real:
        return MobiusMap.from_entries(q, -p, 1.0, -1.0)
    return MobiusMap.from_entries(q, p, 1.0, 1.0)


def geodesic_h2_through(p: H2Point, q: H2Point) -> GeodesicH2:
    """Ideal endpoints of the geodesic through two interior points, oriented
    p-side to q-side."""
    if abs(p.x - q.x) < 1e-14 * max(1.0, abs(p.x), abs(q.x)):
        # vertical line
        if q.y > p.y:
            return GeodesicH2(p.x, OO)
        return GeodesicH2(OO, p.x)
    # semicircle centered on the real axis: |z - c|^2 = r^2 through both
    c = (q.x * q.x + q.y * q.y - p.x * p.x - p.y * p.y) / (2.0 * (q.x - p.x))
    r = math.hypot(p.x - c, p.y)
    if q.x > p.x:
        return GeodesicH2(c - r, c + r)
    return GeodesicH2(c + r, c - r)


def point_at(g: GeodesicH2, s: float) -> H2Point:
    """Unit-speed point along g; s = 0 is the summit (closest point to the
    boundary-circle center for a semicircle, height 1 for a vertical line at
    x = start)."""
    f = frame(g.start, g.end)
    # on (0, oo), parameter s=0 at i, unit speed upward
    z = f(complex(0.0, math.exp(s)))
    if is_oo(z):
        raise ValueError("parameter out of chart")
    return H2Point.from_complex(z)


def crossing(g1: GeodesicH2, g2: GeodesicH2):
    """Transverse crossing data of two H2 geodesics.

    Returns None when the geodesics do not cross (disjoint or sharing an
    ideal endpoint).  Otherwise returns (point, angle, s1) with angle in
    (0, pi/2] and s1 the crossing parameter along g1 (signed hyperbolic
    distance from the g1 frame basepoint i).
    """
    f = frame(g1.start, g1.end).inverse()
    u = f(g2.start)
    v = f(g2.end)
    if is_oo(u) or is_oo(v):
        return None  # shares an endpoint with g1
    u, v = u.real, v.real
    if u * v >= 0:
        return None
    y0 = math.sqrt(-u * v)
    mid = (u + v) / 2.0
    angle = math.atan2(y0, abs(mid))
    s1 = math.log(y0)
    back = frame(g1.start, g1.end)
    z = back(complex(0.0, y0))
    pt = None if is_oo(z) else H2Point.from_complex(z)
    return (pt, angle, s1)


def angle_between_geodesics(g1: GeodesicH2, g2: GeodesicH2) -> float:
    """Intersection angle in [0, pi/2] of two crossing geodesics.

    Raises ValueError when the geodesics do not cross transversely (equal,
    disjoint, or asymptotic); callers that merely probe should use crossing().
    """
    c = crossing(g1, g2)
    if c is None:
        raise ValueError("geodesics do not cross transversely")
    return c[1]


def translation_axis_map(g: GeodesicH2 | GeodesicH3, t) -> MobiusMap:
    """Loxodromic/hyperbolic translation by complex length t along g
    (attracting endpoint g.end for Re t > 0)."""
    f = frame(g.start, g.end)
    lam = cmath.exp(complex(t) / 2.0)
    return f @ MobiusMap.diagonal(lam) @ f.inverse()


def apply_mobius_h2(m: MobiusMap, p: H2Point) -> H2Point:
    """Apply a real Mobius map in PSL(2,R) to an H2 point."""
    if not m.is_real(1e-9):
        raise ValueError("map does not preserve H2 (entries not real)")
    z = m(p.z)
    if is_oo(z):
        raise ValueError("point maps to infinity")
    return H2Point.from_complex(z)
