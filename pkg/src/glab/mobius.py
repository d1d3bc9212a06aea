"""Mobius transformations of the Riemann sphere, normalized to SL(2,C).

The point at infinity is the module-level sentinel ``OO``; it is never a large
float.  Points of the sphere are python complex numbers or ``OO``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass


class _Infinity:
    """Extended point at infinity on the Riemann sphere."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "oo"

    def __deepcopy__(self, memo):
        return self

    def __copy__(self):
        return self


OO = _Infinity()

# Classification margin for trace-squared tests.
EPS_CLS = 1e-9


def is_oo(z) -> bool:
    return z is OO


def chordal(z, w) -> float:
    """Chordal (spherical) distance between two points of C u {oo}.

    Diameter of the sphere is 2; chordal(0, oo) == 2.
    """
    if is_oo(z) and is_oo(w):
        return 0.0
    if is_oo(z):
        return 2.0 / math.sqrt(1.0 + abs(w) ** 2)
    if is_oo(w):
        return 2.0 / math.sqrt(1.0 + abs(z) ** 2)
    return 2.0 * abs(z - w) / math.sqrt((1.0 + abs(z) ** 2) * (1.0 + abs(w) ** 2))


def _normalize_entries(a, b, c, d):
    det = a * d - b * c
    if det == 0:
        raise ValueError("degenerate matrix: determinant is zero")
    if abs(det) < 1e-30:
        raise ValueError("degenerate matrix: determinant %r too close to zero" % (det,))
    s = cmath.sqrt(det)
    return _normalize_sign(a / s, b / s, c / s, d / s)


def _normalize_sign(a, b, c, d):
    # Resolve the residual sign so equal maps get equal matrices: the first
    # entry of (a, b, c, d) with modulus above tol gets argument in (-pi/2, pi/2].
    tol = 1e-12
    for e in (a, b, c, d):
        if abs(e) > tol:
            if e.real < -tol * abs(e):
                a, b, c, d = -a, -b, -c, -d
            elif abs(e.real) <= tol * abs(e) and e.imag < 0:
                a, b, c, d = -a, -b, -c, -d
            break
    return a, b, c, d


@dataclass(frozen=True)
class MobiusMap:
    """z -> (a z + b) / (c z + d) with a d - b c = 1.

    Entries are stored sign-normalized, so two MobiusMap objects representing
    the same PSL(2,C) element compare (approximately) entrywise equal.
    """

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        # the direct constructor trusts its entries, but a determinant far
        # from 1 silently corrupts every downstream product, so guard with a
        # scale-relative window (huge-entry products legitimately carry
        # det = 1 + O(eps * |ad|))
        ad, bc = self.a * self.d, self.b * self.c
        if abs(ad - bc - 1.0) > 1e-6 * max(1.0, abs(ad) + abs(bc)):
            raise ValueError("determinant is not 1; use from_entries to rescale")

    @classmethod
    def from_entries(cls, a, b, c, d) -> "MobiusMap":
        a, b, c, d = _normalize_entries(complex(a), complex(b), complex(c), complex(d))
        return cls(a, b, c, d)

    @classmethod
    def from_unit_entries(cls, a, b, c, d) -> "MobiusMap":
        """Entries already known to have determinant 1 (e.g. products of
        normalized maps); skips the determinant rescale, which would suffer
        catastrophic cancellation when entries are large."""
        a, b, c, d = _normalize_sign(complex(a), complex(b), complex(c), complex(d))
        return cls(a, b, c, d)

    @classmethod
    def identity(cls) -> "MobiusMap":
        return cls(1.0 + 0j, 0j, 0j, 1.0 + 0j)

    @classmethod
    def diagonal(cls, lam) -> "MobiusMap":
        """diag(lam, 1/lam)."""
        lam = complex(lam)
        if lam == 0:
            raise ValueError("diagonal entry must be nonzero")
        return cls.from_entries(lam, 0.0, 0.0, 1.0 / lam)

    def __call__(self, z):
        if is_oo(z):
            if self.c == 0:
                return OO
            return self.a / self.c
        num = self.a * z + self.b
        den = self.c * z + self.d
        if den == 0:
            return OO
        return num / den

    def compose(self, other: "MobiusMap") -> "MobiusMap":
        """self after other."""
        a = self.a * other.a + self.b * other.c
        b = self.a * other.b + self.b * other.d
        c = self.c * other.a + self.d * other.c
        d = self.c * other.b + self.d * other.d
        return MobiusMap.from_unit_entries(a, b, c, d)

    def __matmul__(self, other: "MobiusMap") -> "MobiusMap":
        return self.compose(other)

    def inverse(self) -> "MobiusMap":
        return MobiusMap.from_unit_entries(self.d, -self.b, -self.c, self.a)

    def conjugate_by(self, g: "MobiusMap") -> "MobiusMap":
        """g self g^-1."""
        return g @ self @ g.inverse()

    def entries(self) -> tuple:
        """((a, b), (c, d)) row pairs."""
        return ((self.a, self.b), (self.c, self.d))

    def trace(self) -> complex:
        return self.a + self.d

    def trace_sq(self) -> complex:
        t = self.a + self.d
        return t * t

    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    def is_real(self, tol: float = 1e-12) -> bool:
        return all(abs(e.imag) <= tol for e in (self.a, self.b, self.c, self.d))

    def is_identity(self, tol: float = 1e-12) -> bool:
        return (
            abs(self.a - 1) <= tol
            and abs(self.d - 1) <= tol
            and abs(self.b) <= tol
            and abs(self.c) <= tol
        )

    def frobenius_distance(self, other: "MobiusMap") -> float:
        """min over the SL2 sign of the entrywise 2-norm distance."""
        dplus = math.sqrt(
            abs(self.a - other.a) ** 2
            + abs(self.b - other.b) ** 2
            + abs(self.c - other.c) ** 2
            + abs(self.d - other.d) ** 2
        )
        dminus = math.sqrt(
            abs(self.a + other.a) ** 2
            + abs(self.b + other.b) ** 2
            + abs(self.c + other.c) ** 2
            + abs(self.d + other.d) ** 2
        )
        return min(dplus, dminus)


@dataclass(frozen=True)
class Classification:
    """Result of classify(): kind plus the numeric evidence behind it."""

    kind: str  # "identity" | "parabolic" | "elliptic" | "loxodromic"
    trace_sq: complex
    margin: float
    borderline: bool

    @property
    def is_loxodromic(self) -> bool:
        return self.kind == "loxodromic"


def _dist_to_segment(t: complex) -> float:
    """Distance from t to the real segment [0, 4] in C."""
    x = min(max(t.real, 0.0), 4.0)
    return abs(t - x)


def classify(m: MobiusMap, margin: float = EPS_CLS) -> Classification:
    """Classify a Mobius map by trace squared.

    Loxodromic iff tr^2 lies outside the real segment [0, 4] (margin-fattened);
    parabolic iff |tr^2 - 4| <= margin and the map is not the identity;
    elliptic iff tr^2 is real (within margin) in [0, 4 - margin).
    Borderline inputs (within 10*margin of a decision boundary) are flagged.
    """
    t = m.trace_sq()
    dist = _dist_to_segment(t)
    near4 = abs(t - 4.0)
    near0 = abs(t)
    borderline = (0.0 < dist <= 10 * margin) or (dist <= margin and (near4 <= 10 * margin or near0 <= 10 * margin))
    if m.is_identity(1e-12):
        return Classification("identity", t, margin, abs(t - 4.0) > margin)
    if dist > margin:
        return Classification("loxodromic", t, margin, borderline)
    if near4 <= margin:
        return Classification("parabolic", t, margin, borderline)
    return Classification("elliptic", t, margin, borderline)


def _deriv_abs(m: MobiusMap, z) -> float:
    """|derivative| of m at a fixed point z (chart-correct at oo)."""
    if is_oo(z):
        # chart w = 1/z: derivative at 0 is (d/a)^... for fixed oo, c == 0
        # and the multiplier is d/a.
        if m.c != 0:
            raise ValueError("oo is not fixed")
        return abs(m.d / m.a)
    s = abs(m.c * z + m.d)
    if s == 0.0:
        # z rounded onto the pole; for huge entries the repelling point of a
        # long word can collide with -d/c to the last bit
        return math.inf
    return 1.0 / s**2


def fixed_points(m: MobiusMap):
    """Fixed points on the sphere.

    Loxodromic: returns (attracting, repelling).  Elliptic: both points in a
    deterministic order.  Parabolic: a one-element tuple.  Identity: raises.
    """
    cls = classify(m)
    if cls.kind == "identity":
        raise ValueError("identity fixes everything; no isolated fixed points")
    if m.c == 0:
        # triangular: oo is fixed, exactly
        if abs(m.a - m.d) <= 1e-14 * max(abs(m.a), 1.0):
            return (OO,)  # parabolic translation
        other = m.b / (m.d - m.a)
        if cls.kind == "loxodromic":
            if _deriv_abs(m, OO) < 1.0:
                return (OO, other)
            return (other, OO)
        if cls.kind == "parabolic":
            return (OO,)
        return _order_pair(other, OO)
    # c != 0: solve c z^2 + (d - a) z - b = 0 stably
    A = m.c
    B = m.d - m.a
    C = -m.b
    disc = cmath.sqrt(B * B - 4 * A * C)
    if cls.kind == "parabolic":
        return ((m.a - m.d) / (2 * m.c),)
    # stable quadratic roots
    if abs(B + disc) >= abs(B - disc):
        q = -(B + disc) / 2
    else:
        q = -(B - disc) / 2
    if q == 0:
        z1 = 0j
        z2 = 0j
    else:
        z1 = q / A
        z2 = C / q
    if cls.kind == "loxodromic":
        if _deriv_abs(m, z1) < 1.0:
            return (z1, z2)
        return (z2, z1)
    return _order_pair(z1, z2)


def _order_pair(z1, z2):
    """Deterministic order for the elliptic fixed-point pair."""
    def key(z):
        if is_oo(z):
            return (1, 0.0, 0.0)
        return (0, z.real, z.imag)

    return tuple(sorted((z1, z2), key=key))


def complex_length(m: MobiusMap) -> complex:
    """Complex translation length L with 2 cosh(L/2) = tr, Re L > 0.

    L = 2 log(lambda) for the eigenvalue with |lambda| > 1 of the
    sign-normalized matrix; Im L is reported in (-pi, pi] and is canonical
    only modulo 2 pi.
    """
    cls = classify(m)
    if not cls.is_loxodromic:
        raise ValueError("complex length requires a loxodromic map, got %s" % cls.kind)
    t = m.trace()
    disc = cmath.sqrt(t * t - 4.0)
    lam1 = (t + disc) / 2.0
    lam2 = (t - disc) / 2.0
    lam = lam1 if abs(lam1) > abs(lam2) else lam2
    ell = 2.0 * cmath.log(lam)
    # principal log gives Im(log lam) in (-pi, pi]; fold Im(L) back into (-pi, pi]
    im = ell.imag
    while im <= -math.pi:
        im += 2 * math.pi
    while im > math.pi:
        im -= 2 * math.pi
    return complex(ell.real, im)


def translation_length(m: MobiusMap) -> float:
    """Real translation length 2 arccosh(|tr|/2) of a loxodromic map."""
    return complex_length(m).real


def apply_to_h3(m: MobiusMap, x: float, y: float, t: float):
    """Poincare extension of m to upper half-space; point (x, y, t), t > 0."""
    if t <= 0:
        raise ValueError("height must be positive")
    z = complex(x, y)
    cz_d = m.c * z + m.d
    den = abs(cz_d) ** 2 + abs(m.c) ** 2 * t * t
    if den == 0:
        raise ValueError("point maps to infinity")
    znew = ((m.a * z + m.b) * cz_d.conjugate() + m.a * m.c.conjugate() * t * t) / den
    tnew = t / den
    return (znew.real, znew.imag, tnew)
