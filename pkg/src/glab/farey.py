"""Farey combinatorics for the interpolation machinery: ideal triangulations
of the once-punctured torus and the four-punctured sphere, diagonal
exchanges, twist actions on slopes, the bi-infinite interpolation path
between two pants decompositions differing in one curve, and the companion
multiloops whose twist limits induce the interpolating laminations.

All slope arithmetic is exact over the integers.  The spiral orientation
convention is fixed here once: half-leaves spiral LEFT toward the closed
leaves they accumulate on, matching one full left Dehn twist per unit
Fenchel-Nielsen shift.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Optional

from .fuchsian import A1, A2, B1, B2, TwistLimit, W_WORD
from .words import Word

SPIRAL_DIRECTION = "left"


# ---------------------------------------------------------------------------
# slopes


@dataclass(frozen=True)
class Slope:
    """Element of Q union {inf} as a reduced fraction p/q, q >= 0; infinity
    is 1/0."""

    p: int
    q: int

    def __post_init__(self):
        p, q = self.p, self.q
        if p == 0 and q == 0:
            raise ValueError("0/0 is not a slope")
        g = gcd(p, q)
        p, q = p // g, q // g
        if q < 0:
            p, q = -p, -q
        if q == 0:
            p = 1
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def is_infinite(self) -> bool:
        return self.q == 0

    def __str__(self) -> str:
        if self.q == 0:
            return "inf"
        if self.q == 1:
            return str(self.p)
        return f"{self.p}/{self.q}"

    def sort_key(self):
        # finite slopes by value, infinity last
        if self.q == 0:
            return (1, 0.0, 0)
        return (0, self.p / self.q, self.p)


def parse_slope(text: str) -> Slope:
    t = text.strip()
    if t in ("inf", "Inf", "oo"):
        return Slope(1, 0)
    if "/" in t:
        a, b = t.split("/")
        return Slope(int(a), int(b))
    return Slope(int(t), 1)


def farey_adjacent(s: Slope, t: Slope) -> bool:
    return abs(s.p * t.q - t.p * s.q) == 1


def twist_slope(m: Slope, s: Slope, n: int = 1) -> Slope:
    """n-th power of the elementary left twist along slope m on slopes: the
    matrix L_{p/q} = [[1-pq, p^2], [-q^2, 1+pq]], whose n-th power is
    I + n(L - I) since L - I is nilpotent.  This is the once-punctured
    torus Dehn twist; the four-punctured sphere Dehn twist is its square."""
    p, q = m.p, m.q
    a, b = 1 - n * p * q, n * p * p
    c, d = -n * q * q, 1 + n * p * q
    return Slope(a * s.p + b * s.q, c * s.p + d * s.q)


def _mediants(s: Slope, t: Slope) -> tuple:
    return (
        Slope(s.p + t.p, s.q + t.q),
        Slope(s.p - t.p, s.q - t.q),
    )


# ---------------------------------------------------------------------------
# ideal triangulations (both surfaces share the Farey combinatorics)


@dataclass(frozen=True)
class _FareyTriple:
    slopes: tuple

    # tree steps per full Dehn twist along a member slope
    TWIST_STEPS = 1

    def __post_init__(self):
        ss = tuple(sorted(set(self.slopes), key=Slope.sort_key))
        if len(ss) != 3:
            raise ValueError("a triangulation needs three distinct slopes")
        for i in range(3):
            for j in range(i + 1, 3):
                if not farey_adjacent(ss[i], ss[j]):
                    raise ValueError(f"slopes {ss[i]} and {ss[j]} are not Farey neighbors")
        object.__setattr__(self, "slopes", ss)

    def __contains__(self, s: Slope) -> bool:
        return s in self.slopes

    def edges(self) -> tuple:
        a, b, c = self.slopes
        return (frozenset((a, b)), frozenset((a, c)), frozenset((b, c)))


class IdealTriangulationT1(_FareyTriple):
    """Ideal triangulation of the once-punctured torus: three arc slopes
    forming a Farey triangle."""

    TWIST_STEPS = 1


class IdealTriangulationS4(_FareyTriple):
    """Tetrahedral ideal triangulation of the four-punctured sphere, encoded
    by the slopes of the three loops separating opposite edge pairs.  A
    diagonal exchange here means the simultaneous exchange of one opposite
    edge pair, so a full Dehn twist is two exchanges."""

    TWIST_STEPS = 2


def diagonal_exchange(t: _FareyTriple, edge) -> _FareyTriple:
    """Exchange across one edge (kept pair of slopes): the removed slope is
    replaced by the other Farey apex of that edge.  Involutive.  For the
    four-punctured sphere this is the simultaneous exchange of the opposite
    edge pair labeled by the removed slope."""
    kept = frozenset(edge)
    if len(kept) != 2 or not all(s in t for s in kept):
        raise ValueError("edge is not a slope pair of the triangulation")
    (removed,) = [s for s in t.slopes if s not in kept]
    u, v = tuple(kept)
    plus, minus = _mediants(u, v)
    other = minus if removed == plus else plus
    return type(t)((u, v, other))


def twist_as_exchanges(t: _FareyTriple, m: Slope, power: int = 1) -> list:
    """Exchange path realizing the n-th power of the left Dehn twist along a
    member slope m, certified step by step against the integer twist matrix:
    one exchange per twist on the once-punctured torus, two on the
    four-punctured sphere (where the twist acts on slopes by the squared
    matrix).  Each step is (kept edge, resulting triangulation)."""
    if m not in t:
        raise ValueError(f"slope {m} is not in the triangulation")
    if power < 0:
        raise ValueError("left twists only")
    steps = []
    cur = t
    for _ in range(power * type(t).TWIST_STEPS):
        img = type(t)(tuple(twist_slope(m, s) for s in cur.slopes))
        shared = frozenset(cur.slopes) & frozenset(img.slopes)
        if len(shared) != 2:
            raise AssertionError("twist image is not one exchange away")
        if diagonal_exchange(cur, shared) != img:
            raise AssertionError("exchange does not reproduce the twist image")
        steps.append((shared, img))
        cur = img
    return steps


# ---------------------------------------------------------------------------
# slope <-> curve dictionaries on the genus-2 surface

_SLOPE_ZERO = Slope(0, 1)
_SLOPE_INF = Slope(1, 0)
_SLOPE_ONE = Slope(1, 1)


def handle_slope_word(s: Slope) -> Word:
    """Simple closed curve in the a1/b1 handle realizing a slope (a1 is 0,
    b1 is infinity): built by unwinding the continued fraction through the
    frozen twist automorphisms, so the left twist along slope 0 (resp. inf)
    acts on slopes exactly as the integer twist matrix."""
    from .surface import dehn_twist

    def rec(p: int, q: int) -> Word:
        if (p, q) == (0, 1):
            return A1
        if q == 0:
            return B1
        if p < 0:
            return dehn_twist(B1, rec(p + q, q), -1).word
        if p >= q:
            return dehn_twist(B1, rec(p - q, q), 1).word
        return dehn_twist(A1, rec(p, q - p), -1).word

    return rec(s.p, s.q)


# four-holed-sphere dictionary (the subsurface between the two handles):
# slope 0 is the a1*a2 loop, slope infinity the separating waist; the waist
# twist advances slopes by the squared twist matrix, so even integer slopes
# are its orbit on the a1*a2 loop.  Other slopes need a half twist or the
# twist along a1*a2, both outside the implemented basis.
_X_WORD: Word = (1, 3)


def sphere_slope_word(s: Slope) -> Optional[Word]:
    from .surface import dehn_twist

    if s == _SLOPE_INF:
        return W_WORD
    if s.q == 1 and s.p % 2 == 0:
        return dehn_twist(W_WORD, _X_WORD, s.p // 2).word
    return None


# ---------------------------------------------------------------------------
# interpolation specs


@dataclass(frozen=True)
class LaminationSeqSpec:
    """Data of one pants-graph step: the subsurface case, the two end slopes
    (the removed curve m_i at the j -> -inf end, the added curve m_{i+1} at
    the +inf end), an optional pivot override, and the companion multiloop
    ingredients of the twist-limit representation."""

    case: str  # "torus" | "sphere"
    m_lo: Slope
    m_hi: Slope
    index: int = 0
    base: Optional[tuple] = None  # pivot slopes override
    k: int = 3  # parallel copies per companion component
    companion: tuple = ()  # per-unit companion component words
    # curves whose twists walk the tails; None marks an end outside the
    # implemented twist basis
    twist_lo: Optional[Word] = None
    twist_hi: Optional[Word] = None
    decomposition: tuple = ()  # the pants curves of M_i
    common: tuple = ()  # M_i intersect M_{i+1}

    @property
    def twist_steps(self) -> int:
        # tree steps per full Dehn twist along an end curve
        return 1 if self.case == "torus" else 2


def validate_spec(spec: LaminationSeqSpec) -> None:
    if spec.case not in ("torus", "sphere"):
        raise ValueError("case must be 'torus' or 'sphere'")
    if spec.m_lo == spec.m_hi:
        raise ValueError("end slopes are equal")
    if not farey_adjacent(spec.m_lo, spec.m_hi):
        raise ValueError(
            "end slopes are not Farey neighbors; longer tree geodesics are unsupported"
        )
    if spec.base is not None and not (spec.m_lo in spec.base and spec.m_hi in spec.base):
        raise ValueError("pivot must contain both end slopes")


def _triple_class(spec: LaminationSeqSpec):
    return IdealTriangulationT1 if spec.case == "torus" else IdealTriangulationS4


def pivot_triangulation(spec: LaminationSeqSpec) -> _FareyTriple:
    """The j = 0 triangulation: contains both end slopes, so (in the sphere
    reading) two tetrahedron edges are disjoint from each end curve; among
    the two Farey apexes the least in slope order is chosen unless the spec
    overrides the pivot."""
    cls = _triple_class(spec)
    if spec.base is not None:
        return cls(tuple(spec.base))
    plus, minus = _mediants(spec.m_lo, spec.m_hi)
    third = min(plus, minus, key=Slope.sort_key)
    return cls((spec.m_lo, spec.m_hi, third))


def _triangulation_at(spec: LaminationSeqSpec, j: int) -> _FareyTriple:
    t = pivot_triangulation(spec)
    if j == 0:
        return t
    m = spec.m_hi if j > 0 else spec.m_lo
    return type(t)(tuple(twist_slope(m, s, abs(j)) for s in t.slopes))


def interpolation_path(spec: LaminationSeqSpec, j_range) -> list:
    """Triangulations along the dual-tree path, ordered by j: the j < 0 tail
    winds around the m_lo end of the Farey tree by elementary left-twist
    steps, the j > 0 tail around m_hi, and the pivot sits at j = 0.  j_range
    is an iterable of steps or an inclusive (lo, hi) pair."""
    validate_spec(spec)
    js = list(range(j_range[0], j_range[1] + 1)) if isinstance(j_range, tuple) else sorted(j_range)
    out = [_triangulation_at(spec, j) for j in js]
    if js and js[-1] - js[0] + 1 == len(js):
        for a, b in zip(out, out[1:]):
            if len(frozenset(a.slopes) & frozenset(b.slopes)) != 2:
                raise AssertionError("consecutive triangulations are not adjacent")
    return out


def new_slope(spec: LaminationSeqSpec, j: int) -> Slope:
    """The slope introduced at step j; for the pivot, its non-end slope."""
    t = _triangulation_at(spec, j)
    if j == 0:
        (s,) = [s for s in t.slopes if s not in (spec.m_lo, spec.m_hi)]
        return s
    prev = _triangulation_at(spec, j - 1 if j > 0 else j + 1)
    (s,) = [s for s in t.slopes if s not in prev.slopes]
    return s


# ---------------------------------------------------------------------------
# companion multiloops


@dataclass
class CompanionMultiloop:
    """Weighted multiloop equal to the base companion outside the subsurface
    and inducing the j-th triangulation inside it.  The interpolating
    lamination is the twist limit of this multiloop along the curves common
    to the two decompositions."""

    case: str
    k: int
    j: int
    components: tuple  # ((word, weight), ...)
    realized: bool
    induced: _FareyTriple
    fresh: Slope
    twist_curves: tuple
    twisted_decomposition: tuple

    def twist_limit(self) -> TwistLimit:
        """Twist-limit descriptor of the lamination; multiplicities scale
        the transverse measure only, so the support descriptor drops them."""
        if not self.realized:
            raise ValueError("multiloop words are not realized at this step")
        return TwistLimit(
            curves=self.twist_curves, base=tuple(w for w, _ in self.components)
        )

    def arc_counts(self) -> dict:
        """Arcs per complementary pants of the matching decomposition,
        counted through the geometric intersection oracle; 3k on each pants
        by the companion's boundary-pair condition."""
        from .surface import (
            PantsDecomposition,
            geometric_intersection,
            validate_pants_decomposition,
        )

        if not self.realized:
            raise ValueError("multiloop words are not realized at this step")
        P = PantsDecomposition(self.twisted_decomposition)
        cert = validate_pants_decomposition(P)
        if not cert.valid:
            raise AssertionError("twisted decomposition failed validation")
        label_to_word = {c.label: c.word for c in P.curves}
        counts = {}
        for node in range(cert.dual_graph["nodes"]):
            ends = 0
            for (u, v, label) in cert.dual_graph["edges"]:
                sides = (u == node) + (v == node)
                if not sides:
                    continue
                hits = sum(
                    weight * geometric_intersection(word, label_to_word[label])
                    for word, weight in self.components
                )
                ends += sides * hits
            counts[node] = ends // 2
        return counts


def companion_multiloop(spec: LaminationSeqSpec, j: int) -> CompanionMultiloop:
    """The multiloop N at step j: the base companion with every component
    pushed by the tail twists (j > 0 along the m_hi curve, j < 0 along
    m_lo), which leaves everything outside the subsurface unchanged.  On the
    four-punctured sphere one full twist advances two steps, so only
    even-parity steps on a twistable end come back with words; the others
    carry slope data and realized=False."""
    from .surface import dehn_twist

    validate_spec(spec)
    induced = _triangulation_at(spec, j)
    fresh = new_slope(spec, j)
    steps = spec.twist_steps
    twist_word = spec.twist_hi if j > 0 else spec.twist_lo
    realizable = j == 0 or (twist_word is not None and j % steps == 0)
    if not realizable:
        return CompanionMultiloop(
            spec.case, spec.k, j, (), False, induced, fresh, spec.common, ()
        )
    n = abs(j) // steps
    if n == 0:
        words = [tuple(w) for w in spec.companion]
        deco = tuple(tuple(c) for c in spec.decomposition)
    else:
        words = [dehn_twist(twist_word, w, n).word for w in spec.companion]
        deco = tuple(dehn_twist(twist_word, c, n).word for c in spec.decomposition)
    components = tuple((w, spec.k) for w in words)
    return CompanionMultiloop(
        spec.case, spec.k, j, components, True, induced, fresh, spec.common, deco
    )


# ---------------------------------------------------------------------------
# ready-made genus-2 specs

# shared companion: a cross component hitting a1 once, a2 once and the waist
# twice, the a1*b1 transversal, and b2; per-unit endpoint counts (2,2,2) on
# each pants force one arc per boundary pair, so k copies give 3k arcs per
# pants with exactly k joining each boundary pair
_CROSS_WORD: Word = (-4, 1, 2)
_COMPANION = (_CROSS_WORD, (1, 2), B2)


def standard_torus_spec() -> LaminationSeqSpec:
    """One-handle move a1 -> b1 inside the handle torus bounded by the
    waist: slope 0 is a1, slope infinity is b1.  The pivot is fixed to
    {0, inf, 1} so that its transversal leaf is the a1*b1 companion
    component."""
    return LaminationSeqSpec(
        case="torus",
        m_lo=_SLOPE_ZERO,
        m_hi=_SLOPE_INF,
        base=(_SLOPE_ZERO, _SLOPE_INF, _SLOPE_ONE),
        k=3,
        companion=_COMPANION,
        twist_lo=A1,
        twist_hi=B1,
        decomposition=(A1, A2, W_WORD),
        common=(A2, W_WORD),
    )


def standard_sphere_spec() -> LaminationSeqSpec:
    """Four-holed-sphere move: the waist (slope infinity) is replaced by the
    a1*a2 loop (slope 0); only the waist-side tail is inside the implemented
    twist basis, and only at even depths (one waist twist is two tree
    steps)."""
    return LaminationSeqSpec(
        case="sphere",
        m_lo=_SLOPE_INF,
        m_hi=_SLOPE_ZERO,
        k=2,
        companion=_COMPANION,
        twist_lo=W_WORD,
        twist_hi=None,
        decomposition=(A1, A2, W_WORD),
        common=(A1, A2),
    )
