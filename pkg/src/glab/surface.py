"""Curves, pants decompositions, and pants-graph moves on the closed
genus-2 surface.

Curves are pi_1 words.  Geometric questions (simplicity, intersection
numbers, isotopy of decompositions) are answered by the axis-crossing oracle
of glab.fuchsian on a fixed reference hyperbolic metric, keeping a single
geometric source of truth.  Dehn twists are explicit pi_1 automorphisms,
implemented for the standard generators and the reference pants curves; the
handedness convention is tied to the Fenchel-Nielsen shift (twisting the
metric by one full cut length acts on markings as one left twist).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

from .fuchsian import (
    A1,
    A2,
    B1,
    B2,
    FNCoordinates,
    HolonomyRep,
    W_WORD,
    build_from_fn,
    intersection_count,
    self_intersection_count,
    witness_depth,
)
from .words import (
    Word,
    abelianization,
    conjugacy_class_reps,
    conjugacy_key,
    cyclic_reduce,
    format_word,
    free_reduce,
    inverse_word,
    is_separating_class,
    surface_relator,
)


class CapExhausted(RuntimeError):
    """A bounded search or enumeration ran out of budget without an answer."""


@dataclass(frozen=True)
class SurfacePresentation:
    """Standard presentation of the closed orientable genus-g surface group:
    generators a1, b1, ..., ag, bg and the product-of-commutators relator."""

    genus: int = 2

    def __post_init__(self):
        if self.genus < 2:
            raise ValueError("genus must be at least 2")

    @property
    def generators(self) -> tuple:
        names = []
        for i in range(1, self.genus + 1):
            names.append(f"a{i}")
            names.append(f"b{i}")
        return tuple(names)

    @property
    def relator(self) -> Word:
        return surface_relator(self.genus)


def unoriented_key(word: Word) -> tuple:
    """Canonical key of the free homotopy class of the unoriented curve:
    conjugacy key minimized over the two orientations."""
    w = cyclic_reduce(tuple(word))
    return min(conjugacy_key(w), conjugacy_key(inverse_word(w)))


@dataclass(frozen=True)
class CurveClass:
    """Free homotopy class of an essential loop, stored as a cyclically
    reduced word."""

    word: Word

    def __post_init__(self):
        w = cyclic_reduce(tuple(self.word))
        if not w:
            raise ValueError("curve word reduces to the identity")
        object.__setattr__(self, "word", w)

    @property
    def key(self) -> tuple:
        return unoriented_key(self.word)

    @property
    def label(self) -> str:
        return format_word(self.word)

    @property
    def separating(self) -> bool:
        return is_separating_class(self.word, 2)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CurveClass):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)


def as_curve(c) -> CurveClass:
    if isinstance(c, CurveClass):
        return c
    return CurveClass(tuple(c))


# ---------------------------------------------------------------------------
# the geometric oracle: a fixed reference metric


_REF_REP: Optional[HolonomyRep] = None


def reference_rep() -> HolonomyRep:
    """The (2,2,2,0,0,0) Fuchsian holonomy used as the intersection oracle's
    metric; built once."""
    global _REF_REP
    if _REF_REP is None:
        _REF_REP = build_from_fn(FNCoordinates.reference())
    return _REF_REP


_INT_CACHE: dict = {}
_SIMPLE_CACHE: dict = {}
_MAX_BALL = 8  # word balls grow sevenfold per step; deeper is impractical


def _escalate(count_fn, need: int, ball: int, what: str) -> int:
    # retry unstable reports at deeper balls; jump straight to the witness
    # depth when nothing was found, since shallower balls cannot conclude
    b = ball
    limit = min(_MAX_BALL, max(ball + 2, min(need, _MAX_BALL)))
    while True:
        n, stable = count_fn(b)
        if stable:
            return n
        if b >= limit:
            raise CapExhausted(f"{what} unstable at ball {b}")
        b = min(limit, max(b + 1, need if n == 0 else 0))


def geometric_intersection(c1, c2, rep: Optional[HolonomyRep] = None, ball: int = 6) -> int:
    """Geometric intersection number of two curve classes, via geodesic
    crossings on the reference metric (or a caller-provided one).  Unstable
    reports are retried at deeper enumeration balls before giving up."""
    c1, c2 = as_curve(c1), as_curve(c2)
    cache = _INT_CACHE if rep is None else None
    key = (min(c1.key, c2.key), max(c1.key, c2.key), ball)
    if cache is not None and key in cache:
        return cache[key]
    use = rep or reference_rep()
    n = _escalate(
        lambda b: intersection_count(use, c1.word, c2.word, ball=b),
        witness_depth(c1.word, c2.word),
        ball,
        f"intersection of {c1.label} and {c2.label}",
    )
    if cache is not None:
        cache[key] = n
    return n


def curve_is_simple(c, rep: Optional[HolonomyRep] = None, ball: int = 6) -> bool:
    c = as_curve(c)
    cache = _SIMPLE_CACHE if rep is None else None
    key = (c.key, ball)
    if cache is not None and key in cache:
        return cache[key]
    use = rep or reference_rep()
    n = _escalate(
        lambda b: self_intersection_count(use, c.word, ball=b),
        witness_depth(c.word, c.word),
        ball,
        f"self-intersections of {c.label}",
    )
    out = n == 0
    if cache is not None:
        cache[key] = out
    return out


# ---------------------------------------------------------------------------
# pants decompositions


@dataclass(frozen=True)
class PantsDecomposition:
    """3(g-1) disjoint non-parallel curve classes; genus 2 throughout."""

    curves: tuple
    genus: int = 2

    def __post_init__(self):
        object.__setattr__(self, "curves", tuple(as_curve(c) for c in self.curves))

    @property
    def key(self) -> frozenset:
        return frozenset(c.key for c in self.curves)

    def labels(self) -> tuple:
        return tuple(sorted(c.label for c in self.curves))


@dataclass
class PantsCertificate:
    valid: bool
    violations: list
    dual_graph: Optional[dict]


def validate_pants_decomposition(
    P: PantsDecomposition, rep: Optional[HolonomyRep] = None
) -> PantsCertificate:
    """Certify that the curves cut the surface into pants: correct count,
    pairwise disjoint and non-parallel, complement a union of 2g-2 pants
    (trivalent dual graph).  Violations come back as data, never raised."""
    violations = []
    if P.genus != 2:
        violations.append({"kind": "unsupported-genus", "detail": P.genus})
        return PantsCertificate(False, violations, None)
    want = 3 * (P.genus - 1)
    if len(P.curves) != want:
        violations.append({"kind": "count", "detail": f"{len(P.curves)} != {want}"})
    seen: dict = {}
    for c in P.curves:
        if c.key in seen:
            violations.append({"kind": "parallel", "detail": c.label})
        seen[c.key] = c
    for i in range(len(P.curves)):
        if not curve_is_simple(P.curves[i], rep):
            violations.append({"kind": "non-simple", "detail": P.curves[i].label})
    for i in range(len(P.curves)):
        for j in range(i + 1, len(P.curves)):
            if P.curves[i].key == P.curves[j].key:
                continue
            if geometric_intersection(P.curves[i], P.curves[j], rep) != 0:
                violations.append(
                    {
                        "kind": "crossing",
                        "detail": (P.curves[i].label, P.curves[j].label),
                    }
                )
    if violations:
        return PantsCertificate(False, violations, None)
    graph = _dual_graph(P)
    if graph is None:
        violations.append({"kind": "shape", "detail": "complement is not a union of pants"})
        return PantsCertificate(False, violations, None)
    return PantsCertificate(True, [], graph)


def _dual_graph(P: PantsDecomposition) -> Optional[dict]:
    """Dual graph of a genus-2 decomposition that already passed the count,
    parallel, simplicity and disjointness checks.  Two shapes exist: one
    separating curve with a handle curve on each side, or three
    non-separating curves spanning a theta graph."""
    seps = [c for c in P.curves if c.separating]
    nonseps = [c for c in P.curves if not c.separating]
    if len(seps) == 1 and len(nonseps) == 2:
        c1, c2 = nonseps
        if c1.key == c2.key:
            return None
        # distinct homology forces the two curves into opposite handles
        if _hom_pm(c1) == _hom_pm(c2):
            return None
        s = seps[0]
        return {
            "nodes": 2,
            "edges": [
                (0, 0, c1.label),
                (1, 1, c2.label),
                (0, 1, s.label),
            ],
            "trivalent": True,
        }
    if len(seps) == 0 and len(nonseps) == 3:
        vs = [_hom_pm(c) for c in nonseps]
        if len({tuple(v) for v in vs}) != 3:
            return None
        # theta shape: some orientation choice makes the classes sum to zero
        v1, v2, v3 = (_hom(c) for c in nonseps)
        ok = False
        for s2 in (1, -1):
            for s3 in (1, -1):
                if all(a + s2 * b + s3 * c == 0 for a, b, c in zip(v1, v2, v3)):
                    ok = True
        if not ok:
            return None
        return {
            "nodes": 2,
            "edges": [(0, 1, c.label) for c in nonseps],
            "trivalent": True,
        }
    return None


def _hom(c: CurveClass) -> tuple:
    return abelianization(c.word, 2)


def _hom_pm(c: CurveClass) -> tuple:
    v = _hom(c)
    return max(v, tuple(-x for x in v))


# ---------------------------------------------------------------------------
# elementary moves and the pants graph


@dataclass(frozen=True)
class ElementaryMove:
    """Replace one decomposition curve inside its complementary piece: a
    one-holed torus (new curve crosses once) or a four-holed sphere (twice)."""

    removed: CurveClass
    added: CurveClass
    case: str  # "one-holed-torus" | "four-holed-sphere"
    subsurface: tuple  # boundary labels of the containing piece

    def reversed(self) -> "ElementaryMove":
        return ElementaryMove(self.added, self.removed, self.case, self.subsurface)


def apply_move(P: PantsDecomposition, move: ElementaryMove) -> PantsDecomposition:
    out = [c for c in P.curves if c.key != move.removed.key]
    if len(out) != len(P.curves) - 1:
        raise ValueError("move does not match the decomposition")
    out.append(move.added)
    return PantsDecomposition(tuple(out), P.genus)


def _move_context(P: PantsDecomposition, ell: CurveClass, graph: dict):
    loop_nodes = [e for e in graph["edges"] if e[2] == ell.label and e[0] == e[1]]
    if loop_nodes:
        node = loop_nodes[0][0]
        boundary = tuple(
            sorted(e[2] for e in graph["edges"] if node in (e[0], e[1]) and e[2] != ell.label)
        )
        return "one-holed-torus", 1, boundary
    boundary = []
    for e in graph["edges"]:
        if e[2] != ell.label:
            # each remaining cut curve contributes two boundary circles
            boundary.extend([e[2], e[2]])
    return "four-holed-sphere", 2, tuple(sorted(boundary))


def enumerate_elementary_moves(
    P: PantsDecomposition,
    ell,
    cap: int = 2,
    rep: Optional[HolonomyRep] = None,
) -> list:
    """Bounded enumeration of elementary moves removing ell: candidate
    replacement curves run over conjugacy classes of word length <= cap."""
    ell = as_curve(ell)
    cert = validate_pants_decomposition(P, rep)
    if not cert.valid:
        raise ValueError(f"invalid decomposition: {cert.violations}")
    members = {c.key: c for c in P.curves}
    if ell.key not in members:
        raise ValueError(f"{ell.label} is not a member of the decomposition")
    if cap <= 0:
        return []
    case, need, boundary = _move_context(P, members[ell.key], cert.dual_graph)
    rest = [c for c in P.curves if c.key != ell.key]
    moves = []
    seen = set()
    for w in conjugacy_class_reps(P.genus, cap):
        key = unoriented_key(w)
        if key in seen or key in members:
            continue
        seen.add(key)
        m = CurveClass(w)
        if not curve_is_simple(m, rep):
            continue
        if any(geometric_intersection(m, r, rep) != 0 for r in rest):
            continue
        if geometric_intersection(m, ell, rep) != need:
            continue
        candidate = PantsDecomposition(tuple(rest) + (m,), P.genus)
        if not validate_pants_decomposition(candidate, rep).valid:
            continue
        moves.append(ElementaryMove(members[ell.key], m, case, boundary))
    return moves


def pants_graph_path(
    P0: PantsDecomposition,
    P1: PantsDecomposition,
    move_cap: int = 2,
    depth_cap: int = 3,
    rep: Optional[HolonomyRep] = None,
) -> list:
    """Breadth-first path of elementary moves from P0 to P1 (isotopy classes
    witnessed by the intersection oracle); minimal within the caps.  Raises
    CapExhausted when no path exists within depth_cap."""
    for P in (P0, P1):
        cert = validate_pants_decomposition(P, rep)
        if not cert.valid:
            raise ValueError(f"invalid decomposition: {cert.violations}")
    target = P1.key
    if P0.key == target:
        return []
    queue = deque([(P0, [])])
    visited = {P0.key}
    while queue:
        P, path = queue.popleft()
        if len(path) >= depth_cap:
            continue
        for c in P.curves:
            for move in enumerate_elementary_moves(P, c, cap=move_cap, rep=rep):
                Q = apply_move(P, move)
                if Q.key in visited:
                    continue
                if Q.key == target:
                    return path + [move]
                visited.add(Q.key)
                queue.append((Q, path + [move]))
    raise CapExhausted(
        f"no pants-graph path within depth {depth_cap} at move cap {move_cap}"
    )


# ---------------------------------------------------------------------------
# Dehn twists as pi_1 automorphisms

# one left twist along each supported curve, as letter substitution rules;
# handedness frozen against the Fenchel-Nielsen shift oracle and the braid
# relation T_a T_b T_a = T_b T_a T_b on the handle pairs
_W_INV = inverse_word(W_WORD)
_TWIST_RULES = {
    unoriented_key(A1): {2: (2, -1)},
    unoriented_key(B1): {1: (1, 2)},
    unoriented_key(A2): {4: (4, -3)},
    unoriented_key(B2): {3: (3, 4)},
    unoriented_key(W_WORD): {
        3: W_WORD + (3,) + _W_INV,
        4: W_WORD + (4,) + _W_INV,
    },
}
_TWIST_RULES_INV = {
    unoriented_key(A1): {2: (2, 1)},
    unoriented_key(B1): {1: (1, -2)},
    unoriented_key(A2): {4: (4, 3)},
    unoriented_key(B2): {3: (3, -4)},
    unoriented_key(W_WORD): {
        3: _W_INV + (3,) + W_WORD,
        4: _W_INV + (4,) + W_WORD,
    },
}


def _substitute(rules: dict, word: Word) -> Word:
    out = []
    for x in word:
        r = rules.get(abs(x))
        if r is None:
            out.append(x)
        elif x > 0:
            out.extend(r)
        else:
            out.extend(inverse_word(r))
    return free_reduce(tuple(out))


def dehn_twist(c, target, n: int = 1) -> CurveClass:
    """n-th power of the left Dehn twist along c applied to target; c must be
    one of a1, b1, a2, b2 or the reference waist."""
    c = as_curve(c)
    rules = (_TWIST_RULES if n >= 0 else _TWIST_RULES_INV).get(c.key)
    if rules is None:
        raise ValueError(
            "twist basis: twists are implemented along a1, b1, a2, b2 and the reference waist"
        )
    word = tuple(as_curve(target).word)
    for _ in range(abs(n)):
        word = _substitute(rules, word)
    return CurveClass(word)


def dehn_twist_multi(curves: Sequence, base: Sequence, n: int = 1) -> tuple:
    """Apply n left twists along each curve of a disjoint multiloop to every
    word of the base multiloop; disjointness makes the factors commute."""
    cs = [as_curve(c) for c in curves]
    for i in range(len(cs)):
        for j in range(i + 1, len(cs)):
            if cs[i].key != cs[j].key and geometric_intersection(cs[i], cs[j]) != 0:
                raise ValueError("twist multiloop must be disjoint")
    out = []
    for w in base:
        word = tuple(as_curve(w).word)
        for c in cs:
            word = dehn_twist(c, word, n).word
        out.append(word)
    return tuple(out)
