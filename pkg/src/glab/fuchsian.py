"""Fuchsian holonomy for the closed genus-2 surface from Fenchel-Nielsen data.

The reference pants decomposition is {a1, a2, w} with w = [a1, b1]: cutting
along the separating waist w gives two one-holed tori, and cutting each along
its a-curve gives a pair of pants.  A pair of pants with boundary lengths
(l1, l2, l3) is realized as the orientation-preserving half of the group
generated by reflections in three pairwise disjoint seam geodesics; this
gives exact boundary traces and an exactly trivial relator.

Twists are hyperbolic translation lengths along the cut geodesics (length
units).  A twist may be complex: the imaginary part bends the gluing into
PSL(2,C) while keeping all boundary traces, which is how quasi-Fuchsian test
representations are produced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .hyperbolic import frame
from .mobius import EPS_CLS, OO, MobiusMap, chordal, classify, complex_length, fixed_points, is_oo
from .words import (
    Word,
    conjugacy_class_reps,
    conjugacy_key,
    cyclic_reduce,
    format_word,
    free_reduce,
    surface_relator,
)

# reference curve words on genus 2
A1: Word = (1,)
B1: Word = (2,)
A2: Word = (3,)
B2: Word = (4,)
W_WORD: Word = (1, 2, -1, -2)  # [a1, b1], the separating waist
REFERENCE_CURVES = {"a1": A1, "a2": A2, "w": W_WORD}

MAX_LENGTH = 40.0  # sinh/cosh overflow guard for pants data


@dataclass(frozen=True)
class FNCoordinates:
    """Fenchel-Nielsen data on the reference genus-2 decomposition.

    lengths: geodesic lengths of (a1, a2, w); twists: translation twists
    along the same curves, in length units (complex imaginary part = bending).
    """

    lengths: tuple
    twists: tuple

    def __post_init__(self):
        if len(self.lengths) != 3 or len(self.twists) != 3:
            raise ValueError("genus-2 reference decomposition needs 3 lengths and 3 twists")
        lengths = tuple(float(x) for x in self.lengths)
        twists = tuple(complex(t) for t in self.twists)
        for i, l in enumerate(lengths):
            if not (0.0 < l <= MAX_LENGTH) or not math.isfinite(l):
                raise ValueError("length %d out of range (0, %g]: %r" % (i, MAX_LENGTH, l))
        object.__setattr__(self, "lengths", lengths)
        object.__setattr__(self, "twists", twists)

    @property
    def is_real(self) -> bool:
        return all(abs(t.imag) < 1e-15 for t in self.twists)

    @classmethod
    def reference(cls) -> "FNCoordinates":
        return cls((2.0, 2.0, 2.0), (0.0, 0.0, 0.0))


def pants_rep(l1: float, l2: float, l3: float):
    """Boundary translations (X1, X2, X3) of a hyperbolic pair of pants with
    boundary lengths (l1, l2, l3) and X1 X2 X3 = 1.

    X1 translates along (0, oo) by l1 (attracting oo).  The construction
    places three pairwise disjoint seam geodesics s1, s2, s3 with
    d(s2, s3) = l1/2, d(s3, s1) = l2/2, d(s1, s2) = l3/2 and takes products
    of inversions: X1 = r2 r3, X2 = r3 r1, X3 = r1 r2.
    """
    for i, l in enumerate((l1, l2, l3)):
        if not (0.0 < l <= MAX_LENGTH):
            raise ValueError("pants boundary length %d out of range: %r" % (i + 1, l))
    R = math.exp(l1 / 2.0)
    u2 = math.cosh(l2 / 2.0)
    u3 = math.cosh(l3 / 2.0)
    # seam s3 is |z| = 1, seam s2 is |z| = R; seam s1 is the circle of radius
    # r about c > 0 at inversive distance cosh(l2/2) from s3 and cosh(l3/2)
    # from s2
    r = (R * R - 1.0) / (2.0 * (u2 + R * u3))
    c = math.sqrt(r * r + 2.0 * r * u2 + 1.0)
    if not (1.0 < c - r and c + r < R):
        raise ValueError("degenerate hexagon for lengths %r" % ((l1, l2, l3),))
    x1 = MobiusMap.from_entries(R, 0.0, 0.0, 1.0 / R)
    x2 = MobiusMap.from_entries(1.0, -c, c, r * r - c * c)
    x3 = MobiusMap.from_entries(r * r - c * c, c * R * R, -c, R * R)
    prod = x1 @ x2 @ x3
    if not prod.is_identity(1e-9):
        raise RuntimeError("pants relation failed for lengths %r" % ((l1, l2, l3),))
    return x1, x2, x3


def _mirror(m: MobiusMap) -> MobiusMap:
    """Conjugate by the reflection z -> -conj(z); flips the half-plane side."""
    return MobiusMap.from_unit_entries(m.a, -m.b, -m.c, m.d)


def oriented_axis(m: MobiusMap):
    """(repelling, attracting) fixed points of a loxodromic map."""
    att, rep = fixed_points(m)
    return rep, att


def conj_taking(src: MobiusMap, dst: MobiusMap, twist=0.0) -> MobiusMap:
    """A Mobius map Q with Q src Q^-1 = dst, for loxodromic src, dst of equal
    complex length; twist slides the solution along the dst axis (length
    units, complex allowed)."""
    rs, as_ = oriented_axis(src)
    rd, ad = oriented_axis(dst)
    fs = frame(rs, as_)
    fd = frame(rd, ad)
    lam = np.exp(complex(twist) / 2.0)
    d = MobiusMap.from_entries(lam, 0.0, 0.0, 1.0 / lam)
    return fd @ d @ fs.inverse()


@dataclass
class HolonomyRep:
    """Representation of the genus-2 surface group into PSL(2,C), stored by
    generator images; words are evaluated by matrix products."""

    genus: int
    images: dict  # positive letter -> MobiusMap

    def __post_init__(self):
        self._letters = {}
        for k, m in self.images.items():
            self._letters[k] = np.array([[m.a, m.b], [m.c, m.d]], dtype=complex)
            mi = m.inverse()
            self._letters[-k] = np.array([[mi.a, mi.b], [mi.c, mi.d]], dtype=complex)
        self._cache: dict = {}
        self._ball_cache: dict = {}
        self._iv_letter_cache: dict = {}

    def matrix(self, word: Word) -> np.ndarray:
        m = np.eye(2, dtype=complex)
        for x in word:
            m = m @ self._letters[x]
        return m

    def mobius(self, word: Word) -> MobiusMap:
        word = tuple(word)
        hit = self._cache.get(word)
        if hit is not None:
            return hit
        m = self.matrix(word)
        out = MobiusMap.from_unit_entries(m[0, 0], m[0, 1], m[1, 0], m[1, 1])
        if len(self._cache) < 100000:
            self._cache[word] = out
        return out

    @property
    def is_real(self) -> bool:
        return all(m.is_real(1e-9) for m in self.images.values())

    def conjugate_by(self, g: MobiusMap) -> "HolonomyRep":
        return HolonomyRep(self.genus, {k: m.conjugate_by(g) for k, m in self.images.items()})

    def relator_residual(self) -> float:
        return self.mobius(surface_relator(self.genus)).frobenius_distance(MobiusMap.identity())


def build_from_fn(fn: FNCoordinates) -> HolonomyRep:
    """Holonomy of the genus-2 surface with the given Fenchel-Nielsen data.

    Pants 1 has boundary words (a1, b1 a1^-1 b1^-1, w^-1) and pants 2 has
    (a2, b2 a2^-1 b2^-1, w); the handle gluings solve for b1, b2 and the
    waist gluing conjugates pants 2 onto the w-axis.  The relator holds to
    machine precision by construction; side conventions below were selected
    by a purely-loxodromic certification sweep on the reference surface.
    """
    l1, l2, l3 = fn.lengths
    t1, t2, t3 = fn.twists
    x1, x2, x3 = pants_rep(l1, l1, l3)
    a1m = x1
    y1 = x2
    b1m = conj_taking(a1m.inverse(), y1, t1)
    w_target = x3.inverse()  # rho(w)
    x1p, x2p, x3p = pants_rep(l2, l2, l3)
    g = conj_taking(x3p, w_target, t3)
    a2m = (x1p).conjugate_by(g)
    y2 = (x2p).conjugate_by(g)
    b2m = conj_taking(a2m.inverse(), y2, t2)
    rep = HolonomyRep(2, {1: a1m, 2: b1m, 3: a2m, 4: b2m})
    res = rep.relator_residual()
    if res > 1e-8:
        raise RuntimeError("relator residual %.3e exceeds 1e-8" % res)
    return rep


def geodesic_length(rep: HolonomyRep, word: Word) -> float:
    """Length of the closed geodesic of a loxodromic class: 2 arccosh(|tr|/2)."""
    m = rep.mobius(free_reduce(word))
    cls = classify(m)
    if not cls.is_loxodromic:
        raise ValueError(
            "word %r is %s, not loxodromic" % (format_word(tuple(word)), cls.kind)
        )
    return complex_length(m).real


# ---------------------------------------------------------------------------
# word-ball enumeration with displacement pruning


def _batch_apply(mats: np.ndarray, z) -> np.ndarray:
    """Apply a batch of Mobius matrices to one sphere point; oo-safe."""
    a, b, c, d = mats[:, 0, 0], mats[:, 0, 1], mats[:, 1, 0], mats[:, 1, 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        if is_oo(z):
            out = a / c
        else:
            out = (a * z + b) / (c * z + d)
    return out


def _word_ball(rep: HolonomyRep, radius: int, prune_dist: float, retreat_letters: int = 2):
    """Reduced words of length <= radius whose action displaces the
    basepoint i by at most (roughly) prune_dist.

    Pruning keeps a node when d(g i, i) <= prune_dist + C * min(retreat_letters,
    radius - |g|), C = max per-letter displacement, so a node is cut only when
    no completion within the allowed retreat can re-enter the target ball.
    Returns (words, matrices, exhausted); exhausted means the frontier died
    while the retreat allowance was still at full width, so any larger radius
    would enumerate exactly the same words.
    """
    key = (radius, round(prune_dist, 6), retreat_letters)
    hit = rep._ball_cache.get(key)
    if hit is not None:
        return hit
    letters = sorted(rep._letters.keys())
    lmats = {x: rep._letters[x] for x in letters}
    disp_c = 0.0
    for x in letters:
        z = _batch_apply(lmats[x][None, :, :], 1j)[0]
        d = math.acosh(1.0 + abs(z - 1j) ** 2 / (2.0 * max(z.imag, 1e-300)))
        disp_c = max(disp_c, d)
    words = [()]
    mats = np.eye(2, dtype=complex)[None, :, :]
    all_words = [()]
    all_mats = [np.eye(2, dtype=complex)[None, :, :]]
    exhausted = False
    for level in range(1, radius + 1):
        new_words = []
        new_blocks = []
        for x in letters:
            keep_idx = [i for i, w in enumerate(words) if not w or w[-1] != -x]
            if not keep_idx:
                continue
            block = mats[keep_idx] @ lmats[x]
            new_blocks.append(block)
            new_words.extend(words[i] + (x,) for i in keep_idx)
        if not new_blocks:
            break
        cand = np.concatenate(new_blocks, axis=0)
        z = _batch_apply(cand, 1j)
        with np.errstate(invalid="ignore"):
            coshd = 1.0 + np.abs(z - 1j) ** 2 / (2.0 * np.maximum(z.imag, 1e-300))
        allow = prune_dist + disp_c * min(retreat_letters, radius - level)
        if allow > 700.0:  # cosh overflow: keep everything
            mask = np.ones(len(cand), dtype=bool)
        else:
            mask = coshd <= math.cosh(allow)
        idx = np.nonzero(mask)[0]
        words = [new_words[i] for i in idx]
        mats = cand[idx]
        if not words:
            # conclusive only if the allowance had not yet tightened
            exhausted = radius - level >= retreat_letters
            break
        all_words.extend(words)
        all_mats.append(mats)
    out = (all_words, np.concatenate(all_mats, axis=0), exhausted)
    if len(rep._ball_cache) < 8 and len(all_words) <= 300000:
        rep._ball_cache[key] = out
    return out


# ---------------------------------------------------------------------------
# purely loxodromic scan


def _qc(z: complex):
    """Complex number as an exact (Fraction re, Fraction im) pair."""
    return (Fraction(float(z.real)), Fraction(float(z.imag)))


def _qc_mul(u, v):
    return (u[0] * v[0] - u[1] * v[1], u[0] * v[1] + u[1] * v[0])


def _qm_mul(a, b):
    return tuple(
        tuple(
            (
                a[i][0][0] * b[0][j][0] - a[i][0][1] * b[0][j][1]
                + a[i][1][0] * b[1][j][0] - a[i][1][1] * b[1][j][1],
                a[i][0][0] * b[0][j][1] + a[i][0][1] * b[0][j][0]
                + a[i][1][0] * b[1][j][1] + a[i][1][1] * b[1][j][0],
            )
            for j in (0, 1)
        )
        for i in (0, 1)
    )


def _qm_from(entries) -> tuple:
    (a, b), (c, d) = entries
    return ((_qc(a), _qc(b)), (_qc(c), _qc(d)))


def _qm_adjugate(m):
    (a, b), (c, d) = m
    return ((d, (-b[0], -b[1])), ((-c[0], -c[1]), a))


def _qm_det(m):
    (a, b), (c, d) = m
    ad = _qc_mul(a, d)
    bc = _qc_mul(b, c)
    return (ad[0] - bc[0], ad[1] - bc[1])


def _q_comm_offset(q1, q2) -> float:
    prod = _qm_mul(_qm_mul(q1, q2), _qm_mul(_qm_adjugate(q1), _qm_adjugate(q2)))
    tr = (prod[0][0][0] + prod[1][1][0], prod[0][0][1] + prod[1][1][1])
    det = _qc_mul(_qm_det(q1), _qm_det(q2))
    den = det[0] * det[0] + det[1] * det[1]
    if den == 0:
        return math.inf
    re = (tr[0] * det[0] + tr[1] * det[1]) / den
    im = (tr[1] * det[0] - tr[0] * det[1]) / den
    # either SL2 lift of the product may appear, so measure against +-2
    off2 = min((re - 2) * (re - 2) + im * im, (re + 2) * (re + 2) + im * im)
    return math.sqrt(float(off2))


_QM_ONE = (
    ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(0))),
    ((Fraction(0), Fraction(0)), (Fraction(1), Fraction(0))),
)


def _exact_word_qm(rep: "HolonomyRep", word: Word):
    """Word matrix recomposed in exact rational arithmetic from the float
    generator entries; the generators are the ground truth, the float word
    product is not."""
    m = _QM_ONE
    for letter in word:
        m = _qm_mul(m, _qm_from(rep._letters[letter]))
    return m


def exact_commutator_trace_offset(e1, e2) -> float:
    """| |tr [A,B]| - 2 | computed in exact rational arithmetic from the
    entries of A and B (2x2 nested sequences).  Float commutator traces of
    large-entry products lose up to all their absolute accuracy near 2, which
    is exactly where the shared-fixed-point test lives; treating the given
    entries as exact rationals removes the accumulation entirely.  Inverses
    enter as adjugates, so no unit determinant is assumed: the trace is
    divided by det(A) det(B) at the end, exactly."""
    return _q_comm_offset(_qm_from(e1), _qm_from(e2))


@dataclass
class EndpointEvidence:
    """Axis-sharing evidence for a pair of loxodromic maps: the minimum
    spherical gap between their endpoint sets plus the commutator trace.
    A genuinely shared fixed point forces tr[A,B] = 2; a small gap with
    commutator trace far from 2 is a near miss, not a violation.  The
    deciding trace offset is computed in exact rational arithmetic."""

    min_gap: float
    trace_commutator: complex
    trace_offset: float
    coaxial: bool

    @property
    def shared(self) -> bool:
        return (not self.coaxial) and self.min_gap < 1e-6 and self.trace_offset <= 1e-9


def endpoint_sharing_evidence(m1: MobiusMap, m2: MobiusMap) -> EndpointEvidence:
    f1 = fixed_points(m1)
    f2 = fixed_points(m2)
    gaps = [chordal(p, q) for p in f1 for q in f2]
    coaxial = (gaps[0] < 1e-9 and gaps[3] < 1e-9) or (gaps[1] < 1e-9 and gaps[2] < 1e-9)
    comm = m1 @ m2 @ m1.inverse() @ m2.inverse()
    off = exact_commutator_trace_offset(m1.entries(), m2.entries())
    return EndpointEvidence(
        min_gap=min(gaps),
        trace_commutator=comm.trace(),
        trace_offset=off,
        coaxial=coaxial,
    )


@dataclass
class ScanReport:
    radius: int
    margin: float
    gap_tol: float
    classes_checked: int
    words_checked: int
    pairs_inspected: int
    violations: list
    borderline: list
    near_misses: list
    min_distinct_gap: float

    @property
    def certified(self) -> bool:
        return not self.violations


def _sphere_embed(z: np.ndarray) -> np.ndarray:
    """Riemann sphere embedding with chordal = Euclidean distance."""
    out = np.empty((len(z), 3))
    fin = np.isfinite(z.real) & np.isfinite(z.imag)
    zz = np.where(fin, z, 0.0)
    n = np.abs(zz) ** 2 + 1.0
    out[:, 0] = 2.0 * zz.real / n
    out[:, 1] = 2.0 * zz.imag / n
    out[:, 2] = (np.abs(zz) ** 2 - 1.0) / n
    out[~fin] = (0.0, 0.0, 1.0)
    return out


def _batch_fixed_points(mats: np.ndarray):
    """Fixed points of a batch of loxodromic SL2 matrices (either root order)."""
    a, b, c, d = mats[:, 0, 0], mats[:, 0, 1], mats[:, 1, 0], mats[:, 1, 1]
    disc = np.sqrt((a - d) ** 2 + 4.0 * b * c)
    cz = np.abs(c) < 1e-14
    safe_c = np.where(cz, 1.0, c)
    safe_da = np.where(np.abs(d - a) < 1e-300, 1.0, d - a)
    z1 = np.where(cz, np.inf + 0j, ((a - d) + disc) / (2.0 * safe_c))
    z2 = np.where(cz, b / safe_da, ((a - d) - disc) / (2.0 * safe_c))
    return z1, z2


def _pack_owner_pairs(oi: np.ndarray, oj: np.ndarray, n_words: int) -> np.ndarray:
    keep = oi != oj
    if not keep.any():
        return np.empty(0, dtype=np.int64)
    lo = np.minimum(oi[keep], oj[keep]).astype(np.int64)
    hi = np.maximum(oi[keep], oj[keep]).astype(np.int64)
    return np.unique(lo * n_words + hi)


def _close_pairs_circle(
    z: np.ndarray, gap_tol: float, owner: np.ndarray, n_words: int
) -> np.ndarray:
    """Deduplicated owner-pair ids (lo * n_words + hi) for points of R u {oo}
    at chordal distance < gap_tol.  The real line embeds as a great circle,
    where the angular position is exactly 2 arctan(x) and chordal =
    2 sin(arc/2), so a sorted sweep in the angle is exact.  Raw matches come
    in the millions (endpoint towers of long words), so windows are expanded
    blockwise and reduced to owner ids immediately."""
    fin = np.isfinite(z.real)
    theta = np.where(fin, 2.0 * np.arctan(np.where(fin, z.real, 0.0)), np.pi)
    order = np.argsort(theta, kind="stable")
    tv = theta[order]
    n = len(tv)
    if n < 2:
        return np.empty(0, dtype=np.int64)
    arc = 2.0 * math.asin(min(1.0, gap_tol / 2.0))
    wrap = min(int(np.searchsorted(tv, tv[0] + arc, side="right")), n - 1)
    ext = np.concatenate([tv, tv[:wrap] + 2.0 * math.pi])
    ext_owner = owner[np.concatenate([order, order[:wrap]])]
    counts = np.searchsorted(ext, tv + arc, side="right") - np.arange(n) - 1
    csum = np.concatenate([[0], np.cumsum(counts)])
    ids = []
    start = 0
    while start < n:
        stop = int(np.searchsorted(csum, csum[start] + 2_000_000, side="right")) - 1
        stop = min(max(stop, start + 1), n)
        c = counts[start:stop]
        total = int(c.sum())
        if total > 0:
            ii = np.repeat(np.arange(start, stop), c)
            offs = np.cumsum(c) - c
            jj = np.arange(total) - np.repeat(offs, c) + ii + 1
            got = _pack_owner_pairs(ext_owner[ii], ext_owner[jj], n_words)
            if len(got):
                ids.append(got)
        start = stop
    if not ids:
        return np.empty(0, dtype=np.int64)
    return np.unique(np.concatenate(ids))


def _close_pairs_blocked(
    pts: np.ndarray, gap_tol: float, owner: np.ndarray, n_words: int
) -> np.ndarray:
    """Owner-pair ids for sphere points at distance < gap_tol, blocked brute
    force; meant for the moderate ball sizes of non-real scans."""
    n = len(pts)
    ids = []
    block = max(16, int(4e7 // max(n, 1)))
    for s in range(0, n, block):
        d2 = ((pts[s : s + block, None, :] - pts[None, :, :]) ** 2).sum(axis=2)
        ii, jj = np.nonzero(d2 < gap_tol * gap_tol)
        ii = ii + s
        m = ii < jj
        if m.any():
            got = _pack_owner_pairs(owner[ii[m]], owner[jj[m]], n_words)
            if len(got):
                ids.append(got)
    if not ids:
        return np.empty(0, dtype=np.int64)
    return np.unique(np.concatenate(ids))


def purely_loxodromic_scan(
    rep: HolonomyRep,
    radius: int,
    margin: float = EPS_CLS,
    gap_tol: float = 1e-6,
) -> ScanReport:
    """Certify pure loxodromicity on a word ball.

    Stage 1 classifies every nontrivial conjugacy class of word length <=
    radius (conjugation-invariant, so this covers every cyclically reduced
    word in the ball).  Stage 2 checks axis-endpoint sharing across all
    reduced words of length <= radius: endpoint pairs closer than gap_tol are
    inspected, and a pair counts as a violation only when the commutator
    trace corroborates a genuinely shared fixed point (tr[A,B] = 2 within
    1e-9); distinct-but-close axes are reported as near misses.  This is a
    finite certificate: it covers word balls, not the whole group.
    """
    reps_list = conjugacy_class_reps(rep.genus, radius)
    violations = []
    borderline = []
    by_len: dict = {}
    for w in reps_list:
        by_len.setdefault(len(w), []).append(w)
    for n, ws in sorted(by_len.items()):
        mats = np.broadcast_to(np.eye(2, dtype=complex), (len(ws), 2, 2)).copy()
        for k in range(n):
            col = np.stack([rep._letters[w[k]] for w in ws], axis=0)
            mats = mats @ col
        traces = mats[:, 0, 0] + mats[:, 1, 1]
        t2 = traces * traces
        x = np.clip(t2.real, 0.0, 4.0)
        dist = np.abs(t2 - x)
        for i, w in enumerate(ws):
            if dist[i] > margin:
                if dist[i] <= 10 * margin:
                    borderline.append({"word": format_word(w), "trace_sq": complex(t2[i])})
                continue
            m = MobiusMap.from_unit_entries(mats[i, 0, 0], mats[i, 0, 1], mats[i, 1, 0], mats[i, 1, 1])
            kind = classify(m, margin).kind
            violations.append(
                {
                    "word": format_word(w),
                    "kind": kind,
                    "trace_sq": complex(t2[i]),
                }
            )
    # pair stage over all reduced words in the ball
    words, mats, _ = _word_ball(rep, radius, float("inf"))
    words = words[1:]
    mats = mats[1:]
    traces = mats[:, 0, 0] + mats[:, 1, 1]
    lox = np.abs((traces * traces) - np.clip((traces * traces).real, 0.0, 4.0)) > margin
    words = [w for w, keep in zip(words, lox) if keep]
    mats = mats[lox]
    z1, z2 = _batch_fixed_points(mats)
    p1 = _sphere_embed(z1)
    p2 = _sphere_embed(z2)
    owner = np.concatenate([np.arange(len(words)), np.arange(len(words))])
    n_words = len(words)
    if rep.is_real:
        pair_ids = _close_pairs_circle(np.concatenate([z1, z2]), gap_tol, owner, n_words)
    else:
        pair_ids = _close_pairs_blocked(
            np.concatenate([p1, p2]), gap_tol, owner, n_words
        )
    pairs_inspected = 0
    min_gap = math.inf
    near = []
    for s in range(0, len(pair_ids), 500_000):
        ids = pair_ids[s : s + 500_000]
        pi = (ids // n_words).astype(np.int64)
        pj = (ids % n_words).astype(np.int64)
        # coaxial pairs (powers of a common primitive) commute and share both
        # endpoints legitimately; exclude them before the trace test, because
        # a commuting pair has commutator trace exactly 2
        same_ax = (
            (np.linalg.norm(p1[pi] - p1[pj], axis=1) < 1e-9)
            & (np.linalg.norm(p2[pi] - p2[pj], axis=1) < 1e-9)
        ) | (
            (np.linalg.norm(p1[pi] - p2[pj], axis=1) < 1e-9)
            & (np.linalg.norm(p2[pi] - p1[pj], axis=1) < 1e-9)
        )
        pi, pj = pi[~same_ax], pj[~same_ax]
        if not len(pi):
            continue
        pairs_inspected += int(len(pi))
        gaps = np.stack(
            [
                np.linalg.norm(p1[pi] - p1[pj], axis=1),
                np.linalg.norm(p1[pi] - p2[pj], axis=1),
                np.linalg.norm(p2[pi] - p1[pj], axis=1),
                np.linalg.norm(p2[pi] - p2[pj], axis=1),
            ],
            axis=1,
        ).min(axis=1)
        min_gap = min(min_gap, float(gaps.min()))
        mi = mats[pi]
        mj = mats[pj]
        inv_i = np.empty_like(mi)
        inv_i[:, 0, 0], inv_i[:, 0, 1] = mi[:, 1, 1], -mi[:, 0, 1]
        inv_i[:, 1, 0], inv_i[:, 1, 1] = -mi[:, 1, 0], mi[:, 0, 0]
        inv_j = np.empty_like(mj)
        inv_j[:, 0, 0], inv_j[:, 0, 1] = mj[:, 1, 1], -mj[:, 0, 1]
        inv_j[:, 1, 0], inv_j[:, 1, 1] = -mj[:, 1, 0], mj[:, 0, 0]
        comm = mi @ mj @ inv_i @ inv_j
        tr_comm = comm[:, 0, 0] + comm[:, 1, 1]
        # the float trace of a long-word commutator carries noise amplified
        # by the entry magnitudes, so the vectorized test is only a coarse
        # screen; candidates inside it are settled by exact rational
        # recomposition from the generators (abs() because either SL2 lift
        # of the sign-normalized product can appear)
        coarse = np.abs(np.abs(tr_comm) - 2.0) <= 1e-3
        for k in np.nonzero(coarse)[0]:
            off = _q_comm_offset(
                _exact_word_qm(rep, words[pi[k]]),
                _exact_word_qm(rep, words[pj[k]]),
            )
            if off <= 1e-9:
                violations.append(
                    {
                        "pair": (format_word(words[pi[k]]), format_word(words[pj[k]])),
                        "min_endpoint_gap": float(gaps[k]),
                        "trace_commutator": complex(tr_comm[k]),
                        "trace_offset": off,
                    }
                )
            else:
                near.append(
                    (
                        float(gaps[k]),
                        format_word(words[pi[k]]),
                        format_word(words[pj[k]]),
                        complex(tr_comm[k]),
                    )
                )
        ok = np.nonzero(~coarse)[0]
        if len(ok):
            for k in ok[np.argsort(gaps[ok])[:32]]:
                near.append(
                    (
                        float(gaps[k]),
                        format_word(words[pi[k]]),
                        format_word(words[pj[k]]),
                        complex(tr_comm[k]),
                    )
                )
    near.sort(key=lambda r: r[0])
    near_misses = [
        {"pair": (w1, w2), "min_endpoint_gap": g, "trace_commutator": t}
        for g, w1, w2, t in near[:32]
    ]
    return ScanReport(
        radius=radius,
        margin=margin,
        gap_tol=gap_tol,
        classes_checked=len(reps_list),
        words_checked=len(words),
        pairs_inspected=pairs_inspected,
        violations=violations,
        borderline=borderline,
        near_misses=near_misses,
        min_distinct_gap=min_gap,
    )


# ---------------------------------------------------------------------------
# crossing engine: intersections and angles of closed geodesics

# Candidate crossings from the float pipeline are re-certified in interval
# arithmetic before they count: deep conjugates suffer catastrophic
# cancellation in double precision, which can both invent and hide
# sign changes of the endpoint test.  Entries of the representation are
# treated as exact dyadic rationals.

_IV_NEAR_TOL = 1e-6
_IV_CAP = 4000


def witness_depth(c1: Word, c2: Word) -> int:
    """Word-ball radius expected to expose every crossing witness of the
    pair; an empty enumeration below this depth is inconclusive."""
    c1 = cyclic_reduce(tuple(c1))
    c2 = cyclic_reduce(tuple(c2))
    if conjugacy_key(c1) == conjugacy_key(c2):
        return len(c1) // 2 + 1
    return (len(c1) + len(c2) + 1) // 2


def _signed_canonical(n: np.ndarray) -> np.ndarray:
    # fix the PSL(2) sign ambiguity by the largest entry
    flat = np.abs(n).ravel()
    z = n.ravel()[int(np.argmax(flat))]
    if z.real < 0 or (z.real == 0 and z.imag < 0):
        return -n
    return n


def _matrices_match(a: np.ndarray, b: np.ndarray, rtol: float = 1e-6) -> bool:
    scale = max(1.0, float(np.abs(b).max()))
    return float(np.abs(a - b).max()) <= rtol * scale


class _IntervalCert:
    """Sign certification of u*v endpoint tests over one curve pair, in real
    interval arithmetic; all data derives from the exact float entries of
    the representation's generators."""

    def __init__(self, rep: HolonomyRep, c1: Word, c2: Word):
        from mpmath import iv

        iv.prec = 160
        self.iv = iv
        self.letters = rep._iv_letter_cache
        if not self.letters:
            for x, m in rep._letters.items():
                self.letters[x] = (
                    iv.mpf(float(m[0, 0].real)),
                    iv.mpf(float(m[0, 1].real)),
                    iv.mpf(float(m[1, 0].real)),
                    iv.mpf(float(m[1, 1].real)),
                )
        m1 = self._word_mat(c1)
        m2 = self._word_mat(c2)
        rep1, att1 = self._fixed_pair(m1, flip=True)
        self.p_att, self.p_rep = self._fixed_pair(m2)
        one = iv.mpf(1)
        zero = iv.mpf(0)
        # chart moving the axis of c1 to (0, oo); scale is irrelevant for
        # the sign test and the crossing position only needs midpoints
        if rep1 is None:
            self.chart = (zero, one, one, -att1)
        elif att1 is None:
            self.chart = (one, -rep1, zero, one)
        else:
            self.chart = (one, -rep1, one, -att1)

    def _mul(self, x, y):
        return (
            x[0] * y[0] + x[1] * y[2],
            x[0] * y[1] + x[1] * y[3],
            x[2] * y[0] + x[3] * y[2],
            x[2] * y[1] + x[3] * y[3],
        )

    def _word_mat(self, word: Word):
        iv = self.iv
        m = (iv.mpf(1), iv.mpf(0), iv.mpf(0), iv.mpf(1))
        for x in word:
            m = self._mul(m, self.letters[x])
        return m

    def _fixed_pair(self, m, flip: bool = False):
        """(attracting, repelling) interval fixed points of a real
        loxodromic interval matrix; None encodes infinity.  flip returns
        (repelling, attracting)."""
        iv = self.iv
        a, b, c, d = m
        if c.a <= 0 <= c.b:
            if not (c.a == c.b == 0):
                raise ArithmeticError("c straddles zero")
            other = b / (d - a)
            inf_attracting = abs((a / d).mid) > 1.0
            att, rep_ = (None, other) if inf_attracting else (other, None)
        else:
            B = d - a
            disc2 = B * B + 4 * b * c
            if disc2.a <= 0:
                raise ArithmeticError("discriminant not certified positive")
            disc = iv.sqrt(disc2)
            q = -(B + disc) / 2 if abs((B + disc).mid) >= abs((B - disc).mid) else -(B - disc) / 2
            z1 = q / c
            z2 = -b / q
            # attracting root has |cz + d| > 1
            mag = abs((c * z1 + d).mid)
            att, rep_ = (z1, z2) if mag > 1.0 else (z2, z1)
        return (rep_, att) if flip else (att, rep_)

    def _apply(self, m, p):
        if p is None:
            num, den = m[0], m[2]
        else:
            num, den = m[0] * p + m[1], m[2] * p + m[3]
        if den.a <= 0 <= den.b:
            return None  # unbounded image; sign unresolvable here
        return num / den

    def endpoint_signs(self, word: Word):
        """(u, v, verdict) for one conjugating word: verdict is True for a
        certified crossing, False for certified no-crossing, None when the
        intervals cannot decide."""
        t = self._mul(self.chart, self._word_mat(word))
        u = self._apply(t, self.p_rep)
        v = self._apply(t, self.p_att)
        if u is None or v is None:
            return u, v, None
        s = u * v
        if s.b < 0:
            return u, v, True
        if s.a > 0:
            return u, v, False
        return u, v, None


@dataclass
class CrossingReport:
    curve1: Word
    curve2: Word
    ball: int
    prune_dist: float
    crossings: list  # (t mod length1, angle) pairs, deduplicated
    stable: bool
    shared_endpoint_flags: int
    self_mode: bool

    @property
    def count(self) -> int:
        n = len(self.crossings)
        return n // 2 if self.self_mode else n


def _default_prune(rep: HolonomyRep, c1: Word, c2: Word) -> float:
    l1 = geodesic_length(rep, c1)
    l2 = geodesic_length(rep, c2)
    return 0.5 * l1 + 0.5 * l2 + 6.0


def crossings_of_geodesics(
    rep: HolonomyRep,
    c1: Word,
    c2: Word,
    ball: int = 6,
    prune_dist: float | None = None,
) -> CrossingReport:
    """Transverse crossings of the closed geodesics of c1 and c2, computed by
    enumerating conjugate axes of c2 against a fundamental segment of c1's
    axis.  Candidate witnesses are deduplicated by their double coset
    <c1> g <c2>, which matches surface crossings exactly for primitive
    curves, and each surviving crossing is certified with interval
    arithmetic.  The report is flagged stable when every witness fits
    strictly inside the enumeration ball and no certificate was
    indeterminate.
    """
    if not rep.is_real:
        raise ValueError("crossing enumeration needs the reference Fuchsian rep")
    c1 = cyclic_reduce(tuple(c1))
    c2 = cyclic_reduce(tuple(c2))
    if not c1 or not c2:
        raise ValueError("curves must be nontrivial")
    m1 = rep.mobius(c1)
    m2 = rep.mobius(c2)
    for w, m in ((c1, m1), (c2, m2)):
        if not classify(m).is_loxodromic:
            raise ValueError("curve %r is not loxodromic" % (format_word(w),))
    if prune_dist is None:
        prune_dist = _default_prune(rep, c1, c2)
    self_mode = conjugacy_key(c1) == conjugacy_key(c2)
    l1 = complex_length(m1).real
    rep1, att1 = oriented_axis(m1)
    chart = frame(rep1, att1).inverse()
    cm = np.array([[chart.a, chart.b], [chart.c, chart.d]], dtype=complex)
    p_att, p_rep = fixed_points(m2)
    words, mats, exhausted = _word_ball(rep, ball, prune_dist)
    cmats = cm[None, :, :] @ mats
    u = _batch_apply(cmats, p_rep)
    v = _batch_apply(cmats, p_att)
    ur = u.real
    vr = v.real
    with np.errstate(invalid="ignore"):
        finite = np.isfinite(ur) & np.isfinite(vr)
        big = 1e9
        degenerate = ~finite | (np.abs(ur) > big) | (np.abs(vr) > big) | (np.abs(ur) < 1 / big) | (np.abs(vr) < 1 / big)
        cross_mask = finite & ~degenerate & (ur * vr < 0)
    shared_flags = int(np.count_nonzero(degenerate & finite))
    # the float sign test is only in doubt when one endpoint is orders of
    # magnitude closer to zero than the other; deep conjugates shrink both
    # endpoints together and stay out of this mask
    near_mask = (
        finite
        & ~degenerate
        & ~cross_mask
        & (np.minimum(np.abs(ur), np.abs(vr)) < _IV_NEAR_TOL * np.maximum(np.abs(ur), np.abs(vr)))
    )
    cand = list(np.nonzero(cross_mask)[0]) + list(np.nonzero(near_mask)[0])
    indeterminate = False
    if len(cand) > _IV_CAP:
        sev = np.minimum(np.abs(ur), np.abs(vr))
        cand.sort(key=lambda i: sev[i])
        cand = cand[:_IV_CAP]
        indeterminate = True
    # Witnesses of one surface crossing all produce the same conjugate
    # isometry once slid back along c1 into the fundamental segment, because
    # the representation is faithful.  Matrix agreement is a safe key: float
    # noise on entries stays near 1e-12 while discreteness separates distinct
    # group elements by orders of magnitude more.  Each surviving group is
    # certified once through interval arithmetic on its shortest witness.
    dedup = []
    if cand:
        cert = _IntervalCert(rep, c1, c2)
        m2a = np.array([[m2.a, m2.b], [m2.c, m2.d]], dtype=complex)
        h = math.exp(l1 / 2.0)
        groups: list = []  # matched normalized conjugates, one per crossing
        for i in sorted(cand, key=lambda j: len(words[j])):
            cg = cmats[i]
            adj = np.array([[cg[1, 1], -cg[0, 1]], [-cg[1, 0], cg[0, 0]]], dtype=complex)
            gamma = cg @ m2a @ adj
            yc = math.sqrt(abs(ur[i] * vr[i]))
            k = math.floor(math.log(yc) / l1) if yc > 0 else 0
            dk = np.array([[h ** -k, 0.0], [0.0, h ** k]], dtype=complex)
            dki = np.array([[h ** k, 0.0], [0.0, h ** -k]], dtype=complex)
            norm = _signed_canonical(dk @ gamma @ dki)
            d1 = np.array([[h, 0.0], [0.0, 1.0 / h]], dtype=complex)
            d1i = np.array([[1.0 / h, 0.0], [0.0, h]], dtype=complex)
            # k from float y can sit on a period boundary, so compare against
            # the conjugates shifted by one c1 step either way as well
            shifted = (
                norm,
                _signed_canonical(d1i @ norm @ d1),
                _signed_canonical(d1 @ norm @ d1i),
            )
            if any(_matrices_match(s, g0) for g0 in groups for s in shifted):
                continue
            u_iv, v_iv, verdict = cert.endpoint_signs(tuple(words[i]))
            if verdict is None:
                indeterminate = True
                continue
            if not verdict:
                continue
            groups.append(norm)
            uu, vv = float(u_iv.mid), float(v_iv.mid)
            y0 = math.sqrt(-uu * vv)
            ang = math.atan2(y0, abs((uu + vv) / 2.0))
            dedup.append((math.log(y0) % l1, ang, len(words[i])))
    dedup.sort()
    # witnesses live within about half the combined word length of the two
    # curves (cyclic-prefix witnesses for self-crossings reach len/2); an
    # empty result below that depth proves nothing
    need = witness_depth(c1, c2)
    if dedup:
        settled = all(wl < ball for _, _, wl in dedup)
    else:
        settled = ball >= need
    stable = (exhausted or settled) and not indeterminate
    return CrossingReport(
        curve1=c1,
        curve2=c2,
        ball=ball,
        prune_dist=prune_dist,
        crossings=[(tm, ang) for tm, ang, _ in dedup],
        stable=stable,
        shared_endpoint_flags=shared_flags,
        self_mode=self_mode,
    )


def intersection_count(rep: HolonomyRep, c1, c2, ball: int = 6) -> tuple:
    """Geometric intersection number of two curve classes and a stability
    flag (stable = last shell contributed nothing)."""
    r = crossings_of_geodesics(rep, tuple(c1), tuple(c2), ball=ball)
    return r.count, r.stable


def self_intersection_count(rep: HolonomyRep, c, ball: int = 6) -> tuple:
    r = crossings_of_geodesics(rep, tuple(c), tuple(c), ball=ball)
    return r.count, r.stable


def is_simple(rep: HolonomyRep, c, ball: int = 6) -> bool:
    n, stable = self_intersection_count(rep, c, ball=ball)
    return n == 0 and stable


def same_geodesic(rep: HolonomyRep, c1, c2, ball: int = 4, tol: float = 1e-8) -> bool:
    """Whether two words define the same unoriented closed geodesic."""
    c1 = cyclic_reduce(tuple(c1))
    c2 = cyclic_reduce(tuple(c2))
    if conjugacy_key(c1) == conjugacy_key(c2):
        return True
    m1 = rep.mobius(c1)
    m2 = rep.mobius(c2)
    if abs(complex_length(m1).real - complex_length(m2).real) > 1e-9:
        return False
    a1f, r1f = fixed_points(m1)
    p_att, p_rep = fixed_points(m2)
    words, mats, _ = _word_ball(rep, ball, 2.0 * complex_length(m1).real + 8.0)
    ia = _batch_apply(mats, p_att)
    ir = _batch_apply(mats, p_rep)
    for i in range(len(words)):
        za, zr = ia[i], ir[i]
        pair = [za, zr]
        for (x, y) in ((pair[0], pair[1]), (pair[1], pair[0])):
            xa = OO if not np.isfinite(x.real) else complex(x)
            ya = OO if not np.isfinite(y.real) else complex(y)
            if chordal(xa, a1f) < tol and chordal(ya, r1f) < tol:
                return True
    return False


# ---------------------------------------------------------------------------
# angle suprema between multiloops


@dataclass
class AngleReport:
    angle: float
    converged: bool
    stable: bool
    detail: dict = field(default_factory=dict)


def angle_between_multiloops(rep: HolonomyRep, mx: Sequence[Word], my: Sequence[Word], ball: int = 6) -> AngleReport:
    """Supremum of crossing angles between the geodesic multiloops mx, my;
    0.0 when they do not cross (in particular for equal or disjoint loops).
    Arguments are put in a canonical order first, making the symmetry
    angle(X, Y) == angle(Y, X) exact rather than within roundoff."""
    mx = [tuple(w) for w in mx]
    my = [tuple(w) for w in my]
    if tuple(my) < tuple(mx):
        mx, my = my, mx
    best = 0.0
    stable = True
    for cx in mx:
        for cy in my:
            r = crossings_of_geodesics(rep, tuple(cx), tuple(cy), ball=ball)
            stable = stable and r.stable
            for _, ang in r.crossings:
                best = max(best, ang)
    return AngleReport(angle=best, converged=True, stable=stable)


@dataclass(frozen=True)
class TwistLimit:
    """Twist-limit lamination descriptor: the Hausdorff limit of
    Tw_curves^n(base) as n -> +oo (left twists)."""

    curves: tuple  # words of the multiloop twisted along
    base: tuple  # words of the starting multiloop

    def iterate(self, n: int) -> tuple:
        from .surface import dehn_twist_multi

        return dehn_twist_multi(self.curves, self.base, n)


def lamination_angle(
    rep: HolonomyRep,
    x,
    y,
    ball: int = 6,
    tol: float = 1e-3,
    max_iter: int = 14,
) -> AngleReport:
    """Angle supremum between two laminations given as multiloops (sequences
    of words) or TwistLimit descriptors.  Twist limits are evaluated through
    their finite twist iterates until two successive angle suprema agree
    within tol; failure to converge within max_iter is reported, not raised.
    """

    def key(obj):
        if isinstance(obj, TwistLimit):
            return (1, obj.curves, obj.base)
        return (0, tuple(tuple(w) for w in obj))

    # canonical argument order: the symmetry angle(X, Y) == angle(Y, X)
    # holds exactly, not just within roundoff
    if key(y) < key(x):
        x, y = y, x

    def iterates(obj):
        if isinstance(obj, TwistLimit):
            return None
        return [tuple(w) for w in obj]

    fx = iterates(x)
    fy = iterates(y)
    if fx is not None and fy is not None:
        return angle_between_multiloops(rep, fx, fy, ball=ball)
    prev = None
    stable = True
    for n in range(2, max_iter + 1):
        mx = fx if fx is not None else x.iterate(n)
        my = fy if fy is not None else y.iterate(n)
        r = angle_between_multiloops(rep, mx, my, ball=ball)
        stable = stable and r.stable
        if prev is not None and abs(r.angle - prev) < tol:
            return AngleReport(angle=r.angle, converged=True, stable=stable, detail={"iterations": n})
        prev = r.angle
    return AngleReport(angle=prev if prev is not None else 0.0, converged=False, stable=stable, detail={"iterations": max_iter})
