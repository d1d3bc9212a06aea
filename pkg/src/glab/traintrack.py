"""Combinatorial train tracks and curve carrying.

A branch is an abstract rectangle; its two vertical edges (the branch ends)
attach at switches.  A switch has two sides holding at most three ends in
total, and a train passing through must enter on one side and leave on the
other (no reversal).  Carrying a multiloop means tracing each curve word
through the track: generator letters anchor at dedicated branches and the
gaps are routed through connector branches by unique shortest smooth paths.
Branch weights are passage counts, so switch balance is exact integer
arithmetic.  Metric annotations on rectangles (nearly-straight constants)
are carried as unverified metadata.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .words import Word, cyclic_reduce


@dataclass(frozen=True)
class Switch:
    """Two-sided junction; ends are (branch_id, 0|1) pairs."""

    left: tuple
    right: tuple

    def ends(self) -> tuple:
        return self.left + self.right


@dataclass(frozen=True)
class TrainTrack:
    branches: tuple
    switches: tuple
    # anchor branch per positive generator letter: letter -> (branch, dir)
    letter_map: dict = field(default_factory=dict, compare=False)
    # unverified (epsilon, K) nearly-straight rectangle annotations
    rect_meta: dict = field(default_factory=dict, compare=False)


@dataclass
class TrackCertificate:
    valid: bool
    violations: list
    max_valence: int
    vertical_pairing: bool


def validate_track(T: TrainTrack) -> TrackCertificate:
    """Structural check: every branch end attached exactly once, switches at
    most trivalent, and both sides of every switch populated so vertical
    edges pair off across it after subdivision."""
    violations = []
    seen = {}
    for s, sw in enumerate(T.switches):
        for e in sw.ends():
            if e in seen:
                violations.append({"kind": "reused-end", "detail": e})
            seen[e] = s
    for b in T.branches:
        for i in (0, 1):
            if (b, i) not in seen:
                violations.append({"kind": "loose-end", "detail": (b, i)})
    max_val = max((len(sw.ends()) for sw in T.switches), default=0)
    if max_val > 3:
        violations.append({"kind": "valence", "detail": max_val})
    pairing = all(sw.left and sw.right for sw in T.switches)
    if not pairing:
        violations.append({"kind": "unpaired-vertical-edge"})
    return TrackCertificate(not violations, violations, max_val, pairing)


def _transitions(T: TrainTrack) -> dict:
    """Smooth continuations: oriented state (branch, dir) -> list of states.

    Arriving at a switch through an end on one side, the train may leave
    through any end on the opposite side."""
    end_home = {}
    for sw in T.switches:
        for e in sw.left:
            end_home[e] = (sw, "L")
        for e in sw.right:
            end_home[e] = (sw, "R")
    out = {}
    for b in T.branches:
        for d in (1, -1):
            arrive = (b, 1 if d == 1 else 0)
            sw, side = end_home[arrive]
            exits = sw.right if side == "L" else sw.left
            nxt = []
            for (b2, i2) in exits:
                nxt.append((b2, 1 if i2 == 0 else -1))
            out[(b, d)] = nxt
    return out


@dataclass
class CarryingCertificate:
    carried: bool
    weights: dict
    switch_balance: list  # (left_sum, right_sum) integers per switch
    reason: Optional[str] = None


def _route(trans: dict, connectors: set, src, dst) -> Optional[list]:
    """Shortest connector-only path of states strictly between src and dst;
    None when impossible, a list of states otherwise.  Ambiguity at minimal
    length is reported as failure (None) to keep the tracing honest."""
    if dst in trans[src]:
        return []
    starts = [s for s in trans[src] if s[0] in connectors]
    paths = {s: [s] for s in starts}
    frontier = starts
    while frontier:
        hits = [paths[s] for s in frontier if dst in trans[s]]
        if len(hits) == 1:
            return hits[0]
        if len(hits) > 1:
            return None
        nxt = []
        for s in frontier:
            for s2 in trans[s]:
                if s2[0] in connectors and s2 not in paths:
                    paths[s2] = paths[s] + [s2]
                    nxt.append(s2)
        frontier = nxt
    return None


def _trace_word(T: TrainTrack, trans: dict, word: Word) -> Optional[dict]:
    anchors = []
    for x in word:
        base = T.letter_map.get(abs(x))
        if base is None:
            return None
        b, d = base
        anchors.append((b, d if x > 0 else -d))
    connectors = {b for b in T.branches} - {b for b, _ in T.letter_map.values()}
    weights = {b: 0 for b in T.branches}
    for b, _ in anchors:
        weights[b] += 1
    n = len(anchors)
    for i in range(n):
        seg = _route(trans, connectors, anchors[i], anchors[(i + 1) % n])
        if seg is None:
            return None
        for b, _ in seg:
            weights[b] += 1
    return weights


def traintrack_carries(T: TrainTrack, M: Sequence) -> CarryingCertificate:
    """Carrying certificate for a weighted multiloop: entries are words or
    (word, multiplicity) pairs.  Failure is returned as data."""
    cert = validate_track(T)
    if not cert.valid:
        return CarryingCertificate(False, {}, [], reason="invalid track")
    trans = _transitions(T)
    total = {b: 0 for b in T.branches}
    for entry in M:
        if (
            isinstance(entry, tuple)
            and len(entry) == 2
            and isinstance(entry[1], int)
            and not isinstance(entry[0], int)
        ):
            word, mult = entry
        else:
            word, mult = entry, 1
        if mult < 0:
            return CarryingCertificate(False, {}, [], reason="negative multiplicity")
        w = cyclic_reduce(tuple(word))
        if not w:
            return CarryingCertificate(False, {}, [], reason="trivial component")
        got = _trace_word(T, trans, w)
        if got is None:
            # a curve may only fit the track with the opposite orientation
            got = _trace_word(T, trans, tuple(-x for x in reversed(w)))
        if got is None:
            return CarryingCertificate(
                False, {}, [], reason=f"component not carried: {w}"
            )
        for b, k in got.items():
            total[b] += mult * k
    balance = []
    for sw in T.switches:
        ls = sum(total[b] for b, _ in sw.left)
        rs = sum(total[b] for b, _ in sw.right)
        balance.append((ls, rs))
    if any(ls != rs for ls, rs in balance):
        return CarryingCertificate(False, total, balance, reason="switch imbalance")
    return CarryingCertificate(True, total, balance)


def reference_track() -> TrainTrack:
    """The standard genus-2 twist track: one annulus-with-transversal piece
    per handle, with the transversal hooked in the left-twist direction, so
    the carried curves are the handle cores and the families b_i a_i^{-k}."""
    branches = ("u1", "v1", "t1", "u2", "v2", "t2")
    switches = []
    for h in ("1", "2"):
        u, v, t = "u" + h, "v" + h, "t" + h
        switches.append(Switch(left=((v, 1),), right=((u, 0), (t, 1))))
        switches.append(Switch(left=((u, 1), (t, 0)), right=((v, 0),)))
    letter_map = {1: ("u1", 1), 2: ("t1", 1), 3: ("u2", 1), 4: ("t2", 1)}
    meta = {b: {"epsilon": None, "K": None, "verified": False} for b in branches}
    return TrainTrack(branches, tuple(switches), letter_map, meta)
