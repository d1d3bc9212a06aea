import pytest

from glab.fuchsian import (
    A1,
    A2,
    B1,
    B2,
    FNCoordinates,
    TwistLimit,
    W_WORD,
    build_from_fn,
    geodesic_length,
    lamination_angle,
)
from glab.surface import (
    CapExhausted,
    CurveClass,
    ElementaryMove,
    PantsDecomposition,
    SurfacePresentation,
    apply_move,
    as_curve,
    curve_is_simple,
    dehn_twist,
    dehn_twist_multi,
    enumerate_elementary_moves,
    geometric_intersection,
    pants_graph_path,
    reference_rep,
    unoriented_key,
    validate_pants_decomposition,
)
from glab.traintrack import (
    Switch,
    TrainTrack,
    reference_track,
    traintrack_carries,
    validate_track,
)
from glab.words import format_word, inverse_word, parse_word

a1, b1, a2, b2, w = (CurveClass(x) for x in (A1, B1, A2, B2, W_WORD))
P_REF = PantsDecomposition((a1, a2, w))
P_THETA = PantsDecomposition((a1, a2, CurveClass((1, 3))))


def test_presentation():
    s = SurfacePresentation(2)
    assert s.generators == ("a1", "b1", "a2", "b2")
    assert s.relator == (1, 2, -1, -2, 3, 4, -3, -4)
    with pytest.raises(ValueError):
        SurfacePresentation(1)


def test_curve_class_canonicalization():
    # conjugation and orientation reversal land in the same class
    c1 = CurveClass((1, 2))
    c2 = CurveClass((2, 1))
    c3 = CurveClass(inverse_word((1, 2)))
    assert c1 == c2 == c3
    assert len({c1, c2, c3}) == 1
    # words that are not cyclically reduced get reduced
    assert CurveClass((2, 1, -2)) == CurveClass((1,))
    with pytest.raises(ValueError):
        CurveClass((1, -1))


def test_separating_flag():
    assert w.separating
    assert not a1.separating
    assert not CurveClass((1, 3)).separating


def test_intersection_oracle_reference_values():
    assert geometric_intersection(a1, b1) == 1
    assert geometric_intersection(a1, w) == 0
    assert geometric_intersection(CurveClass((1, 3)), w) == 2
    assert curve_is_simple(w)
    assert not curve_is_simple(parse_word("a1 b1 A1 b1"))


def test_validate_reference_decomposition():
    cert = validate_pants_decomposition(P_REF)
    assert cert.valid and not cert.violations
    g = cert.dual_graph
    assert g["nodes"] == 2 and g["trivalent"]
    loops = [e for e in g["edges"] if e[0] == e[1]]
    joins = [e for e in g["edges"] if e[0] != e[1]]
    assert len(loops) == 2 and len(joins) == 1
    assert joins[0][2] == w.label


def test_validate_theta_decomposition():
    cert = validate_pants_decomposition(P_THETA)
    assert cert.valid
    assert all(e[0] != e[1] for e in cert.dual_graph["edges"])


def test_validate_violations_as_data():
    assert [v["kind"] for v in validate_pants_decomposition(
        PantsDecomposition((a1, a2))).violations] == ["count"]
    assert "parallel" in [v["kind"] for v in validate_pants_decomposition(
        PantsDecomposition((a1, a1, w))).violations]
    kinds = [v["kind"] for v in validate_pants_decomposition(
        PantsDecomposition((a1, b1, w))).violations]
    assert "crossing" in kinds
    bad = PantsDecomposition((a1, a2, w), genus=3)
    assert [v["kind"] for v in validate_pants_decomposition(bad).violations] == [
        "unsupported-genus"
    ]


def test_enumerate_moves_one_holed_torus():
    moves = enumerate_elementary_moves(P_REF, a1, cap=2)
    assert len(moves) == 3
    assert all(m.case == "one-holed-torus" for m in moves)
    assert all(m.subsurface == (w.label,) for m in moves)
    assert all(geometric_intersection(m.added, a1) == 1 for m in moves)
    added = {m.added for m in moves}
    assert b1 in added and CurveClass((2, 1)) in added and CurveClass((2, -1)) in added


def test_enumerate_moves_four_holed_sphere():
    moves = enumerate_elementary_moves(P_REF, w, cap=2)
    assert len(moves) == 1
    m = moves[0]
    assert m.case == "four-holed-sphere"
    assert m.added == CurveClass((1, 3))
    assert geometric_intersection(m.added, w) == 2
    assert m.subsurface == ("a1", "a1", "a2", "a2")


def test_enumerate_moves_errors_and_cap():
    assert enumerate_elementary_moves(P_REF, a1, cap=0) == []
    with pytest.raises(ValueError):
        enumerate_elementary_moves(P_REF, b1, cap=2)
    with pytest.raises(ValueError):
        enumerate_elementary_moves(PantsDecomposition((a1, b1, w)), a1, cap=2)


def test_move_reversal_restores():
    for ell in (a1, w):
        for m in enumerate_elementary_moves(P_REF, ell, cap=2):
            Q = apply_move(P_REF, m)
            assert Q.key != P_REF.key
            back = apply_move(Q, m.reversed())
            assert back.key == P_REF.key


def test_path_trivial_and_single_move():
    assert pants_graph_path(P_REF, P_REF) == []
    m = enumerate_elementary_moves(P_REF, a1, cap=2)[0]
    path = pants_graph_path(P_REF, apply_move(P_REF, m))
    assert len(path) == 1


def test_path_two_handles():
    # flipping the curve in each handle needs exactly two elementary moves
    target = PantsDecomposition((b1, b2, w))
    path = pants_graph_path(P_REF, target)
    assert len(path) == 2
    Q = P_REF
    for m in path:
        assert geometric_intersection(m.removed, m.added) in (1, 2)
        Q = apply_move(Q, m)
    assert Q.key == target.key


def test_path_to_theta_shape():
    path = pants_graph_path(P_REF, P_THETA)
    assert len(path) == 1
    assert path[0].case == "four-holed-sphere"


def test_path_cap_exhausted():
    with pytest.raises(CapExhausted):
        pants_graph_path(P_REF, PantsDecomposition((b1, b2, w)), depth_cap=1)


# ---------------------------------------------------------------------------
# Dehn twists


def test_twist_identity_and_disjoint():
    assert dehn_twist(a1, b1, 0) == b1
    assert dehn_twist(a1, a2, 5) == a2
    # i(a1, w) = 0 and the word image reduces back to w exactly
    assert dehn_twist(a1, w, 1).word == w.word


def test_twist_of_transversal():
    img = dehn_twist(a1, b1, 1)
    assert img.word == (2, -1)
    assert geometric_intersection(img, a1) == 1
    # geometric oracle: one full twist = Fenchel-Nielsen shift by the cut length
    fn = FNCoordinates.reference()
    shifted = FNCoordinates(fn.lengths, (fn.twists[0] + fn.lengths[0],) + fn.twists[1:])
    l_img = geodesic_length(build_from_fn(fn), img.word)
    l_ora = geodesic_length(build_from_fn(shifted), B1)
    assert abs(l_img - l_ora) < 1e-9


def test_twist_additivity_and_inverse():
    lhs = dehn_twist(a1, dehn_twist(a1, b1, 2), 3)
    assert lhs == dehn_twist(a1, b1, 5)
    assert dehn_twist(a1, dehn_twist(a1, b1, 4), -4) == b1
    assert dehn_twist(w, dehn_twist(w, CurveClass((1, 3)), 2), -2) == CurveClass((1, 3))


def test_twist_braid_relation():
    # T_a1 T_b1 T_a1 = T_b1 T_a1 T_b1 on the handle generators
    def lhs(word):
        return dehn_twist(a1, dehn_twist(b1, dehn_twist(a1, word, 1), 1), 1)

    def rhs(word):
        return dehn_twist(b1, dehn_twist(a1, dehn_twist(b1, word, 1), 1), 1)

    for word in (A1, B1):
        assert lhs(word) == rhs(word)


def test_waist_twist_matches_fn_shift():
    img = dehn_twist(w, CurveClass((1, 3)), 1)
    fn = FNCoordinates.reference()
    shifted = FNCoordinates(fn.lengths, fn.twists[:2] + (fn.twists[2] + fn.lengths[2],))
    l_img = geodesic_length(build_from_fn(fn), img.word)
    l_ora = geodesic_length(build_from_fn(shifted), (1, 3))
    assert abs(l_img - l_ora) < 1e-9


def test_twist_unsupported_curve():
    with pytest.raises(ValueError, match="twist basis"):
        dehn_twist(CurveClass((1, 3)), b1, 1)


def test_twist_multi():
    out = dehn_twist_multi((A1, A2), (B1, B2), 2)
    assert out == ((2, -1, -1), (4, -3, -3))
    with pytest.raises(ValueError, match="disjoint"):
        dehn_twist_multi((A1, B1), (A2,), 1)


def test_twist_limit_angles():
    rep = reference_rep()
    tl = TwistLimit(curves=(A1,), base=(B1,))
    # the limit lives in the a1 handle, disjoint from the waist
    r = lamination_angle(rep, [W_WORD], tl)
    assert r.converged and r.angle == 0.0
    # crossing angles with the twisting curve shrink toward zero
    r2 = lamination_angle(rep, [A1], tl)
    assert r2.converged and r2.angle < 0.01


# ---------------------------------------------------------------------------
# train tracks


def test_reference_track_valid():
    cert = validate_track(reference_track())
    assert cert.valid
    assert cert.max_valence == 3
    assert cert.vertical_pairing


def test_carrying_annular_cores():
    T = reference_track()
    c = traintrack_carries(T, [A1])
    assert c.carried
    assert {k: v for k, v in c.weights.items() if v} == {"u1": 1, "v1": 1}
    assert all(ls == rs for ls, rs in c.switch_balance)


def test_carrying_empty_multiloop():
    c = traintrack_carries(reference_track(), [])
    assert c.carried
    assert set(c.weights.values()) == {0}


def test_carrying_twist_family_linear():
    T = reference_track()
    rows = []
    for n in range(6):
        word = dehn_twist(a1, b1, n).word
        c = traintrack_carries(T, [word])
        assert c.carried
        assert all(ls == rs for ls, rs in c.switch_balance)
        rows.append((c.weights["u1"], c.weights["v1"], c.weights["t1"]))
    # weights linear in the twist power: u1 = n, v1 = n + 1, t1 = 1
    assert rows == [(n, n + 1, 1) for n in range(6)]


def test_carrying_weighted_multiloop():
    T = reference_track()
    word = dehn_twist(a1, b1, 2).word
    c = traintrack_carries(T, [(A1, 2), (word, 1)])
    assert c.carried
    assert c.weights["u1"] == 4 and c.weights["v1"] == 5 and c.weights["t1"] == 1


def test_carrying_failure_is_data():
    T = reference_track()
    for word in ((2, 1), (1, 3), W_WORD):
        c = traintrack_carries(T, [word])
        assert not c.carried
        assert c.reason
    c = traintrack_carries(T, [(A1, -1)])
    assert not c.carried


def test_invalid_track_rejected():
    bad = TrainTrack(
        ("x", "y"),
        (Switch(left=(("x", 0), ("x", 1)), right=(("y", 0), ("y", 1))),),
    )
    cert = validate_track(bad)
    assert not cert.valid
    assert any(v["kind"] == "valence" for v in cert.violations)
    carry = traintrack_carries(bad, [])
    assert not carry.carried and carry.reason == "invalid track"
