import cmath
import math
import random

import pytest

from glab.mobius import (
    OO,
    Classification,
    MobiusMap,
    apply_to_h3,
    chordal,
    classify,
    complex_length,
    fixed_points,
    translation_length,
)


def random_sl2c(rng, scale=2.0):
    while True:
        a, b, c, d = (complex(rng.uniform(-scale, scale), rng.uniform(-scale, scale)) for _ in range(4))
        if abs(a * d - b * c) > 1e-3:
            return MobiusMap.from_entries(a, b, c, d)


def test_normalization_det_one():
    m = MobiusMap.from_entries(2.0, 1.0, 0.0, 3.0)
    assert abs(m.det() - 1.0) < 1e-12


def test_sign_normalization_makes_equal_maps_equal():
    m1 = MobiusMap.from_entries(1.0, 2.0, 0.0, 1.0)
    m2 = MobiusMap.from_entries(-1.0, -2.0, 0.0, -1.0)
    assert m1.frobenius_distance(m2) < 1e-12
    assert abs(m1.a - m2.a) < 1e-12


def test_degenerate_matrix_rejected():
    with pytest.raises(ValueError):
        MobiusMap.from_entries(1.0, 2.0, 2.0, 4.0)


def test_compose_and_inverse():
    rng = random.Random(7)
    for _ in range(50):
        m = random_sl2c(rng)
        g = random_sl2c(rng)
        z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        assert abs((m @ g)(z) - m(g(z))) < 1e-8
        assert (m @ m.inverse()).is_identity(1e-10)


def test_apply_at_infinity():
    m = MobiusMap.from_entries(2.0, 1.0, 1.0, 1.0)
    assert abs(m(OO) - 2.0) < 1e-12
    mt = MobiusMap.from_entries(1.0, 5.0, 0.0, 1.0)
    assert mt(OO) is OO
    # pole goes to infinity
    assert m(-1.0) is OO


# classification: parabolic representative z -> z + 1 has tr^2 = 4
def test_classify_parabolic():
    m = MobiusMap.from_entries(1.0, 1.0, 0.0, 1.0)
    c = classify(m)
    assert c.kind == "parabolic"
    assert abs(c.trace_sq - 4.0) < 1e-12


def test_classify_identity():
    c = classify(MobiusMap.identity())
    assert c.kind == "identity"


def test_classify_elliptic_rotation():
    # rotation by angle 2*theta about i: trace = 2 cos(theta)
    theta = 0.7
    m = MobiusMap.from_entries(math.cos(theta), math.sin(theta), -math.sin(theta), math.cos(theta))
    c = classify(m)
    assert c.kind == "elliptic"
    assert 0.0 <= c.trace_sq.real <= 4.0


def test_classify_loxodromic_with_complex_tracesq():
    m = MobiusMap.diagonal(cmath.exp(0.3 + 0.4j))
    assert classify(m).kind == "loxodromic"


def test_classification_conjugation_invariant():
    rng = random.Random(11)
    for _ in range(200):
        m = random_sl2c(rng)
        g = random_sl2c(rng)
        k1 = classify(m).kind
        k2 = classify(m.conjugate_by(g)).kind
        if k1 in ("identity",):
            assert k2 == "identity"
        elif not classify(m).borderline and not classify(m.conjugate_by(g)).borderline:
            assert k1 == k2


def test_borderline_flagged():
    m = MobiusMap.from_entries(1.0 + 5e-10, 1.0, 0.0, 1.0 / (1.0 + 5e-10))
    c = classify(m)
    assert c.borderline


def test_fixed_points_triangular_exact():
    m = MobiusMap.from_entries(2.0, 1.0, 0.0, 0.5)
    fps = fixed_points(m)
    assert fps[0] is OO  # attracting (|a/d| = 4 > 1 pushes toward oo)
    assert abs(fps[1] - (1.0 / (0.5 - 2.0))) < 1e-12


def test_fixed_points_attracting_first():
    rng = random.Random(3)
    checked = 0
    for _ in range(300):
        m = random_sl2c(rng)
        cls = classify(m)
        if cls.kind != "loxodromic":
            continue
        if complex_length(m).real < 0.2:
            continue  # multiplier near 1: iteration converges too slowly to test
        att, rep = fixed_points(m)
        # iterate a generic point; it should approach att in chordal metric
        z = 0.123 + 0.456j
        for _ in range(300):
            z = m(z)
        assert chordal(z, att) < 1e-4
        checked += 1
    assert checked > 50


def test_fixed_points_parabolic_single():
    m = MobiusMap.from_entries(1.0, 0.0, 1.0, 1.0)
    fps = fixed_points(m)
    assert len(fps) == 1
    assert abs(fps[0] - 0.0) < 1e-12


def test_fixed_points_identity_raises():
    with pytest.raises(ValueError):
        fixed_points(MobiusMap.identity())


# translation length of diag(sqrt2, 1/sqrt2) is ln 2: multiplier is 2, and
# 2 arccosh(tr/2) = 2 arccosh(1.5/sqrt2) = ln 2.  The companion trace-route
# check for diag(2, 1/2): 2 arccosh(1.25) = 2 ln 2.
def test_translation_length_diagonal():
    m = MobiusMap.diagonal(math.sqrt(2.0))
    assert abs(translation_length(m) - math.log(2.0)) < 1e-12
    m2 = MobiusMap.diagonal(2.0)
    assert abs(translation_length(m2) - 2.0 * math.log(2.0)) < 1e-12
    assert abs(2.0 * math.acosh(abs(m2.trace()) / 2.0) - 2.0 * math.log(2.0)) < 1e-12


def test_complex_length_rotation_part():
    # diag(sqrt2 e^{i pi/8}, .): rotation part pi/4, read off eigenvalue argument
    lam = math.sqrt(2.0) * cmath.exp(1j * math.pi / 8)
    m = MobiusMap.diagonal(lam)
    ell = complex_length(m)
    assert abs(ell.real - math.log(2.0)) < 1e-12
    assert abs(ell.imag - math.pi / 4) < 1e-12
    assert -math.pi < ell.imag <= math.pi
    # defining identity 2 cosh(L/2) = tr, up to the SL2 sign
    t = 2.0 * cmath.cosh(ell / 2.0)
    assert min(abs(t - m.trace()), abs(t + m.trace())) < 1e-10


def test_complex_length_conjugation_invariant():
    rng = random.Random(19)
    for _ in range(100):
        m = random_sl2c(rng)
        if classify(m).kind != "loxodromic" or classify(m).borderline:
            continue
        g = random_sl2c(rng)
        l1 = complex_length(m)
        l2 = complex_length(m.conjugate_by(g))
        assert abs(l1.real - l2.real) < 1e-8
        # Im is canonical mod 2 pi
        dim = abs(l1.imag - l2.imag)
        assert min(dim, abs(dim - 2 * math.pi)) < 1e-8


def test_complex_length_requires_loxodromic():
    with pytest.raises(ValueError):
        complex_length(MobiusMap.from_entries(1.0, 1.0, 0.0, 1.0))


def test_axis_endpoints_are_fixed_points():
    rng = random.Random(5)
    for _ in range(50):
        m = random_sl2c(rng)
        if classify(m).kind != "loxodromic":
            continue
        att, rep = fixed_points(m)
        for p in (att, rep):
            assert chordal(m(p), p) < 1e-7


def test_poincare_extension_vertical_translation():
    # diag(e^{1/2}, e^{-1/2}) translates (0,0,1) to (0,0,e)
    m = MobiusMap.diagonal(math.exp(0.5))
    x, y, t = apply_to_h3(m, 0.0, 0.0, 1.0)
    assert abs(x) < 1e-12 and abs(y) < 1e-12
    assert abs(t - math.e) < 1e-12


def test_poincare_extension_is_isometry():
    from glab.hyperbolic import H3Point, dist_h3

    rng = random.Random(23)
    for _ in range(50):
        m = random_sl2c(rng)
        p = H3Point(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(0.2, 3.0))
        q = H3Point(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(0.2, 3.0))
        mp = H3Point(*apply_to_h3(m, p.x, p.y, p.t))
        mq = H3Point(*apply_to_h3(m, q.x, q.y, q.t))
        assert abs(dist_h3(p, q) - dist_h3(mp, mq)) < 1e-8


def test_chordal_metric():
    assert abs(chordal(0.0, OO) - 2.0) < 1e-12
    assert chordal(OO, OO) == 0.0
    assert abs(chordal(1.0, 1.0)) < 1e-15
