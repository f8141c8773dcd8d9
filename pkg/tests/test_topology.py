"""Ultrametric and convergence tests."""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qendo.endo import (
    Piece,
    PiecewiseEndo,
    affine_map,
    constant_map,
    identity_map,
)
from qendo.ratcore import RatInterval, nth_rational, rat_index
from qendo.topology import (
    N_MAX,
    ConvergenceReport,
    UltraMetricContext,
    automorphism_near,
    check_convergence,
    dist,
    subbasic_contains,
)

from util import monotone_endos

CTX = UltraMetricContext()

STEP_UP = PiecewiseEndo((
    Piece(RatInterval(None, F(0), False, False), F(1), F(0)),
    Piece(RatInterval(F(0), None, True, False), F(1), F(1)),
))  # x below zero, x+1 from zero on


def test_tuple_enumeration_is_bijective_prefix():
    ctx3 = UltraMetricContext(k=3)
    seen = {ctx3.tuple_at(n) for n in range(300)}
    assert len(seen) == 300
    assert CTX.tuple_at(0) == (F(0),)
    assert CTX.tuple_at(5) == (nth_rational(5),)


def test_dist_identical():
    r = dist(CTX, identity_map(), identity_map())
    assert r.value == 0 and r.exact and "equal" in r.verdict


def test_dist_constants():
    r = dist(CTX, constant_map(F(0)), constant_map(F(1)))
    assert r.value == F(1)  # differ at e(0) = 0
    assert r.index == 0


def test_dist_shift():
    r = dist(CTX, identity_map(), affine_map(F(1), F(1)))
    assert r.value == F(1) and r.index == 0


def test_dist_symbolic_matches_probe_scan():
    # two maps differing exactly on the ray from 2 upward
    f = identity_map()
    g = PiecewiseEndo((
        Piece(RatInterval(None, F(2), False, False), F(1), F(0)),
        Piece(RatInterval(F(2), None, True, False), F(1), F(1)),
    ))
    r = dist(CTX, f, g)
    assert r.index == rat_index(F(2)) == 5
    assert r.value == F(1, 2 ** 5)
    # probe scan on the same pair (forced through the lazy path)
    class Opaque:
        def __init__(self, h):
            self.eval = h.eval
    r2 = dist(CTX, Opaque(f), Opaque(g))
    assert (r2.value, r2.index) == (r.value, r.index)


def test_dist_indistinguishable_reported():
    class Opaque:
        def __init__(self, h):
            self.eval = h.eval
    shallow = UltraMetricContext(depth=32)
    r = dist(shallow, Opaque(identity_map()), Opaque(identity_map()))
    assert r.value == 0 and not r.exact
    assert "indistinguishable at depth 32" in r.verdict


def test_dist_arity_mismatch():
    from qendo.clone import projection
    with pytest.raises(ValueError, match="arity mismatch"):
        dist(CTX, projection(2, 1), projection(2, 1))


def test_subbasic_examples():
    assert subbasic_contains(F(0), F(1), STEP_UP)
    assert subbasic_contains(F(7), F(7), identity_map())
    assert not subbasic_contains(F(0), F(0), constant_map(F(1)))


@settings(max_examples=60, deadline=None)
@given(monotone_endos(), monotone_endos(), monotone_endos())
def test_ultrametric_inequality(f, g, h):
    dfh = dist(CTX, f, h).value
    assert dfh <= max(dist(CTX, f, g).value, dist(CTX, g, h).value)


@settings(max_examples=40, deadline=None)
@given(monotone_endos(), monotone_endos())
def test_dist_symmetric_and_separating(f, g):
    r, s = dist(CTX, f, g), dist(CTX, g, f)
    assert r.value == s.value
    if r.value == 0:
        assert f.canonical() == g.canonical()
    else:
        x = r.probe[0]
        assert f.eval(x) != g.eval(x)
        for n in range(r.index):
            y = nth_rational(n)
            assert f.eval(y) == g.eval(y)


def test_convergence_constant_sequence():
    rep = check_convergence(lambda n: identity_map(), identity_map(), 5)
    assert all(v == 0 for v in rep.values)
    assert rep.eventually_below(10)


def test_convergence_of_agreeing_prefixes():
    # maps agreeing with the identity on e(0..n-1) but not beyond
    def approx(n):
        pts = sorted(nth_rational(i) for i in range(n))
        pieces, prev = [], None
        for p in pts:
            pieces.append(Piece(RatInterval(prev, p, False, True), F(0), p))
            prev = p
        pieces.append(Piece(RatInterval(prev, None, False, False),
                            F(0), prev + 1 if prev is not None else F(1)))
        return PiecewiseEndo(tuple(pieces))

    rep = check_convergence(approx, identity_map(), 8)
    for n, r in rep.rows:
        if n >= 1:
            assert r.value <= F(1, 2 ** n)
    values = rep.values
    assert all(a >= b for a, b in zip(values[1:], values[2:]))
    assert rep.eventually_below(3)
    assert not rep.eventually_below(40)


def test_convergence_failure_reported():
    rep = check_convergence(lambda n: constant_map(F(n)), constant_map(F(0)), 6)
    assert all(v == F(1) for n, v in zip(range(1, 7), rep.values[1:]))
    assert not rep.eventually_below(0)
    assert "no convergence threshold reached" in str(rep)


def test_report_renders_table():
    rep = check_convergence(lambda n: identity_map(), identity_map(), 2)
    text = str(rep)
    assert "distance" in text and "equal (symbolic)" in text


def test_automorphism_near_generic_embedding():
    from qendo.generic import generic_embedding
    g, _ = generic_embedding("core")
    for depth in (1, 3, 6):
        a = automorphism_near(g, depth)
        for i in range(depth):
            assert a.eval(nth_rational(i)) == g.eval(nth_rational(i))
        # bijectivity probe: inverse exists for sampled values
        r = dist(UltraMetricContext(depth=64), a, g)
        assert r.value <= F(1, 2 ** depth)


def test_automorphism_near_piecewise():
    f = affine_map(F(2), F(-1))
    a = automorphism_near(f, 5)
    assert all(a.eval(nth_rational(i)) == f.eval(nth_rational(i))
               for i in range(5))
