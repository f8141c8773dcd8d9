"""Forest-action tests."""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qendo.actions import (
    ActionReport,
    ForestError,
    LabelledForest,
    OrbitPoint,
    act,
    containment_check,
    fixpoint_check,
    verify_action,
)
from qendo.endo import (
    ComposedEndo,
    Piece,
    PiecewiseEndo,
    affine_map,
    compose,
    constant_map,
    idempotent_with_image,
    identity_map,
)
from qendo.ratcore import RatInterval

from util import monotone_endos

CHAIN = LabelledForest.from_rows(
    [("root", None, 0), ("mid", "root", 1), ("top", "mid", 2)])

BRANCHED = LabelledForest.from_rows(
    [("r", None, 0), ("a", "r", 1), ("b", "r", 2)])

SKIPPY = LabelledForest.from_rows(
    [("r", None, 0), ("m", "r", 2), ("t", "m", 4)])

TOP_01 = OrbitPoint("top", (F(0), F(1)))


def staircase(*cut_values):
    """Weakly monotone map collapsing onto the given values via cuts."""
    return idempotent_with_image([F(v) for v in cut_values])


# -- forest validation --------------------------------------------------------

def test_forest_rejects_duplicate_node():
    with pytest.raises(ForestError, match="twice"):
        LabelledForest.from_rows([("a", None, 0), ("a", None, 0)])


def test_forest_rejects_unknown_parent():
    with pytest.raises(ForestError, match="not a node"):
        LabelledForest.from_rows([("a", "ghost", 0)])


def test_forest_rejects_cycle():
    with pytest.raises(ForestError, match="cycle"):
        LabelledForest.from_rows([("a", "b", 1), ("b", "a", 2)])


def test_forest_rejects_nonincreasing_labels():
    with pytest.raises(ForestError, match="exceed"):
        LabelledForest.from_rows([("r", None, 0), ("c", "r", 0)])


def test_forest_rejects_root_without_label_zero():
    with pytest.raises(ForestError, match="label 0"):
        LabelledForest.from_rows([("r", None, 1)])


def test_forest_rejects_negative_label():
    with pytest.raises(ForestError, match="natural"):
        LabelledForest.from_rows([("r", None, -1)])


def test_forest_text_roundtrip():
    text = "root - 0\nmid root 1\ntop mid 2"
    forest = LabelledForest.parse(text)
    assert str(forest) == text
    assert forest.roots() == ("root",)
    assert forest.ancestry("top") == ["top", "mid", "root"]


def test_forest_parse_errors_name_line():
    with pytest.raises(ForestError, match="line 2"):
        LabelledForest.parse("r - 0\nbad line")


def test_cascade_safety_predicate():
    assert CHAIN.is_cascade_safe()
    assert BRANCHED.is_cascade_safe()
    assert not SKIPPY.is_cascade_safe()


# -- acting --------------------------------------------------------------------

def test_act_identity_fixes_point():
    assert act(CHAIN, identity_map(), TOP_01) == TOP_01


def test_act_constant_descends_to_rank_one():
    q = act(CHAIN, constant_map(F(5)), TOP_01)
    assert q == OrbitPoint("mid", (F(5),))


def test_act_injective_stays_at_node():
    q = act(CHAIN, affine_map(F(1), F(1)), TOP_01)
    assert q == OrbitPoint("top", (F(1), F(2)))


def test_act_rejects_invalid_point():
    with pytest.raises(ForestError, match="needs 2 elements"):
        act(CHAIN, identity_map(), OrbitPoint("top", (F(0),)))
    with pytest.raises(ForestError, match="unknown node"):
        act(CHAIN, identity_map(), OrbitPoint("nowhere", ()))


def test_orbit_point_canonicalizes():
    p = OrbitPoint("top", (F(1), F(0), F(1)))
    assert p.B == (F(0), F(1))
    assert str(p) == "(top; {0, 1})"


@settings(max_examples=60, deadline=None)
@given(monotone_endos(),
       st.sets(st.fractions(min_value=-8, max_value=8, max_denominator=6),
               min_size=2, max_size=2))
def test_same_size_image_stays_at_node(f, bset):
    p = OrbitPoint("top", tuple(bset))
    imgs = {f.eval(b) for b in p.B}
    q = act(CHAIN, f, p)
    if len(imgs) == len(p.B):
        assert q.node == "top" and set(q.B) == imgs
    assert q.node in CHAIN.ancestry("top")
    assert containment_check(CHAIN, f, p)


@settings(max_examples=40, deadline=None)
@given(monotone_endos(),
       st.sets(st.fractions(min_value=-3, max_value=3, max_denominator=4),
               min_size=2, max_size=2))
def test_maps_agreeing_on_b_act_equally(f, bset):
    p = OrbitPoint("top", tuple(bset))
    pinned = compose(f, idempotent_with_image(p.B))
    for b in p.B:
        assert pinned.eval(b) == f.eval(b)
    assert act(CHAIN, pinned, p) == act(CHAIN, f, p)


def test_containment_examples():
    assert containment_check(CHAIN, constant_map(F(5)), TOP_01)
    trio = LabelledForest.from_rows(
        [("r", None, 0), ("m", "r", 2), ("t", "m", 3)])
    p = OrbitPoint("t", (F(0), F(1), F(2)))
    collapse = staircase(0, 1)  # sends 2 onto 1
    q = act(trio, collapse, p)
    assert q == OrbitPoint("m", (F(0), F(1)))
    assert containment_check(trio, collapse, p)


# -- the action laws -----------------------------------------------------------

SMALL_CORPUS = [
    identity_map(),
    constant_map(F(5)),
    affine_map(F(1), F(1)),
    affine_map(F(2), F(-3)),
    staircase(0, 1),
    staircase(-2, 0, 2),
]

POINTS = [
    OrbitPoint("root", ()),
    OrbitPoint("mid", (F(7),)),
    TOP_01,
    OrbitPoint("top", (F(-1), F(1, 2))),
]


def test_verify_action_on_safe_chain():
    report = verify_action(CHAIN, SMALL_CORPUS, POINTS)
    assert report.ok
    assert report.checks == len(POINTS) + len(SMALL_CORPUS) ** 2 * len(POINTS)
    assert "all hold" in str(report)


def test_verify_action_on_branching_forest():
    points = [OrbitPoint("r", ()), OrbitPoint("a", (F(3),)),
              OrbitPoint("b", (F(0), F(4)))]
    assert verify_action(BRANCHED, SMALL_CORPUS, points).ok


def test_composition_fails_on_rank_skipping_forest():
    # rank-4 point; g collapses four points to three, f then merges the
    # bottom two.  Stepwise the intermediate truncation to rank 2 loses the
    # third point, so the two routes land on different nodes.
    p = OrbitPoint("t", (F(0), F(1), F(2), F(3)))
    g = staircase(0, 1, 2)      # {0,1,2,3} -> {0,1,2}
    f = PiecewiseEndo((
        Piece(RatInterval(None, F(1), False, True), F(0), F(0)),
        Piece(RatInterval(F(1), None, False, False), F(1), F(0)),
    ))                          # {0,1,2} -> {0,2}, {0,1} -> {0}
    stepwise = act(SKIPPY, f, act(SKIPPY, g, p))
    composite = act(SKIPPY, ComposedEndo((f, g)), p)
    assert act(SKIPPY, g, p) == OrbitPoint("m", (F(0), F(1)))
    assert stepwise == OrbitPoint("r", ())
    assert composite == OrbitPoint("m", (F(0), F(2)))
    report = verify_action(SKIPPY, [f, g], [p])
    assert not report.ok
    assert any("composition law" in msg for msg in report.failures)


# -- fixpoints ------------------------------------------------------------------

def test_fixpoint_for_rank_two_point():
    h = fixpoint_check(CHAIN, TOP_01)
    assert act(CHAIN, h, TOP_01) == TOP_01
    assert compose(h, h).canonical() == h.canonical()
    assert classify_image_is(h, (F(0), F(1)))


def classify_image_is(h, points):
    from qendo.endo import classify
    image = classify(h).image
    return all(iv.is_degenerate() for iv in image) and \
        tuple(iv.lo for iv in image) == points


def test_fixpoint_for_rank_one_point():
    p = OrbitPoint("mid", (F(7),))
    h = fixpoint_check(CHAIN, p)
    assert h.eval(F(123)) == F(7)
    assert act(CHAIN, h, p) == p


def test_fixpoint_for_rank_zero_point():
    p = OrbitPoint("root", ())
    h = fixpoint_check(CHAIN, p)
    assert act(CHAIN, h, p) == p
    assert classify_image_is(h, (F(0),))
