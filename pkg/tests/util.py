"""Shared hypothesis strategies for the test suite."""

from fractions import Fraction as F

from hypothesis import strategies as st

from qendo.endo import Piece, PiecewiseEndo
from qendo.ratcore import RatInterval


@st.composite
def monotone_endos(draw):
    # build a weakly monotone map left to right: each piece starts at or
    # above where the previous one ended
    ncuts = draw(st.integers(0, 4))
    cuts = sorted(draw(st.lists(
        st.fractions(min_value=-8, max_value=8, max_denominator=6),
        min_size=ncuts, max_size=ncuts, unique=True)))
    slopes = draw(st.lists(st.sampled_from([F(0), F(1, 2), F(1), F(2)]),
                           min_size=ncuts + 1, max_size=ncuts + 1))
    jumps = draw(st.lists(st.fractions(min_value=0, max_value=3,
                                       max_denominator=4),
                          min_size=ncuts, max_size=ncuts))
    sides = draw(st.lists(st.booleans(), min_size=ncuts, max_size=ncuts))
    pieces = []
    level = draw(st.fractions(min_value=-5, max_value=5, max_denominator=4))
    lo = None
    lo_closed = False
    for i, s in enumerate(slopes):
        hi = cuts[i] if i < len(cuts) else None
        anchor = lo if lo is not None else (hi - 1 if hi is not None else F(0))
        intercept = level - s * anchor
        pieces.append(Piece(RatInterval(lo, hi, lo_closed, i < len(cuts) and sides[i]),
                            s, intercept))
        if hi is not None:
            level = s * hi + intercept + jumps[i]
            lo, lo_closed = hi, not sides[i]
    return PiecewiseEndo(tuple(pieces))
