from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from su2splice.pillowcase import (PillowPoint, PillowSegment, _lift_hits, apply_gluing,
                                  canonicalize, contains, equivalent, intersect,
                                  intersect_params)
from su2splice.presentations import PLUS_ONE_GLUING

fracs = st.fractions(min_value=-6, max_value=6, max_denominator=40)


def test_canonical_examples():
    assert canonicalize(F(1, 14), F(-1, 14)) == PillowPoint(F(1, 14), F(27, 14))
    assert canonicalize(F(-1, 15), 1) == PillowPoint(F(1, 15), F(1))
    assert canonicalize(0, F(3, 2)) == PillowPoint(F(0), F(1, 2))
    assert canonicalize(1, 0).is_corner and not canonicalize(F(1, 2), 0).is_corner


def test_equivalence_examples():
    assert equivalent((0, 0), (2, 2))
    assert equivalent((F(1, 15), 0), (F(-1, 15), 0))
    assert not equivalent((F(1, 7), F(1, 3)), (F(1, 7), F(-1, 3)))


def test_gluing_slopes():
    def image_slope(s):
        return apply_gluing(PLUS_ONE_GLUING, PillowSegment.on_line(s, 0, 0, F(1, 2))).slope

    assert image_slope(0) == -1
    assert image_slope(14) == -15
    assert image_slope(28) == -29
    assert apply_gluing(PLUS_ONE_GLUING, canonicalize(0, 0)) == canonicalize(0, 0)


def test_arc_meets_glued_abelian_arc():
    arc = PillowSegment.on_line(-15, 1, F(1, 15), F(11, 15))
    glued = apply_gluing(PLUS_ONE_GLUING, PillowSegment.on_line(0, 0, 0, 1, (False, False)))
    pts = intersect(arc, glued)
    assert all(isinstance(p, PillowPoint) for p in pts)
    assert canonicalize(F(1, 14), F(-1, 14)) in pts
    # the whole pillowcase has more crossings than the picture near the origin
    assert sorted(p.x for p in pts) == [F(k, 14) for k in (1, 3, 5, 7, 9)]
    assert intersect(glued, arc) and len(intersect(glued, arc)) == len(pts)


def test_axes_meet_at_origin():
    a = PillowSegment((0, 0), (F(1, 2), 0))
    b = PillowSegment((0, 0), (0, F(1, 2)))
    assert intersect(a, b) == [canonicalize(0, 0)]


def test_collinear_overlap():
    arc = PillowSegment.on_line(-15, 1, F(1, 15), F(11, 15))
    half = apply_gluing(PLUS_ONE_GLUING, PillowSegment.on_line(14, 1, F(1, 14), F(13, 14)))
    (seg,) = intersect(arc, half)
    assert isinstance(seg, PillowSegment)
    assert (seg.start[0], seg.end[0]) == (F(1, 14), F(11, 15))
    assert seg.start_open and seg.end_open


def test_disjoint_ranges_are_empty():
    a = PillowSegment.on_line(0, F(1, 2), F(1, 10), F(2, 10))
    b = PillowSegment.on_line(0, F(1, 2), F(3, 10), F(4, 10))
    assert intersect(a, b) == []


def test_contains():
    arc = PillowSegment.on_line(-15, 1, F(1, 15), F(11, 15))
    assert contains(arc, canonicalize(F(1, 14), F(-1, 14)))
    assert not contains(arc, canonicalize(F(1, 15), 0))      # open end
    assert not contains(arc, canonicalize(F(1, 14), 0))


def test_segment_json_roundtrip():
    seg = PillowSegment.on_line(-29, 1, F(1, 14), F(2, 15), (True, False))
    assert PillowSegment.from_json(seg.to_json()) == seg
    p = canonicalize(F(3, 7), F(-5, 9))
    assert PillowPoint.from_json(p.to_json()) == p


@settings(max_examples=300)
@given(fracs, fracs, st.sampled_from([-1, 1]), st.integers(-4, 4), st.integers(-4, 4))
def test_canonical_form_is_a_class_invariant(x, y, sign, i, j):
    p = canonicalize(x, y)
    assert canonicalize(p.x, p.y) == p
    assert canonicalize(sign * x + 2 * i, sign * y + 2 * j) == p
    assert 0 <= p.x <= 1 and 0 <= p.y < 2
    if p.x in (0, 1):
        assert p.y <= 1


@settings(max_examples=80, deadline=None)
@given(fracs, fracs, fracs, fracs)
def test_intersection_points_lie_on_both(a, b, c, d):
    s1 = PillowSegment.on_line(-15, 1, F(1, 15), F(11, 15))
    s2 = PillowSegment((a, b), (c, d))
    for piece in intersect(s1, s2):
        if isinstance(piece, PillowPoint):
            assert contains(s1, piece) and contains(s2, piece)


def _brute(s1, s2, bound=50):
    pts, segs = set(), set()
    for sign in (1, -1):
        for i in range(-bound, bound + 1):
            for j in range(-bound, bound + 1):
                img = s2.transformed(sign, (F(2 * i), F(2 * j)))
                for h in _lift_hits(s1, img):
                    if h.is_point:
                        pts.add(s1.canonical_at(h.t[0]))
                    else:
                        segs.add(h.t)
    return pts, segs


@pytest.mark.parametrize("s1,s2", [
    (PillowSegment.on_line(-15, 1, F(1, 15), F(11, 15)), PillowSegment.on_line(-1, 0, 0, 1, (False, False))),
    (PillowSegment.on_line(-15, 1, F(1, 15), F(11, 15)), PillowSegment.on_line(-29, 0, F(1, 14), F(13, 14))),
    (PillowSegment.on_line(28, 0, F(1, 14), F(13, 14)), PillowSegment.on_line(-13, 1, F(1, 13), F(12, 13))),
    (PillowSegment.on_line(-15, 1, F(1, 15), F(11, 15)), PillowSegment.on_line(-15, 1, F(1, 14), F(13, 14))),
])
def test_translate_enumeration_matches_brute_force(s1, s2):
    pts, segs = _brute(s1, s2)
    hits = intersect_params(s1, s2)
    got_segs = {h.t for h in hits if not h.is_point}
    got_pts = {s1.canonical_at(h.t[0]) for h in hits if h.is_point}
    assert got_segs == segs
    inside = {p for p in pts if any(contains(s1.sub(*t, True, True), p) for t in segs)}
    assert got_pts == pts - inside - {s1.canonical_at(t) for ts in segs for t in ts}
