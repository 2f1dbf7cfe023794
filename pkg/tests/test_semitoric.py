from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from gcapacity.delzant import EpsilonTooLarge
from gcapacity.geometry import polytope_from_halfspaces, polytope_from_vertices, volume
from gcapacity.semitoric import (
    BadCuts, CornerViolation, CutLine, NotFiniteHeight, SemitoricError, SemitoricHeights,
    Shear, canonical_orbit, corner_kind_of, group_action, multi_cut_transform, region_area,
    smooth_angles_near, st_corner_chop, st_hidden_corner_chop, validate_primitive,
)
from oracles import smooth_angles

TRIANGLE = [(0, 0), (2, 0), (1, 1)]


def triangle():
    return validate_primitive(polytope_from_vertices(TRIANGLE), [CutLine(F(1))])


def pentagon():
    return validate_primitive(polytope_from_vertices([(0, 0), (3, 0), (3, 1), (2, 2), (0, 2)]),
                              [CutLine(F(2))])


def test_corner_kinds():
    assert [triangle().kind(v) for v in triangle().vertices] == ["delzant", "delzant", "hidden"]
    p = pentagon()
    assert p.kind((2, 2)) == "fake" and len(p.non_fake) == 4


def test_corner_kind_rule():
    assert corner_kind_of((1, 0), (0, 1), False) == "delzant"
    assert corner_kind_of((1, 0), (0, 2), False) == "nonsmooth"


def test_cut_must_hit_a_top_vertex():
    sq = polytope_from_vertices([(0, 0), (2, 0), (2, 2), (0, 2)])
    with pytest.raises(CornerViolation):
        validate_primitive(sq, [CutLine(F(1))])


def test_cut_order_and_sign():
    with pytest.raises(SemitoricError):
        validate_primitive(polytope_from_vertices(TRIANGLE), [CutLine(F(1), -1)])
    with pytest.raises(BadCuts):
        multi_cut_transform((0, 0), (F(1), F(1)), polytope_from_vertices(TRIANGLE))


def test_quadrant_has_no_finite_height():
    quad = polytope_from_halfspaces([((1, 0), 0), ((0, 1), 0)], 2)
    with pytest.raises(NotFiniteHeight):
        validate_primitive(quad, [])


def test_wedge_is_primitive():
    wedge = polytope_from_halfspaces([((0, 1), 0), ((1, -1), 0)], 2)
    assert validate_primitive(wedge, []).vertices == ((0, 0),)


def test_heights_range():
    p = triangle()
    assert SemitoricHeights.make(p, [F(1, 2)]).focus(p, 0) == (1, F(1, 2))
    for bad in (0, 1, 2):
        with pytest.raises(SemitoricError):
            SemitoricHeights.make(p, [bad])


def test_shear_algebra():
    s = Shear(1, ((F(1), 1), (F(3), -1)))
    assert s.inverse().compose(s)((F(5), F(7))) == (5, 7)
    assert s.f(4) == 4 + 3 - 1
    assert s.slope_left(1) == 1 and s.slope_right(1) == 2


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=3, max_size=7, unique=True),
       st.tuples(st.integers(0, 1), st.integers(0, 1)), st.integers(-2, 2))
def test_transform_preserves_area(pts, u, k):
    p = polytope_from_vertices(pts)
    if not p.full_dimensional:
        return
    pieces = multi_cut_transform(u, (F(-1), F(1, 2)), p, k)
    assert region_area(pieces) == volume(p)


signs = st.sampled_from([1, -1])


@settings(max_examples=25, deadline=None)
@given(signs, st.integers(-5, 5), signs, st.integers(-5, 5))
def test_canonical_is_left_inverse_of_action(e1, k1, e2, k2):
    p = triangle()
    m = group_action((e1,), k1, p)
    assert canonical_orbit(m).representative == p
    assert canonical_orbit(group_action((e2,), k2, m)).representative == p
    assert m.area() == 1


def test_no_cut_orbit_is_the_polygon():
    sq = validate_primitive(polytope_from_vertices([(0, 0), (2, 0), (2, 2), (0, 2)]))
    assert canonical_orbit(sq).representative == sq


def test_hidden_chop_shape():
    c = st_hidden_corner_chop(triangle(), (1, 1), F(1, 2))
    assert set(c.vertices) == {(0, 0), (2, 0), (F(3, 2), F(1, 2)), (1, F(3, 4)), (F(1, 2), F(1, 2))}
    assert c.kind((1, F(3, 4))) == "fake" and len(c.non_fake) == 4
    assert volume(c.polygon) == F(7, 8)


def test_corner_chop_area_and_limits():
    p = triangle()
    assert volume(st_corner_chop(p, (0, 0), F(1, 4)).polygon) == 1 - F(1, 32)
    with pytest.raises(EpsilonTooLarge):
        st_corner_chop(p, (0, 0), 1)
    with pytest.raises(SemitoricError):
        st_corner_chop(p, (1, 1), F(1, 4))


def test_angles_small_bounds():
    assert [str(a) for a in smooth_angles_near(1)] == ["pi/2"]
    assert [str(a) for a in smooth_angles_near(2)] == ["pi/4", "pi/2", "3*pi/4"]


@pytest.mark.parametrize("bound", [1, 2, 3, 4])
def test_angles_match_enumeration(bound):
    ours = smooth_angles_near(bound)
    assert len(ours) == len(smooth_angles(bound))
    for a in ours:
        assert a.sin2 + a.cos2 == 1


def test_angle_counts_nondecreasing():
    counts = [len(smooth_angles_near(b)) for b in range(1, 7)]
    assert counts == sorted(counts)
