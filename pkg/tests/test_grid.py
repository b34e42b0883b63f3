from __future__ import annotations

from math import comb, prod

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mcclrc.grid import (
    DeltaSet,
    GridError,
    GridSpec,
    K_j,
    axis_mul,
    box,
    closure,
    cyclotomic_orbit,
    d0,
    d0_argmin,
    decreasing_sets_2d,
    default_J,
    exponent_distance,
    is_closed,
    is_decreasing,
    kmax_j,
    omega_3pt,
    omega_a,
    omega_perp,
    omega_star_b,
    omega_star_z,
    orbits,
    supp_axis,
    translate,
)


def test_grid_basics():
    g = GridSpec((4, 3), frozenset({2}))
    assert g.m == 2 and g.n == 12
    assert len(list(g.exponents())) == 12
    assert g.contains((3, 2)) and not g.contains((4, 0))
    with pytest.raises(GridError):
        GridSpec((1, 3))
    with pytest.raises(GridError):
        GridSpec((3, 3), frozenset({3}))
    with pytest.raises(GridError):
        g.check((0, 3))


def test_default_J_and_field_check():
    assert default_J((2, 2), 5) == frozenset({1, 2})
    assert default_J((5, 3), 5) == frozenset()
    assert default_J((4, 3), 7) == frozenset({2})
    with pytest.raises(GridError):
        default_J((4,), 8)  # 4 does not divide 7 and 3 does not either
    with pytest.raises(GridError):
        GridSpec((3,), frozenset({1})).check_field(5)


def test_footprint_statistics():
    g = GridSpec((4, 3), frozenset({2}))
    D = DeltaSet(g, [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0)])
    assert exponent_distance(g, (1, 1)) == 6
    assert d0(D) == 6 and d0_argmin(D) == (1, 1)
    assert is_decreasing(D)
    assert K_j(D, 1) == 3 and kmax_j(D, 1) == 2 and supp_axis(D, 2) == {0, 1}
    assert not is_decreasing(DeltaSet(g, [(1, 1)]))


@pytest.mark.parametrize("n1,n2", [(2, 2), (2, 3), (3, 3), (4, 2), (5, 5)])
def test_decreasing_sets_count_is_lattice_paths(n1, n2):
    sets = list(decreasing_sets_2d(n1, n2))
    # staircases in an n1 x n2 box are lattice paths; drop the empty one
    assert len(sets) == comb(n1 + n2, n1) - 1
    assert len(set(sets)) == len(sets)
    g = GridSpec((n1, n2))
    assert all(is_decreasing(DeltaSet(g, s)) for s in sets)


def test_single_axis_blocks_frozen():
    assert sorted(omega_a(5, 1)) == [0, 1, 5]
    assert sorted(omega_a(9, 3)) == [0, 1, 2, 3, 7, 8, 9]
    assert sorted(omega_star_b(8, 1)) == [3, 4, 5, 6]
    assert sorted(omega_star_z(3, 3)) == [3, 4, 5, 6]
    assert sorted(omega_perp(3)) == [0, 2, 3, 4, 5, 6, 7]
    assert sorted(omega_3pt(2)) == [0, 1, 4]
    with pytest.raises(GridError):
        omega_a(5, 2)
    with pytest.raises(GridError):
        omega_star_b(9, 0)


@pytest.mark.parametrize("ph,in_J", [(4, True), (5, True), (8, False), (9, True), (4, False)])
def test_single_axis_blocks_are_closed(ph, in_J):
    n = ph + 1 if in_J else ph + 2
    g = GridSpec((n,), frozenset({1}) if in_J else frozenset(), ph)
    blocks = [omega_a(ph, a) for a in range(ph // 2)] if in_J else []
    if ph % 2 == 0 and in_J:
        blocks += [omega_star_b(ph, b) for b in range(ph // 2 - 1)]
    if not in_J:
        h = ph.bit_length() - 1
        blocks += [omega_3pt(h), omega_perp(h)]
    for S in blocks:
        assert is_closed(DeltaSet(g, [(e,) for e in S])), sorted(S)


def test_orbits_and_closure_frozen():
    assert [sorted(o) for o in orbits(GridSpec((5,), frozenset({1}), 4))] == [[(0,)], [(1,), (4,)], [(2,), (3,)]]
    g = GridSpec((17,), frozenset({1}), 4)
    assert sorted(closure(DeltaSet(g, [(1,)])).members) == [(1,), (4,), (13,), (16,)]
    # an axis outside J: the nonzero exponents live mod n-1 with representatives 1..n-1
    g2 = GridSpec((5,), frozenset(), 2)
    assert sorted(closure(DeltaSet(g2, [(1,)])).members) == [(1,), (2,), (4,)]
    assert axis_mul(g2, 1, 3, 2) == 2 and axis_mul(g2, 1, 0, 2) == 0
    assert sorted(cyclotomic_orbit(GridSpec((5, 5), frozenset({1, 2}), 2), (1, 2))) == [(1, 2), (2, 4), (3, 1), (4, 3)]


grids = st.sampled_from([
    GridSpec((5, 5), frozenset({1, 2}), 2),
    GridSpec((8, 5), frozenset({1}), 3),
    GridSpec((5, 4), frozenset({1}), 4),
    GridSpec((17,), frozenset({1}), 4),
])


@given(grids, st.data())
def test_orbits_partition_and_closure_is_smallest_closed_superset(g, data):
    orbs = orbits(g)
    seen = set()
    for o in orbs:
        assert not (seen & o)
        seen |= o
    assert seen == set(g.exponents())
    pts = data.draw(st.lists(st.sampled_from(sorted(g.exponents())), min_size=1, max_size=4))
    C = closure(DeltaSet(g, pts))
    assert is_closed(C)
    assert set(pts) <= set(C.members)
    assert set(C.members) == set().union(*(cyclotomic_orbit(g, e) for e in pts))


@given(st.integers(2, 6), st.integers(2, 6), st.data())
def test_box_and_translate(n1, n2, data):
    g = GridSpec((n1, n2))
    u = (data.draw(st.integers(0, n1 - 1)), data.draw(st.integers(0, n2 - 1)))
    B = box(g, u)
    assert len(B) == (u[0] + 1) * (u[1] + 1) and is_decreasing(B)
    assert d0(B) == (n1 - u[0]) * (n2 - u[1])
    v = (n1 - 1 - u[0], n2 - 1 - u[1])
    T = translate(B, v)
    assert len(T) == len(B)
    assert min(T.members) == v
    if any(v):
        with pytest.raises(GridError):
            translate(T, (1, 1) if all(v) else v)


@given(st.integers(2, 5), st.integers(2, 5), st.data())
def test_d0_is_minimum_of_products(n1, n2, data):
    sets = list(decreasing_sets_2d(n1, n2))
    S = data.draw(st.sampled_from(sets))
    D = DeltaSet(GridSpec((n1, n2)), S)
    assert d0(D) == min(prod(n - e for n, e in zip((n1, n2), x)) for x in S)


def test_exponent_distance_examples():
    g = GridSpec((10, 9))
    assert exponent_distance(g, (0, 0)) == 90
    assert exponent_distance(g, (2, 8)) == 8
    assert exponent_distance(GridSpec((4, 4, 4)), (3, 3, 3)) == 1


def test_decreasing_examples():
    g = GridSpec((10, 9))
    # a 5 x 8 block plus (0, 8) and (1, 8); the minimum sits at (1, 8)
    D = DeltaSet(g, [(a, b) for a in range(5) for b in range(8)] + [(0, 8), (1, 8)])
    assert is_decreasing(D) and d0(D) == 9
    assert not is_decreasing(DeltaSet(g, [(1, 0)]))


def test_support_examples():
    g = GridSpec((10, 9))
    D = DeltaSet(g, [(a, b) for a in range(3) for b in range(9)])
    assert supp_axis(D, 1) == {0, 1, 2} and K_j(D, 1) == 3 and kmax_j(D, 1) == 2
    one = DeltaSet(g, [(0, 0)])
    assert K_j(one, 1) == 1 and kmax_j(one, 1) == 0


def test_axis_mul_examples():
    g = GridSpec((8,), frozenset(), 2)
    assert axis_mul(g, 1, 7, 2) == 7
    gj = GridSpec((9,), frozenset({1}), 8)
    assert axis_mul(gj, 1, 1, 8) == 8
    assert axis_mul(gj, 1, 0, 8) == 0


def test_orbit_examples():
    g = GridSpec((8, 8, 8), frozenset(), 2)
    assert set(cyclotomic_orbit(g, (1, 4, 5))) == {(1, 4, 5), (2, 1, 3), (4, 2, 6)}
    g1 = GridSpec((8,), frozenset(), 2)
    assert set(cyclotomic_orbit(g1, (3,))) == {(3,), (5,), (6,)}


def test_closure_adds_the_wrapped_exponent():
    g = GridSpec((9, 9), frozenset({1, 2}), 8)
    assert closure(DeltaSet(g, [(1, 0)])).members == {(1, 0), (8, 0)}


def test_translate_examples():
    g = GridSpec((10, 9))
    D = DeltaSet(g, [(a, b) for a in range(2) for b in range(2)])
    assert translate(D, (2, 3)).members == {(2, 3), (3, 3), (2, 4), (3, 4)}
    D3 = DeltaSet(g, [(a, b) for a in range(3) for b in range(3)])
    with pytest.raises(GridError):
        translate(D3, (8, 0))


def test_omega_block_examples():
    assert set(omega_a(8, 3)) == {0, 1, 2, 3, 6, 7, 8}
    assert set(omega_star_b(8, 2)) == set(range(2, 8))
    assert set(omega_a(5, 0)) == {0}
