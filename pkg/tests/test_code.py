from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mcclrc import linalg
from mcclrc.code import (
    CodeError,
    build_domain,
    code_from_construction,
    domain_for,
    encode,
    evaluate_monomial,
    evaluate_poly,
    explicit_domain,
    mcc,
    project,
    star_product,
    subfield_subcode,
)
from mcclrc.families import build
from mcclrc.galois import field_new, vin_subfield
from mcclrc.grid import DeltaSet, GridSpec, closure, omega_a
from mcclrc.tables import EXAMPLES
from mcclrc.verify import min_distance_exact


def test_domain_points_gf5():
    F = field_new(5, 1)
    dom = build_domain(F, GridSpec((2, 2), frozenset({1, 2})))
    assert dom.points().tolist() == [[1, 1], [1, 4], [4, 1], [4, 4]]
    assert evaluate_monomial(dom, (1, 0)).tolist() == [1, 1, 4, 4]
    assert evaluate_monomial(dom, (1, 1)).tolist() == [1, 4, 4, 1]
    assert not dom.has_zero()


def test_domain_with_zero_gf4():
    F = field_new(2, 2)
    dom = build_domain(F, GridSpec((4,), frozenset()))
    assert dom.axis_points == ((1, 2, 3, 0),)
    assert dom.has_zero()


def test_domain_errors():
    F = field_new(5, 1)
    with pytest.raises(CodeError):
        build_domain(F, GridSpec((3,), frozenset({1})))
    with pytest.raises(CodeError):
        explicit_domain(F, GridSpec((3,)), [(1, 1, 2)])
    with pytest.raises(CodeError):
        domain_for(field_new(2, 3), (4,))
    dom = explicit_domain(F, GridSpec((3, 2)))
    assert dom.axis_points == ((0, 1, 2), (0, 1))


def test_star_product_example():
    F = field_new(5, 1)
    assert star_product(F, [1, 2, 3], [2, 2, 2]).tolist() == [2, 4, 1]
    with pytest.raises(CodeError):
        star_product(F, [1, 2], [1, 2, 3])


def test_repetition_code():
    F = field_new(5, 1)
    g = GridSpec((4,), frozenset({1}))
    C = mcc(F, g, DeltaSet(g, [(0,)]))
    assert C.generator.tolist() == [[1, 1, 1, 1]]
    assert encode(C, [3]).tolist() == [3, 3, 3, 3]
    with pytest.raises(CodeError):
        encode(C, [1, 2])
    with pytest.raises(CodeError):
        encode(C, [7])


def test_mcc_rejects_mismatched_shapes():
    F = field_new(5, 1)
    g = GridSpec((4,), frozenset({1}))
    with pytest.raises(CodeError):
        mcc(F, g, DeltaSet(GridSpec((2, 2)), [(0, 0)]))
    with pytest.raises(CodeError):
        mcc(F, g, None)


@given(st.data())
def test_star_product_intertwines_evaluation(data):
    F = field_new(7, 1)
    g = GridSpec((6, 3), frozenset({1, 2}))
    dom = build_domain(F, g)
    a = (data.draw(st.integers(0, 2)), data.draw(st.integers(0, 1)))
    b = (data.draw(st.integers(0, 3)), data.draw(st.integers(0, 1)))
    prod_e = (a[0] + b[0], a[1] + b[1])
    lhs = star_product(F, evaluate_monomial(dom, a), evaluate_monomial(dom, b))
    assert lhs.tolist() == evaluate_monomial(dom, prod_e).tolist()


def test_evaluate_poly_is_linear():
    F = field_new(2, 4)
    dom = build_domain(F, GridSpec((5, 3), frozenset({1, 2})))
    f = {(1, 0): 3, (2, 2): 7}
    v = evaluate_poly(dom, f)
    parts = [F.vmul(c, evaluate_monomial(dom, e)) for e, c in f.items()]
    assert v.tolist() == F.vadd(*parts).tolist()


def _closed_code(ph_exp=(2, 4, 2), sizes=(5, 3)):
    p, l, h = ph_exp
    F = field_new(p, l)
    g = GridSpec(sizes, frozenset({1, 2}), p ** h)
    D = closure(DeltaSet(g, [(1, 0), (0, 1)]))
    return F, g, D, mcc(F, g, D)


def test_subfield_subcode_dimension_and_entries():
    F, g, D, C = _closed_code()
    S = subfield_subcode(C, 2, "trace")
    assert S.k == len(D) and S.alphabet == 4
    assert bool(np.all(vin_subfield(F, 2, S.generator)))
    T = subfield_subcode(C, 2, "intersection")
    assert linalg.same_row_space(F, S.generator, T.generator)


def test_trace_method_refuses_open_sets():
    F = field_new(2, 4)
    g = GridSpec((5,), frozenset({1}), 4)
    C = mcc(F, g, DeltaSet(g, [(1,)]))
    with pytest.raises(CodeError):
        subfield_subcode(C, 2, "trace")
    # the intersection still applies and is smaller than |Delta| here
    assert subfield_subcode(C, 2, "intersection").k == 0
    with pytest.raises(CodeError):
        subfield_subcode(C, 3)
    with pytest.raises(CodeError):
        subfield_subcode(C, 2, "other")


def test_subfield_of_single_block_gf16():
    F = field_new(2, 4)
    g = GridSpec((5,), frozenset({1}), 4)
    D = DeltaSet(g, [(e,) for e in omega_a(4, 1)])
    S = subfield_subcode(mcc(F, g, D), 2)
    assert (S.n, S.k) == (5, 3)
    # message symbols must come from the subfield
    with pytest.raises(CodeError):
        encode(S, [2, 0, 0])
    w = encode(S, [1, 6, 7])
    assert bool(np.all(vin_subfield(F, 2, w)))


def test_project():
    F, g, D, C = _closed_code()
    P = project(C, [0, 1, 2, 3])
    assert P.n == 4 and P.k == linalg.rank(F, C.generator[:, :4])
    with pytest.raises(CodeError):
        project(C, [])
    with pytest.raises(CodeError):
        project(C, [99])


@settings(max_examples=25)
@given(st.data())
def test_projection_commutes_with_subfield_for_closed_sets(data):
    F, g, D, C = _closed_code()
    R = sorted(data.draw(st.sets(st.integers(0, C.n - 1), min_size=1, max_size=C.n)))
    left = project(subfield_subcode(C, 2), R)
    right = subfield_subcode(project(C, R), 2, "intersection")
    assert linalg.same_row_space(F, left.generator, right.generator)


def test_full_grid_and_unit_message():
    F = field_new(5, 1)
    g = GridSpec((4, 4), frozenset({1, 2}))
    C = mcc(F, g, DeltaSet(g, list(g.exponents())))
    assert C.k == C.n == 16
    assert min_distance_exact(C).value == 1
    e1 = [1] + [0] * (C.k - 1)
    assert encode(C, e1).tolist() == C.generator[0].tolist()


def test_subfield_rank_of_first_example():
    C = code_from_construction(build(EXAMPLES[0].descriptor))
    assert (C.n, C.k, C.alphabet) == (54, 25, 5)
    assert linalg.rank(C.field, C.generator) == 25


def test_projection_of_repetition_code():
    F = field_new(5, 1)
    g = GridSpec((4, 2), frozenset({1, 2}))
    C = mcc(F, g, DeltaSet(g, [(0, 0)]))
    P = project(C, [0, 5, 7])
    assert P.k == 1 and P.generator.tolist() == [[1, 1, 1]]
