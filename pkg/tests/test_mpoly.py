"""Multihomogeneous polynomials: construction, evaluation, calculus, text."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cipoints.errors import ValidationError
from cipoints.gf import extension_field, field_embedding, make_field
from cipoints.mpoly import (
    eval_poly,
    format_poly,
    gradient,
    group_degree,
    is_multihomogeneous,
    make_poly,
    monomials_of_degree,
    multidegree_monomials,
    parse_poly,
    partial_derivative,
    random_multihomogeneous,
    total_degree,
)

F3 = make_field(3, 1)
F4 = make_field(2, 2)
F5 = make_field(5, 1)


def quadric_cone(F):
    # X1^2 - X0*X2 in P^3 coordinates (X3 absent).
    return make_poly(
        F,
        (4,),
        {(0, 2, 0, 0): F.one(), (1, 0, 1, 0): -F.one()},
    )


def test_make_poly_canonicalizes():
    f = make_poly(
        F3,
        (3,),
        {(1, 1, 0): F3.element(2), (2, 0, 0): F3.one(), (0, 0, 2): F3.zero()},
    )
    # Zero coefficients are dropped; order is graded-lex descending.
    assert [m for m, _ in f.terms] == [(2, 0, 0), (1, 1, 0), ]
    assert f.coefficient((0, 0, 2)).is_zero()
    assert not f.is_zero()


def test_make_poly_validation():
    with pytest.raises(ValidationError):
        make_poly(F3, (3,), {(1, 1): F3.one()})  # wrong exponent length
    with pytest.raises(ValidationError):
        make_poly(F3, (3,), {(-1, 2, 0): F3.one()})
    with pytest.raises(ValidationError):
        make_poly(F3, (3,), [((1, 0, 0), F3.one()), ((1, 0, 0), F3.one())])
    with pytest.raises(ValidationError):
        make_poly(F3, (0, 3), {})
    with pytest.raises(ValidationError):
        make_poly(F3, (3,), {(1, 0, 0): F5.one()})


def test_ring_operations():
    x0 = make_poly(F3, (2,), {(1, 0): F3.one()})
    x1 = make_poly(F3, (2,), {(0, 1): F3.one()})
    square = (x0 + x1) * (x0 + x1)
    # (X0 + X1)^2 = X0^2 + 2*X0*X1 + X1^2 over F_3.
    assert square.terms_dict() == {
        (2, 0): F3.one(),
        (1, 1): F3.element(2),
        (0, 2): F3.one(),
    }
    assert (square - square).is_zero()
    assert (-x0 + x0).is_zero()
    assert square.scale(F3.zero()).is_zero()


def test_monomials_of_degree_counts():
    assert len(monomials_of_degree(3, 2)) == math.comb(4, 2)
    assert monomials_of_degree(2, 1) == [(1, 0), (0, 1)]
    for mono in monomials_of_degree(4, 3):
        assert sum(mono) == 3


def test_multidegree_monomials_are_the_product_basis():
    monos = multidegree_monomials((2, 3), (1, 2))
    assert len(monos) == math.comb(2, 1) * math.comb(4, 2)
    for mono in monos:
        assert sum(mono[:2]) == 1 and sum(mono[2:]) == 2
    assert len(set(monos)) == len(monos)


def test_degree_queries():
    f = quadric_cone(F3)
    assert is_multihomogeneous(f) == (2,)
    assert total_degree(f) == 2
    assert group_degree(f, 0) == 2
    g = make_poly(F3, (2, 2), {(1, 0, 1, 0): F3.one(), (0, 1, 0, 1): F3.one()})
    assert is_multihomogeneous(g) == (1, 1)
    mixed = make_poly(F3, (3,), {(2, 0, 0): F3.one(), (1, 0, 0): F3.one()})
    assert is_multihomogeneous(mixed) is None


def test_eval_poly_flat_and_grouped():
    f = make_poly(F3, (2, 2), {(1, 0, 1, 0): F3.one()})  # X0*X2
    a = [F3.element(2), F3.zero(), F3.element(2), F3.one()]
    assert eval_poly(f, a) == F3.element(4)
    assert eval_poly(f, [a[:2], a[2:]]) == F3.element(4)
    with pytest.raises(ValidationError):
        eval_poly(f, a[:3])
    with pytest.raises(ValidationError):
        eval_poly(f, [a[:1], a[1:]])


def test_eval_poly_through_embedding():
    f = quadric_cone(F3)
    E = extension_field(F3, 2)
    phi = field_embedding(F3, E)
    g = E.generator()
    pt = (E.one(), g, g * g, E.zero())
    direct = g * g - E.one() * (g * g)
    assert eval_poly(f, pt, embedding=phi) == direct
    with pytest.raises(ValidationError):
        eval_poly(f, pt)  # coordinates outside the base field


def test_partial_derivative_and_gradient():
    f = quadric_cone(F5)
    grads = gradient(f)
    assert len(grads) == 4
    assert grads[1].terms_dict() == {(0, 1, 0, 0): F5.element(2)}
    assert grads[0].terms_dict() == {(0, 0, 1, 0): -F5.one()}
    assert grads[3].is_zero()
    # Characteristic kills p-th powers: d/dX0 of X0^3 over F_3 is 0.
    cube = make_poly(F3, (1,), {(3,): F3.one()})
    assert partial_derivative(cube, 0).is_zero()
    with pytest.raises(ValidationError):
        partial_derivative(cube, 1)


@given(seed=st.integers(0, 10_000))
@settings(max_examples=30, deadline=None)
def test_random_multihomogeneous_has_requested_multidegree(seed):
    f = random_multihomogeneous(F4, (2, 3), (1, 2), seed)
    assert is_multihomogeneous(f) == (1, 2)
    again = random_multihomogeneous(F4, (2, 3), (1, 2), seed)
    assert f == again


def test_parse_poly_round_trip():
    f = quadric_cone(F3)
    text = format_poly(f)
    assert text == "2*X0^1*X2^1 + 1*X1^2"
    assert parse_poly(text, F3, (4,)) == f
    # Signs fold into coefficients, duplicates accumulate.
    # -1 - 2 = 0 mod 3, so the X0^2 term cancels away entirely.
    g = parse_poly("-1*X0^2 - 2*X0^2 + 1*X1^1*X2^1", F3, (3,))
    assert g.terms_dict() == {(0, 1, 1): F3.one()}


@pytest.mark.parametrize(
    "text",
    [
        "",
        "X0^2",  # missing coefficient
        "1*X0",  # missing exponent marker
        "1*X0^2 + ",  # dangling sign
        "1*X9^1",  # variable out of range
        "2*X0^-1",
    ],
)
def test_parse_poly_rejects_malformed_input(text):
    with pytest.raises(ValidationError):
        parse_poly(text, F3, (3,))


@given(seed=st.integers(0, 5_000))
@settings(max_examples=25, deadline=None)
def test_format_parse_round_trip_random(seed):
    f = random_multihomogeneous(F5, (3,), (2,), seed)
    assert parse_poly(format_poly(f), F5, (3,)) == f
