"""Exact scalars and truncated jets."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sepstar.errors import DivisionByZero, IndexOutOfRange, InsufficientAccuracy, ZeroConstantTerm
from sepstar.jet import INF, Jet, jet_invert
from sepstar.scalar import I, ONE, ZERO, Scalar

from conftest import mono

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=20)
scalars = st.builds(lambda a, b: Scalar(a, b), fractions, fractions)


@settings(max_examples=150)
@given(scalars, scalars, scalars)
def test_scalar_field_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == ZERO
    if a != ZERO:
        assert a * a.inverse() == ONE


@settings(max_examples=100)
@given(fractions, fractions)
def test_real_arithmetic_matches_fraction(x, y):
    assert Scalar(x) + Scalar(y) == Scalar(x + y)
    assert Scalar(x) * Scalar(y) == Scalar(x * y)


def test_gaussian_values():
    assert I * I == Scalar(-1)
    assert (Scalar(1, 1) * Scalar(1, -1)) == Scalar(2)
    assert Scalar(1, 2).conjugate() == Scalar(1, -2)
    assert Scalar(1) / Scalar(0, 1) == Scalar(0, -1)
    assert Scalar(Fraction(1, 3)).to_json() == {"re": "1/3", "im": "0"}
    assert Scalar(2) ** -2 == Scalar(Fraction(1, 4))


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        Scalar(1) / ZERO
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()


jet_terms = st.dictionaries(
    st.tuples(st.integers(0, 2), st.integers(0, 2)), scalars, max_size=4)
jets = st.builds(lambda t: Jet(1, t), jet_terms)


@settings(max_examples=100)
@given(jets, jets, jets)
def test_jet_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@settings(max_examples=100)
@given(jets, jets)
def test_leibniz_rule(a, b):
    for conj in (False, True):
        assert (a * b).derive(0, conj) == a.derive(0, conj) * b + a * b.derive(0, conj)


def test_invert_example():
    a = Jet.constant(1) + mono(1, [1], [1], 4)
    inv = jet_invert(a, 5)
    expected = Jet(1, {(0, 0): ONE, (1, 1): Scalar(-4), (2, 2): Scalar(16)}, 5)
    assert inv == expected
    assert (inv * a).agrees_with(Jet.constant(1, 1, 5))


def test_invert_rejects_zero_constant():
    with pytest.raises(ZeroConstantTerm):
        jet_invert(Jet.z(1, 0), 4)


def test_accuracy_bookkeeping():
    a = Jet(1, {(1, 1): ONE}, 6)
    assert a.derive(0).accuracy == 5
    assert (a * Jet.z(1, 0)).accuracy == 6
    assert a.truncate(2).is_zero() and a.truncate(2).accuracy == 2
    with pytest.raises(InsufficientAccuracy):
        a.coefficient((3,), (3,))
    with pytest.raises(InsufficientAccuracy):
        Jet(1, {}, 0).derive(0)
    assert Jet.z(1, 0).accuracy == INF


def test_derivative_values():
    j = mono(1, [3], [2])
    assert j.derive(0) == mono(1, [2], [2], 3)
    assert j.derive(0, conj=True) == mono(1, [3], [1], 2)
    assert j.derive_multi((2, 2)) == mono(1, [1], [0], 12)
    with pytest.raises(IndexOutOfRange):
        j.derive(1)


def test_string_form():
    assert str(Jet(1, {(1, 1): ONE}, 8)) == "1*z*zb + O(8)"
