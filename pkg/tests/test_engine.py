"""Total symbols, the star product and its bidifferential coefficients."""

from __future__ import annotations

import random

import pytest

from sepstar.bidiff import bidiff_coefficients
from sepstar.engine import star, total_symbol_closed, total_symbol_recursive
from sepstar.jet import Jet
from sepstar.kaehler import chart_build
from sepstar.scalar import Scalar
from sepstar.symbols import SymbolSeries
from sepstar.verify import (
    c1,
    c1_coordinate_form,
    perturb,
    random_function,
    verify_symbol_conditions,
)

from conftest import POTENTIALS, build, mono, series


def test_flat_symbols(flat):
    F = total_symbol_closed(flat, Jet.zbar(1, 0))
    assert F == SymbolSeries(1, {(0, (0, 0)): Jet.zbar(1, 0), (1, (1, 0)): Jet.constant(1)}, 4)
    F2 = total_symbol_closed(flat, mono(1, [0], [2]))
    assert F2.agrees_with(SymbolSeries(1, {
        (0, (0, 0)): mono(1, [0], [2]), (1, (1, 0)): mono(1, [0], [1], 2),
        (2, (2, 0)): Jet.constant(1)}, 4))


@pytest.mark.parametrize("name", list(POTENTIALS))
def test_holomorphic_function_is_multiplication(name):
    c = build(name)
    f = Jet.z(c.dim, 0) * Jet.z(c.dim, c.dim - 1) + Jet.constant(c.dim, 3)
    assert total_symbol_closed(c, f).agrees_with(SymbolSeries.from_jet(f, 0, c.nu_truncation))
    assert total_symbol_recursive(c, f).agrees_with(SymbolSeries.from_jet(f, 0, c.nu_truncation))


def test_closed_equals_recursive_on_quartic_n3():
    c = chart_build(POTENTIALS["quartic"](), 3, 10)
    f = Jet.zbar(1, 0)
    assert total_symbol_closed(c, f).agrees_with(total_symbol_recursive(c, f))


@pytest.mark.parametrize("name", list(POTENTIALS))
def test_closed_equals_recursive_random(name):
    c = build(name, 3, 3)
    rng = random.Random(21)
    for _ in range(4):
        f = series(c.dim, {0: random_function(c.dim, rng), 1: random_function(c.dim, rng, 2)})
        assert total_symbol_closed(c, f).agrees_with(total_symbol_recursive(c, f))


def test_negative_control_is_located(quartic):
    F = total_symbol_closed(quartic, Jet.zbar(1, 0))
    assert verify_symbol_conditions(quartic, F, Jet.zbar(1, 0)).passed
    bad = perturb(F, 2, (1, 0), Jet.z(1, 0))
    report = verify_symbol_conditions(quartic, bad, Jet.zbar(1, 0))
    assert not report.passed
    failure = report.failures()[0]
    assert failure.detail["offender"] is not None


def test_star_is_nu_linear_and_unital(quartic):
    f = mono(1, [1], [2])
    one = Jet.constant(1)
    assert star(quartic, one, f).agrees_with(SymbolSeries.from_jet(f, 0, 4))
    assert star(quartic, f, one).agrees_with(SymbolSeries.from_jet(f, 0, 4))
    nuf = SymbolSeries.function(1, {1: f})
    assert star(quartic, nuf, Jet.z(1, 0)).agrees_with(
        star(quartic, f, Jet.z(1, 0)).shift(1).truncate(4))


def test_bidiff_table_flat(flat):
    table = bidiff_coefficients(flat, 3)
    for r, rows in table.entries.items():
        assert rows == [((r,), (r,), Jet.constant(1, Scalar(1) / [1, 1, 2, 6][r]))]


def test_bidiff_table_quartic_reproduces_star(quartic):
    table = bidiff_coefficients(quartic)
    first = {(a, b): c for a, b, c in table.entries[1]}
    assert set(first) == {((1,), (1,))}
    assert first[((1,), (1,))].agrees_with(quartic.inverse[(0, 0)][1])
    rng = random.Random(4)
    for _ in range(5):
        f, g = random_function(1, rng), random_function(1, rng)
        assert table.apply(f, g).agrees_with(star(quartic, f, g))


@pytest.mark.parametrize("name", list(POTENTIALS))
def test_first_order_bracket_matches_coordinate_form(name):
    c = build(name)
    rng = random.Random(9)
    for _ in range(3):
        f, g = random_function(c.dim, rng), random_function(c.dim, rng)
        assert (c1(c, f, g) - c1(c, g, f)).agrees_with(c1_coordinate_form(c, f, g))
