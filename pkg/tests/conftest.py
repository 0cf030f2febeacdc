"""Shared charts and helpers for the test suite."""

from __future__ import annotations

from pathlib import Path

import pytest

from sepstar.jet import Jet
from sepstar.kaehler import Potential, chart_build
from sepstar.scalar import Scalar
from sepstar.symbols import SymbolSeries

MANIFESTS = Path(__file__).resolve().parent.parent / "manifests"


def mono(dim, z=None, zbar=None, c=1):
    z = tuple(z) if z is not None else (0,) * dim
    zbar = tuple(zbar) if zbar is not None else (0,) * dim
    return Jet.monomial(dim, z, zbar, Scalar(c))


def series(dim, coeffs: dict) -> SymbolSeries:
    """Function series from {nu_power: jet}."""
    return SymbolSeries.function(dim, coeffs)


def potential_flat():
    return Potential(1, {-1: mono(1, [1], [1])})


def potential_quartic():
    return Potential(1, {-1: mono(1, [1], [1]) + mono(1, [2], [2])})


def potential_deformed():
    return Potential(1, {-1: mono(1, [1], [1]), 0: mono(1, [1], [1])})


def potential_indefinite():
    return Potential(2, {-1: mono(2, [1, 0], [1, 0]) - mono(2, [0, 1], [0, 1])
                     + mono(2, [2, 0], [2, 0])})


POTENTIALS = {
    "flat": potential_flat,
    "quartic": potential_quartic,
    "indefinite": potential_indefinite,
    "deformed": potential_deformed,
}


def build(name: str, n: int = 4, extra_degree: int = 2):
    """Chart with the default accuracy budget 2(N + 1) + extra_degree."""
    return chart_build(POTENTIALS[name](), n, 2 * (n + 1) + extra_degree)


@pytest.fixture(scope="session")
def charts():
    return {name: build(name) for name in POTENTIALS}


@pytest.fixture(scope="session")
def flat():
    return build("flat")


@pytest.fixture(scope="session")
def quartic():
    return build("quartic")
