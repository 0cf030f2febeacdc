"""Truncated multivariate power series ("jets") in z^1..z^m, zbar^1..zbar^m.

A jet is a Taylor expansion about the chart's base point.  Exponent keys are
tuples of length ``2m``: the holomorphic block ``beta`` followed by the
antiholomorphic block ``gamma``.  Coefficients of total degree strictly below
``accuracy`` are trusted; everything at or above it is unknown and is never
stored.  ``accuracy == math.inf`` marks an exact polynomial.
"""

from __future__ import annotations

import math
from operator import add
from typing import Iterable, Mapping

from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    InsufficientAccuracy,
    ZeroConstantTerm,
)
from .scalar import ONE, Scalar

INF = math.inf


def falling(n: int, k: int) -> int:
    """n (n-1) ... (n-k+1)."""
    out = 1
    for j in range(k):
        out *= n - j
    return out


def grlex_key(exps: tuple) -> tuple:
    return (sum(exps), exps)


def _check_accuracy(accuracy):
    if accuracy == INF:
        return INF
    if isinstance(accuracy, bool) or not isinstance(accuracy, int) or accuracy < 0:
        raise ValueError(f"accuracy must be a natural number or inf, got {accuracy!r}")
    return accuracy


class Jet:
    """Immutable truncated power series with Gaussian-rational coefficients."""

    __slots__ = ("dim", "terms", "accuracy")

    def __init__(self, dim: int, terms: Mapping[tuple, object] | None = None, accuracy=INF):
        if not isinstance(dim, int) or dim < 1:
            raise ValueError(f"dimension must be a positive integer, got {dim!r}")
        accuracy = _check_accuracy(accuracy)
        clean = {}
        for key, value in (terms or {}).items():
            key = tuple(key)
            if len(key) != 2 * dim or any((not isinstance(e, int)) or e < 0 for e in key):
                raise DimensionMismatch(f"exponent key {key!r} invalid for dimension {dim}")
            c = Scalar.coerce(value)
            if c and sum(key) < accuracy:
                clean[key] = clean[key] + c if key in clean else c
        self._init(dim, {k: c for k, c in clean.items() if c}, accuracy)

    def _init(self, dim, terms, accuracy):
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "accuracy", accuracy)

    @classmethod
    def _make(cls, dim: int, terms: dict, accuracy) -> "Jet":
        # trusted constructor: terms already canonical
        j = object.__new__(cls)
        j._init(dim, terms, accuracy)
        return j

    def __setattr__(self, name, value):
        raise AttributeError("Jet is immutable")

    # construction helpers

    @classmethod
    def zero(cls, dim: int, accuracy=INF) -> "Jet":
        return cls._make(dim, {}, _check_accuracy(accuracy))

    @classmethod
    def constant(cls, dim: int, value=1, accuracy=INF) -> "Jet":
        return cls(dim, {(0,) * (2 * dim): value}, accuracy)

    @classmethod
    def monomial(cls, dim: int, beta: Iterable[int], gamma: Iterable[int], value=1,
                 accuracy=INF) -> "Jet":
        return cls(dim, {tuple(beta) + tuple(gamma): value}, accuracy)

    @classmethod
    def z(cls, dim: int, k: int) -> "Jet":
        """The holomorphic coordinate z^k (0-based)."""
        key = [0] * (2 * dim)
        key[k] = 1
        return cls(dim, {tuple(key): 1})

    @classmethod
    def zbar(cls, dim: int, l: int) -> "Jet":
        key = [0] * (2 * dim)
        key[dim + l] = 1
        return cls(dim, {tuple(key): 1})

    # inspection

    @property
    def is_exact(self) -> bool:
        return self.accuracy == INF

    def is_zero(self) -> bool:
        """True when every trusted coefficient vanishes."""
        return not self.terms

    def is_exact_zero(self) -> bool:
        return not self.terms and self.accuracy == INF

    def degree(self) -> int:
        return max((sum(k) for k in self.terms), default=-1)

    def constant_term(self) -> Scalar:
        if self.accuracy == 0:
            raise InsufficientAccuracy("constant term not trusted (accuracy 0)")
        return self.terms.get((0,) * (2 * self.dim), Scalar(0))

    def coefficient(self, beta: Iterable[int], gamma: Iterable[int]) -> Scalar:
        key = tuple(beta) + tuple(gamma)
        if len(key) != 2 * self.dim:
            raise DimensionMismatch(f"exponent key {key!r} invalid for dimension {self.dim}")
        if sum(key) >= self.accuracy:
            raise InsufficientAccuracy(
                f"degree {sum(key)} requested from a jet trusted below {self.accuracy}")
        return self.terms.get(key, Scalar(0))

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]))

    def is_holomorphic(self) -> bool:
        m = self.dim
        return all(not any(k[m:]) for k in self.terms)

    def is_antiholomorphic(self) -> bool:
        m = self.dim
        return all(not any(k[:m]) for k in self.terms)

    # arithmetic

    def _check_dim(self, other: "Jet"):
        if other.dim != self.dim:
            raise DimensionMismatch(f"jet dimensions differ: {self.dim} vs {other.dim}")

    def truncate(self, accuracy) -> "Jet":
        accuracy = _check_accuracy(accuracy)
        if accuracy >= self.accuracy:
            return self
        return Jet._make(self.dim, {k: c for k, c in self.terms.items() if sum(k) < accuracy},
                         accuracy)

    def __add__(self, other):
        if not isinstance(other, Jet):
            return NotImplemented
        self._check_dim(other)
        acc = min(self.accuracy, other.accuracy)
        out = {k: c for k, c in self.terms.items() if sum(k) < acc} \
            if acc < self.accuracy else dict(self.terms)
        for k, c in other.terms.items():
            if acc != INF and sum(k) >= acc:
                continue
            prev = out.get(k)
            if prev is None:
                out[k] = c
            else:
                s = prev + c
                if s:
                    out[k] = s
                else:
                    del out[k]
        return Jet._make(self.dim, out, acc)

    def __neg__(self):
        return Jet._make(self.dim, {k: -c for k, c in self.terms.items()}, self.accuracy)

    def __sub__(self, other):
        if not isinstance(other, Jet):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "Jet":
        c = Scalar.coerce(c)
        if not c:
            return Jet._make(self.dim, {}, self.accuracy)
        if c == ONE:
            return self
        return Jet._make(self.dim, {k: v * c for k, v in self.terms.items()}, self.accuracy)

    def __mul__(self, other):
        if isinstance(other, Jet):
            return self._mul_jet(other)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other):
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def _mul_jet(self, other: "Jet") -> "Jet":
        self._check_dim(other)
        acc = min(self.accuracy, other.accuracy)
        if not self.terms or not other.terms:
            return Jet._make(self.dim, {}, acc)
        right = sorted(((sum(k), k, c) for k, c in other.terms.items()), key=lambda t: t[0])
        out: dict = {}
        for ka, ca in self.terms.items():
            da = sum(ka)
            room = acc - da
            if room <= 0:
                continue
            for db, kb, cb in right:
                if db >= room:
                    break
                key = tuple(map(add, ka, kb))
                prod = ca * cb
                prev = out.get(key)
                out[key] = prod if prev is None else prev + prod
        return Jet._make(self.dim, {k: c for k, c in out.items() if c}, acc)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = Jet.constant(self.dim, 1, self.accuracy)
        for _ in range(n):
            result = result * self
        return result

    # calculus

    def derive(self, index: int, conj: bool = False) -> "Jet":
        """d/dz^index, or d/dzbar^index when ``conj`` (0-based index)."""
        if not 0 <= index < self.dim:
            raise IndexOutOfRange(f"direction {index} outside 0..{self.dim - 1}")
        mu = [0] * (2 * self.dim)
        mu[index + (self.dim if conj else 0)] = 1
        return self.derive_multi(tuple(mu))

    def derive_multi(self, mu: tuple) -> "Jet":
        """Apply the mixed partial derivative with exponent key ``mu``."""
        if len(mu) != 2 * self.dim:
            raise DimensionMismatch(f"derivative key {mu!r} invalid for dimension {self.dim}")
        order = sum(mu)
        if order == 0:
            return self
        acc = self.accuracy - order
        if acc < 0:
            raise InsufficientAccuracy(
                f"cannot take {order} derivatives of a jet trusted below degree {self.accuracy}")
        out = {}
        for key, c in self.terms.items():
            coef = 1
            for e, d in zip(key, mu):
                if e < d:
                    coef = 0
                    break
                if d:
                    coef *= falling(e, d)
            if coef:
                out[tuple(e - d for e, d in zip(key, mu))] = c * coef
        return Jet._make(self.dim, out, acc)

    def invert(self, target_accuracy) -> "Jet":
        return jet_invert(self, target_accuracy)

    # comparison / display

    def __eq__(self, other):
        if not isinstance(other, Jet):
            return NotImplemented
        return (self.dim == other.dim and self.accuracy == other.accuracy
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.dim, self.accuracy, frozenset(self.terms.items())))

    def agrees_with(self, other: "Jet") -> bool:
        """Equality of all coefficients both jets trust."""
        return (self - other).is_zero()

    def monomial_str(self, key: tuple) -> str:
        m = self.dim
        parts = []
        for i, e in enumerate(key):
            if not e:
                continue
            name = f"z{i + 1}" if i < m else f"zb{i - m + 1}"
            if m == 1:
                name = "z" if i < m else "zb"
            parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts)

    def __str__(self):
        if not self.terms:
            body = "0"
        else:
            chunks = []
            for key, c in self.sorted_items():
                mono = self.monomial_str(key)
                chunks.append(f"{c}*{mono}" if mono else str(c))
            body = " + ".join(chunks)
        if self.accuracy != INF:
            body += f" + O({self.accuracy})"
        return body

    def __repr__(self):
        return f"Jet({self.dim}, {{{', '.join(f'{k}: {c}' for k, c in self.sorted_items())}}}, " \
               f"accuracy={self.accuracy})"


def jet_arith(a: Jet, b: Jet, op: str, scale=None) -> Jet:
    """Dispatch ``add``/``sub``/``mul`` with an optional scalar factor."""
    if op == "add":
        out = a + b
    elif op == "sub":
        out = a - b
    elif op == "mul":
        out = a * b
    else:
        raise ValueError(f"unknown jet operation {op!r}")
    return out if scale is None else out.scale(scale)


def jet_invert(a: Jet, target_accuracy: int) -> Jet:
    """Multiplicative inverse modulo degree ``target_accuracy``.

    Uses 1/a = c^-1 * sum_n (-(a/c - 1))^n with c the constant term; the
    n-th summand starts at degree n so the loop stops after target steps.
    """
    target_accuracy = _check_accuracy(target_accuracy)
    if target_accuracy == INF:
        raise ValueError("an exact inverse needs a finite target accuracy")
    if a.accuracy < target_accuracy:
        raise InsufficientAccuracy(
            f"jet trusted below degree {a.accuracy}, inverse requested below {target_accuracy}")
    if target_accuracy == 0:
        return Jet.zero(a.dim, 0)
    c = a.terms.get((0,) * (2 * a.dim))
    if not c:
        raise ZeroConstantTerm("jet has vanishing constant term")
    cinv = c.inverse()
    one = Jet.constant(a.dim, 1, target_accuracy)
    e = (a.truncate(target_accuracy).scale(cinv)) - one
    total = one
    term = one
    while True:
        term = -(term * e)
        if term.is_zero():
            break
        total = total + term
    return total.scale(cinv)
