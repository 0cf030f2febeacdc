"""Total symbols of differential operators and formal series of them in nu.

A :class:`Symbol` is a polynomial in the fibre variables zeta_1..zeta_m,
zetabar_1..zetabar_m whose coefficients are jets.  A fibre key is a tuple of
length ``2m``: the zeta block first, then the zetabar block.  Fibre index
``i`` is dual to jet exponent index ``i`` (zeta_k to z^k, zetabar_l to
zbar^l), so composition pairs them position by position.

Symbols are in normal form: coefficients stand to the left of derivatives,
so the fibre monomial zeta^a zetabar^b acts as d^|a| / dz^a d^|b| / dzbar^b.

A :class:`SymbolSeries` is a formal Laurent series in nu with symbol
coefficients, known through ``nu**truncation``.  Jets that vanish on their
trusted range are kept when their accuracy is finite, since they still record
how far the zero is known.  Only exact zeros are pruned.
"""

from __future__ import annotations

import itertools
import math
from typing import Iterable, Mapping

from .errors import DimensionMismatch, InsufficientAccuracy
from .jet import INF, Jet, grlex_key
from .scalar import Scalar


def _prune(terms: dict) -> dict:
    return {k: j for k, j in terms.items() if not j.is_exact_zero()}


def _accumulate(out: dict, key, jet: Jet):
    prev = out.get(key)
    out[key] = jet if prev is None else prev + jet


def sub_indices(a: tuple):
    """All multi-indices mu with 0 <= mu <= a componentwise."""
    return itertools.product(*(range(e + 1) for e in a))


def binom_multi(a: tuple, mu: tuple) -> int:
    out = 1
    for e, d in zip(a, mu):
        out *= math.comb(e, d)
    return out


def fibre_monomial_str(key: tuple, dim: int) -> str:
    parts = []
    for i, e in enumerate(key):
        if not e:
            continue
        if dim == 1:
            name = "zeta" if i < dim else "zetab"
        else:
            name = f"zeta{i + 1}" if i < dim else f"zetab{i - dim + 1}"
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


class Symbol:
    """Fibrewise polynomial with jet coefficients; immutable."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: Mapping[tuple, Jet] | None = None):
        clean = {}
        for key, jet in (terms or {}).items():
            key = tuple(key)
            if len(key) != 2 * dim or any(e < 0 for e in key):
                raise DimensionMismatch(f"fibre key {key!r} invalid for dimension {dim}")
            if not isinstance(jet, Jet):
                raise TypeError("symbol coefficients must be jets")
            if jet.dim != dim:
                raise DimensionMismatch(f"jet of dimension {jet.dim} in a symbol of dimension {dim}")
            _accumulate(clean, key, jet)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "terms", _prune(clean))

    @classmethod
    def _make(cls, dim, terms):
        s = object.__new__(cls)
        object.__setattr__(s, "dim", dim)
        object.__setattr__(s, "terms", terms)
        return s

    def __setattr__(self, name, value):
        raise AttributeError("Symbol is immutable")

    @classmethod
    def from_jet(cls, jet: Jet) -> "Symbol":
        return cls(jet.dim, {(0,) * (2 * jet.dim): jet})

    @classmethod
    def fibre(cls, dim: int, key: Iterable[int], coeff: Jet | None = None) -> "Symbol":
        return cls(dim, {tuple(key): coeff if coeff is not None else Jet.constant(dim)})

    @classmethod
    def zeta(cls, dim: int, k: int) -> "Symbol":
        key = [0] * (2 * dim)
        key[k] = 1
        return cls.fibre(dim, key)

    @classmethod
    def zetabar(cls, dim: int, l: int) -> "Symbol":
        key = [0] * (2 * dim)
        key[dim + l] = 1
        return cls.fibre(dim, key)

    def fibre_degree(self) -> int:
        return max((sum(k) for k in self.terms), default=-1)

    def is_zero(self) -> bool:
        return all(j.is_zero() for j in self.terms.values())

    def is_zeta_bar_free(self) -> bool:
        m = self.dim
        return all(not any(k[m:]) for k in self.terms)

    def restrict_fiber_zero(self) -> Jet:
        return self.terms.get((0,) * (2 * self.dim), Jet.zero(self.dim))

    def __add__(self, other):
        if not isinstance(other, Symbol):
            return NotImplemented
        if other.dim != self.dim:
            raise DimensionMismatch("symbol dimensions differ")
        out = dict(self.terms)
        for k, j in other.terms.items():
            _accumulate(out, k, j)
        return Symbol._make(self.dim, _prune(out))

    def __neg__(self):
        return Symbol._make(self.dim, {k: -j for k, j in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "Symbol":
        """Multiply by a scalar or (pointwise) by a jet."""
        return Symbol._make(self.dim, _prune({k: j * c for k, j in self.terms.items()}))

    def apply(self, g: Jet) -> Jet:
        """Act on a function as the differential operator this symbol denotes."""
        if g.dim != self.dim:
            raise DimensionMismatch("symbol and function dimensions differ")
        out = Jet.zero(self.dim)
        for key, c in self.terms.items():
            out = out + c * g.derive_multi(key)
        return out

    def __eq__(self, other):
        if not isinstance(other, Symbol):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    def __hash__(self):
        return hash((self.dim, frozenset(self.terms.items())))

    def agrees_with(self, other: "Symbol") -> bool:
        return (self - other).is_zero()

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]))

    def __str__(self):
        if not self.terms:
            return "0"
        chunks = []
        for key, jet in self.sorted_items():
            mono = fibre_monomial_str(key, self.dim)
            chunks.append(f"({jet})*{mono}" if mono else f"({jet})")
        return " + ".join(chunks)

    def __repr__(self):
        return f"Symbol({self.dim}, {self})"


def _compose_terms(p_terms: Mapping[tuple, Jet], q_terms: Mapping[tuple, Jet], out: dict):
    """Accumulate the composition of two fibre-polynomial term maps into ``out``.

    p o q = sum over mu of 1/mu! d^mu_xi p * d^mu_x q, which on a single
    pair of monomials gives binom(a, mu) p_a d^mu q_b xi^(a - mu + b).
    """
    cache: dict = {}
    for a, pa in p_terms.items():
        subs = list(sub_indices(a))
        for b, qb in q_terms.items():
            for mu in subs:
                ck = (b, mu)
                dq = cache.get(ck)
                if dq is None:
                    dq = cache[ck] = qb.derive_multi(mu)
                if dq.is_exact_zero():
                    continue
                coef = binom_multi(a, mu)
                key = tuple(e - d + f for e, d, f in zip(a, mu, b))
                _accumulate(out, key, (pa * dq).scale(coef) if coef != 1 else pa * dq)


def compose(p: Symbol, q: Symbol) -> Symbol:
    """Symbol of the operator product: tau(AB) from tau(A), tau(B)."""
    if p.dim != q.dim:
        raise DimensionMismatch("symbol dimensions differ")
    out: dict = {}
    _compose_terms(p.terms, q.terms, out)
    return Symbol._make(p.dim, _prune(out))


class SymbolSeries:
    """Formal Laurent series sum_r nu^r X_r with symbol coefficients.

    ``terms`` maps ``(r, fibre_key)`` to a jet; ``truncation`` is the highest
    power of nu that is known (``inf`` for exact finite sums).
    """

    __slots__ = ("dim", "terms", "truncation")

    def __init__(self, dim: int, terms: Mapping[tuple, Jet] | None = None, truncation=INF):
        if truncation != INF and not isinstance(truncation, int):
            raise TypeError("truncation must be an integer or inf")
        clean: dict = {}
        for (r, key), jet in (terms or {}).items():
            key = tuple(key)
            if len(key) != 2 * dim or any(e < 0 for e in key):
                raise DimensionMismatch(f"fibre key {key!r} invalid for dimension {dim}")
            if jet.dim != dim:
                raise DimensionMismatch("jet dimension differs from series dimension")
            if r <= truncation:
                _accumulate(clean, (int(r), key), jet)
        self._init(dim, _prune(clean), truncation)

    def _init(self, dim, terms, truncation):
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "truncation", truncation)

    @classmethod
    def _make(cls, dim, terms, truncation):
        s = object.__new__(cls)
        s._init(dim, terms, truncation)
        return s

    def __setattr__(self, name, value):
        raise AttributeError("SymbolSeries is immutable")

    # construction

    @classmethod
    def zero(cls, dim: int, truncation=INF) -> "SymbolSeries":
        return cls._make(dim, {}, truncation)

    @classmethod
    def from_jet(cls, jet: Jet, nu_power: int = 0, truncation=INF) -> "SymbolSeries":
        return cls(jet.dim, {(nu_power, (0,) * (2 * jet.dim)): jet}, truncation)

    @classmethod
    def from_symbol(cls, sym: Symbol, nu_power: int = 0, truncation=INF) -> "SymbolSeries":
        return cls(sym.dim, {(nu_power, k): j for k, j in sym.terms.items()}, truncation)

    @classmethod
    def from_symbols(cls, dim: int, coeffs: Mapping[int, Symbol], truncation=INF):
        terms = {}
        for r, sym in coeffs.items():
            for k, j in sym.terms.items():
                terms[(r, k)] = j
        return cls(dim, terms, truncation)

    @classmethod
    def function(cls, dim: int, coeffs: Mapping[int, Jet], truncation=INF) -> "SymbolSeries":
        """A fibre-free series sum_r nu^r f_r."""
        zero = (0,) * (2 * dim)
        return cls(dim, {(r, zero): j for r, j in coeffs.items()}, truncation)

    # inspection

    @property
    def valuation(self):
        """Lowest stored power of nu; ``truncation + 1`` for a known zero."""
        if self.terms:
            return min(r for r, _ in self.terms)
        return self.truncation + 1

    @property
    def coeffs(self) -> dict:
        out: dict = {}
        for (r, key), jet in self.terms.items():
            out.setdefault(r, {})[key] = jet
        return {r: Symbol._make(self.dim, t) for r, t in sorted(out.items())}

    def coefficient(self, r: int) -> Symbol:
        if r > self.truncation:
            raise InsufficientAccuracy(f"nu^{r} lies beyond truncation {self.truncation}")
        return Symbol._make(self.dim, {k: j for (s, k), j in self.terms.items() if s == r})

    def fibre_degree(self) -> int:
        return max((sum(k) for _, k in self.terms), default=-1)

    def zeta_degree(self) -> int:
        m = self.dim
        return max((sum(k[:m]) for _, k in self.terms), default=-1)

    def is_zero(self) -> bool:
        return all(j.is_zero() for j in self.terms.values())

    def is_zeta_free(self) -> bool:
        m = self.dim
        return all(not any(k[:m]) for _, k in self.terms)

    def is_zeta_bar_free(self) -> bool:
        m = self.dim
        return all(not any(k[m:]) for _, k in self.terms)

    def is_fibre_free(self) -> bool:
        return all(not any(k) for _, k in self.terms)

    def min_accuracy(self):
        return min((j.accuracy for j in self.terms.values()), default=INF)

    def function_coeffs(self) -> dict:
        """nu-power -> jet for a fibre-free series."""
        zero = (0,) * (2 * self.dim)
        return {r: j for (r, k), j in sorted(self.terms.items()) if k == zero}

    def sorted_items(self):
        return sorted(self.terms.items(),
                      key=lambda kv: (kv[0][0], grlex_key(kv[0][1])))

    # arithmetic

    def _check_dim(self, other):
        if other.dim != self.dim:
            raise DimensionMismatch(f"series dimensions differ: {self.dim} vs {other.dim}")

    def truncate(self, truncation) -> "SymbolSeries":
        if truncation >= self.truncation:
            return self
        return SymbolSeries._make(
            self.dim, {rk: j for rk, j in self.terms.items() if rk[0] <= truncation}, truncation)

    def __add__(self, other):
        if not isinstance(other, SymbolSeries):
            return NotImplemented
        self._check_dim(other)
        n = min(self.truncation, other.truncation)
        out = {rk: j for rk, j in self.terms.items() if rk[0] <= n}
        for rk, j in other.terms.items():
            if rk[0] <= n:
                _accumulate(out, rk, j)
        return SymbolSeries._make(self.dim, _prune(out), n)

    def __neg__(self):
        return SymbolSeries._make(self.dim, {rk: -j for rk, j in self.terms.items()},
                                  self.truncation)

    def __sub__(self, other):
        if not isinstance(other, SymbolSeries):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "SymbolSeries":
        c = Scalar.coerce(c)
        return SymbolSeries._make(self.dim, _prune({rk: j.scale(c) for rk, j in self.terms.items()}),
                                  self.truncation)

    def shift(self, k: int) -> "SymbolSeries":
        """Multiply by nu^k."""
        return SymbolSeries._make(self.dim, {(r + k, key): j for (r, key), j in self.terms.items()},
                                  self.truncation + k)

    def restrict_fiber_zero(self) -> "SymbolSeries":
        """Keep the fibre-free part (the symbol evaluated at zeta = zetabar = 0)."""
        zero = (0,) * (2 * self.dim)
        return SymbolSeries._make(self.dim, {rk: j for rk, j in self.terms.items() if rk[1] == zero},
                                  self.truncation)

    def zeta_positive_part(self) -> "SymbolSeries":
        zero = (0,) * (2 * self.dim)
        return SymbolSeries._make(self.dim, {rk: j for rk, j in self.terms.items() if rk[1] != zero},
                                  self.truncation)

    def __eq__(self, other):
        if not isinstance(other, SymbolSeries):
            return NotImplemented
        return (self.dim == other.dim and self.truncation == other.truncation
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.dim, self.truncation, frozenset(self.terms.items())))

    def agrees_with(self, other: "SymbolSeries") -> bool:
        """Equality modulo the common nu-truncation and jet accuracies."""
        return (self - other).is_zero()

    def __str__(self):
        if not self.terms:
            body = "0"
        else:
            chunks = []
            for (r, key), jet in self.sorted_items():
                mono = fibre_monomial_str(key, self.dim)
                nu = "" if r == 0 else ("nu" if r == 1 else f"nu^{r}")
                factors = [f for f in (nu, mono) if f]
                chunks.append(f"({jet})" + "".join("*" + f for f in factors))
            body = " + ".join(chunks)
        if self.truncation != INF:
            body += f" + O(nu^{self.truncation + 1})"
        return body

    def __repr__(self):
        return f"SymbolSeries({self.dim}, {self})"


def _low(x: SymbolSeries):
    return x.valuation


def series_compose(p: SymbolSeries, q: SymbolSeries) -> SymbolSeries:
    """nu-bilinear extension of :func:`compose`."""
    p._check_dim(q)
    n = min(p.truncation + _low(q), q.truncation + _low(p))
    out: dict = {}
    p_by: dict = {}
    q_by: dict = {}
    for (r, k), j in p.terms.items():
        p_by.setdefault(r, {})[k] = j
    for (r, k), j in q.terms.items():
        q_by.setdefault(r, {})[k] = j
    for s, pt in p_by.items():
        for t, qt in q_by.items():
            if s + t > n:
                continue
            part: dict = {}
            _compose_terms(pt, qt, part)
            for k, j in part.items():
                _accumulate(out, (s + t, k), j)
    return SymbolSeries._make(p.dim, _prune(out), n)


def apply_operator(F, g):
    """Apply the operator with symbol ``F`` to the function ``g``.

    ``F`` is a Symbol or SymbolSeries; ``g`` a Jet or a fibre-free
    SymbolSeries.  The result has the shape of ``g`` unless ``F`` carries nu,
    in which case a series is returned.
    """
    if isinstance(F, Symbol) and isinstance(g, Jet):
        return F.apply(g)
    if isinstance(F, Symbol):
        F = SymbolSeries.from_symbol(F)
    if isinstance(g, Jet):
        g = SymbolSeries.from_jet(g)
    if not g.is_fibre_free():
        raise ValueError("operators act on fibre-free series only")
    F._check_dim(g)
    n = min(F.truncation + _low(g), g.truncation + _low(F))
    gf = g.function_coeffs()
    out: dict = {}
    zero = (0,) * (2 * F.dim)
    for (s, key), c in F.terms.items():
        for t, h in gf.items():
            if s + t > n:
                continue
            _accumulate(out, (s + t, zero), c * h.derive_multi(key))
    return SymbolSeries._make(F.dim, _prune(out), n)


def restrict_fiber_zero(F: SymbolSeries) -> SymbolSeries:
    return F.restrict_fiber_zero()


def filtration_degree(X: SymbolSeries):
    """min over nonzero monomials of (nu-power - fibre degree); inf for zero."""
    return min((r - sum(k) for (r, k), j in X.terms.items() if not j.is_zero()), default=INF)


def check_E_membership(X: SymbolSeries):
    """Return ``(is_member, diagnostics)`` for the space of natural symbols.

    Diagnostics list every monomial whose nu-power is negative or smaller
    than its fibre degree.
    """
    bad = []
    for (r, k), j in X.sorted_items():
        if j.is_zero():
            continue
        if r < 0 or r - sum(k) < 0:
            bad.append({"nu": r, "fibre": list(k), "grading": r - sum(k)})
    return not bad, bad
