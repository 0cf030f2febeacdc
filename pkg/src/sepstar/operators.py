"""Operators on symbol series: the Gamma_r family, D, exp(+-D), the inverse
Euler operator, Q and the Neumann resolvent.

All of them act on :class:`SymbolSeries` whose nu-valuation is at least zero
and return results truncated at the chart's nu-order.  With respect to the
grading |nu| = 1, |zeta| = -1:

* Gamma_r raises the filtration by r - 1 and never produces fibre-free terms;
* D raises the nu-order and the zeta-degree by one each, so it preserves the
  filtration and exp(+-D) is a finite sum modulo nu^(N+1);
* Q raises the filtration by one, so the Neumann series for
  (1 - Gamma_1^{-1} Q)^{-1} stops after at most N + 1 terms.
"""

from __future__ import annotations

import math

from .errors import NotInEDoublePrime, TensorOrderUnavailable, ZetaBarPresent
from .kaehler import ChartData, holomorphic_multi_indices
from .scalar import Scalar
from .symbols import SymbolSeries, _accumulate, _prune, binom_multi


def _cap(chart: ChartData, bound):
    return min(bound, chart.nu_truncation)


def _require_zeta_bar_free(X: SymbolSeries):
    if not X.is_zeta_bar_free():
        raise ZetaBarPresent("operator defined on zetabar-free symbols only")


def euler(X: SymbolSeries) -> SymbolSeries:
    """Gamma_1 = zeta_k d/dzeta_k: multiply each monomial by its zeta-degree."""
    m = X.dim
    out = {}
    for (r, key), c in X.terms.items():
        d = sum(key[:m])
        if d:
            out[(r, key)] = c.scale(d) if d != 1 else c
    return SymbolSeries._make(m, out, X.truncation)


def _gamma_terms(chart: ChartData, X: SymbolSeries, orders, weight) -> SymbolSeries:
    m = X.dim
    n = _cap(chart, min(X.truncation, chart.nu_truncation + X.valuation))
    out: dict = {}
    for order in orders:
        if order > chart.r_max:
            raise TensorOrderUnavailable(f"chart caches tensors up to order {chart.r_max}, "
                                         f"Gamma_{order} requested")
    for (s, key), c in X.terms.items():
        if s > n:
            continue
        alpha = key[:m]
        deg = sum(alpha)
        for order in orders:
            if order > deg:
                continue
            w = weight(order)
            for mu in holomorphic_multi_indices(m, order):
                if any(a < b for a, b in zip(alpha, mu)):
                    continue
                b = binom_multi(alpha, mu) * w
                lowered = [a - u for a, u in zip(alpha, mu)]
                for k in range(m):
                    coeff = chart.gamma.get((mu, k))
                    if not coeff:
                        continue
                    raised = list(lowered)
                    raised[k] += 1
                    new_key = tuple(raised) + key[m:]
                    for t, g in coeff.items():
                        if s + t > n:
                            continue
                        _accumulate(out, (s + t, new_key), (c * g).scale(b))
    return SymbolSeries._make(m, _prune(out), n)


def gamma_op(chart: ChartData, r: int, X: SymbolSeries) -> SymbolSeries:
    """Gamma_r = G_{k_1..k_r lbar} G^{lbar k} zeta_k d^r/dzeta_{k_1}..dzeta_{k_r}."""
    if r < 1:
        raise ValueError("Gamma_r is defined for r >= 1")
    _require_zeta_bar_free(X)
    if r > chart.r_max:
        raise TensorOrderUnavailable(f"chart caches tensors up to order {chart.r_max}")
    if r == 1:
        return euler(X)
    # summing over ordered index tuples gives r!/mu! copies of each multiset,
    # and d^mu zeta^alpha = alpha!/(alpha-mu)!, hence the r! * binom weight
    return _gamma_terms(chart, X, (r,), math.factorial)


def gamma_tail(chart: ChartData, X: SymbolSeries) -> SymbolSeries:
    """sum_{r >= 2} Gamma_r / r! applied to X."""
    _require_zeta_bar_free(X)
    top = X.zeta_degree()
    if top < 2:
        return SymbolSeries.zero(X.dim, _cap(chart, X.truncation))
    return _gamma_terms(chart, X, tuple(range(2, top + 1)), lambda r: 1)


def d_op(chart: ChartData, X: SymbolSeries) -> SymbolSeries:
    """D = G^{lbar k} zeta_k d/dzbar^l."""
    m = X.dim
    # G^{-1} is known through nu^(N+1) and has valuation one
    n = _cap(chart, min(X.truncation + 1, chart.nu_truncation + 1 + X.valuation))
    out: dict = {}
    for (s, key), c in X.terms.items():
        if s + 1 > n:
            continue
        for l in range(m):
            dc = c.derive(l, conj=True)
            if dc.is_exact_zero():
                continue
            for k in range(m):
                new_key = key[:k] + (key[k] + 1,) + key[k + 1:]
                for t, g in chart.inverse[(l, k)].items():
                    if s + t > n:
                        continue
                    _accumulate(out, (s + t, new_key), dc * g)
    return SymbolSeries._make(m, _prune(out), n)


def exp_d(chart: ChartData, sign: int, X: SymbolSeries) -> SymbolSeries:
    """exp(sign * D) X as the finite sum of (sign D)^r / r! X."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    total = X.truncate(chart.nu_truncation)
    term = total
    r = 0
    while term.terms:
        r += 1
        term = d_op(chart, term).scale(Scalar(sign) / r)
        total = total + term
    return total


def euler_inverse(X: SymbolSeries) -> SymbolSeries:
    """Gamma_1^{-1} on the zeta-positive subspace."""
    m = X.dim
    out = {}
    for (r, key), c in X.terms.items():
        d = sum(key[:m])
        if d == 0:
            if not c.is_zero():
                raise NotInEDoublePrime(f"zeta-free term at nu^{r}, fibre {list(key)}")
            continue
        out[(r, key)] = c.scale(Scalar(1) / d) if d != 1 else c
    return SymbolSeries._make(m, out, X.truncation)


def q_op(chart: ChartData, X: SymbolSeries) -> SymbolSeries:
    """Q = -exp(-D) (sum_{r>=2} Gamma_r / r!) exp(D)."""
    _require_zeta_bar_free(X)
    inner = gamma_tail(chart, exp_d(chart, 1, X))
    return -exp_d(chart, -1, inner)


def neumann_resolve(chart: ChartData, X: SymbolSeries) -> SymbolSeries:
    """sum_r (Gamma_1^{-1} Q)^r X, which inverts 1 - Gamma_1^{-1} Q."""
    total = X.truncate(chart.nu_truncation)
    term = total
    for _ in range(chart.nu_truncation + 1):
        term = euler_inverse(q_op(chart, term))
        if not term.terms:
            break
        total = total + term
    return total
