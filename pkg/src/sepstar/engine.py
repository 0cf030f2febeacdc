"""Total symbol of the left star-multiplication operator and the star product.

Two independent routes to tau(L_f):

* :func:`total_symbol_closed` evaluates F = exp(D) (1 - Gamma_1^{-1} Q)^{-1} f;
* :func:`total_symbol_recursive` solves sum_{r>=1} Gamma_r F / r! = D F
  component by component, with its own contraction loops, and never touches
  exp(D), Q or the Neumann series.  It serves as the oracle for the first.
"""

from __future__ import annotations

from .errors import DimensionMismatch
from .jet import Jet
from .kaehler import ChartData, holomorphic_multi_indices
from .operators import exp_d, neumann_resolve
from .scalar import Scalar
from .symbols import SymbolSeries, _prune, apply_operator, binom_multi


def as_function(value, dim: int | None = None) -> SymbolSeries:
    """Coerce a jet or a fibre-free series to a function series (nu-valuation >= 0)."""
    if isinstance(value, Jet):
        value = SymbolSeries.from_jet(value)
    if not isinstance(value, SymbolSeries):
        raise TypeError("expected a Jet or SymbolSeries")
    if dim is not None and value.dim != dim:
        raise DimensionMismatch(f"function of dimension {value.dim} on a chart of dimension {dim}")
    if not value.is_fibre_free():
        raise ValueError("a function must not depend on fibre variables")
    if value.terms and value.valuation < 0:
        raise ValueError("functions must have non-negative nu-valuation")
    return value


def total_symbol_closed(chart: ChartData, f) -> SymbolSeries:
    """tau(L_f) = exp(D) (1 - Gamma_1^{-1} Q)^{-1} f, modulo nu^(N+1)."""
    f = as_function(f, chart.dim)
    return exp_d(chart, 1, neumann_resolve(chart, f))


def total_symbol_recursive(chart: ChartData, f) -> SymbolSeries:
    """tau(L_f) from the defining equation, solved order by order.

    At nu^r and zeta-degree d the equation reads

        d F_r^(d) = (D F)_r^(d) - sum_{s>=2} (Gamma_s F / s!)_r^(d),

    and the right side only involves components of lower nu-order, or of the
    same order and higher zeta-degree, so descending d within each r works.
    """
    f = as_function(f, chart.dim)
    m = chart.dim
    n = min(chart.nu_truncation, f.truncation)
    zero = (0,) * (2 * m)
    # known[r][d] -> {fibre key: jet}
    known: dict = {}
    f_coeffs = f.function_coeffs()
    for r in range(0, n + 1):
        known[r] = {0: {zero: f_coeffs[r]} if r in f_coeffs else {}}
        for d in range(r, 0, -1):
            rhs: dict = {}
            # D = G^{lbar k} zeta_k d/dzbar^l consumes degree d-1 at lower order
            for t in range(1, r + 1):
                s = r - t
                for key, c in known.get(s, {}).get(d - 1, {}).items():
                    for l in range(m):
                        dc = c.derive(l, conj=True)
                        if dc.is_exact_zero():
                            continue
                        for k in range(m):
                            g = chart.inverse[(l, k)].get(t)
                            if g is None:
                                continue
                            new_key = key[:k] + (key[k] + 1,) + key[k + 1:]
                            _add(rhs, new_key, dc * g)
            # Gamma_s / s! consumes degree d + s - 1 at order <= r
            for order in range(2, r + 2):
                src_deg = d + order - 1
                for t in range(0, r + 1):
                    s = r - t
                    for key, c in known.get(s, {}).get(src_deg, {}).items():
                        alpha = key[:m]
                        for mu in holomorphic_multi_indices(m, order):
                            if any(a < b for a, b in zip(alpha, mu)):
                                continue
                            w = binom_multi(alpha, mu)
                            for k in range(m):
                                g = chart.gamma.get((mu, k), {}).get(t)
                                if g is None:
                                    continue
                                new = [a - u for a, u in zip(alpha, mu)]
                                new[k] += 1
                                _add(rhs, tuple(new) + key[m:], -(c * g).scale(w))
            inv_d = Scalar(1) / d
            known[r][d] = _prune({key: j.scale(inv_d) for key, j in rhs.items()})
    terms = {}
    for r, by_deg in known.items():
        for by_key in by_deg.values():
            for key, j in by_key.items():
                terms[(r, key)] = j
    return SymbolSeries(m, terms, n)


def _add(out: dict, key, jet):
    prev = out.get(key)
    out[key] = jet if prev is None else prev + jet


def star(chart: ChartData, f, g) -> SymbolSeries:
    """f * g = L_f g, modulo nu^(N+1)."""
    g = as_function(g, chart.dim)
    return apply_operator(total_symbol_closed(chart, f), g)
