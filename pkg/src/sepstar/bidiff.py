"""Bidifferential coefficients C_r of the star product.

Since tau(L_f) depends linearly on f and only through antiholomorphic
derivatives of f, evaluating it on the monomials zbar^gamma and peeling off
lower-order contributions gives every coefficient c_{r,a,b} in

    C_r(f, g) = sum_{a, b} c_{r,a,b} (dbar^a f) (d^b g).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .engine import as_function, total_symbol_closed
from .jet import Jet, grlex_key
from .kaehler import ChartData, holomorphic_multi_indices
from .scalar import Scalar
from .symbols import SymbolSeries, _accumulate, _prune


def _factorial_multi(a: tuple) -> int:
    out = 1
    for e in a:
        out *= math.factorial(e)
    return out


@dataclass(frozen=True)
class BidiffTable:
    """``entries[r]`` is a list of (a, b, coeff): antiholomorphic multi-index
    on the first argument, holomorphic multi-index on the second."""

    dim: int
    nu_truncation: int
    entries: dict

    def apply(self, f, g) -> SymbolSeries:
        """Reconstruct f * g = sum_r nu^r C_r(f, g) from the table."""
        f = as_function(f, self.dim)
        g = as_function(g, self.dim)
        m = self.dim
        zero = (0,) * (2 * m)
        out: dict = {}
        n = min(self.nu_truncation, f.truncation + g.valuation, g.truncation + f.valuation)
        fc, gc = f.function_coeffs(), g.function_coeffs()
        for r, rows in self.entries.items():
            for s, fs in fc.items():
                for t, gt in gc.items():
                    if r + s + t > n:
                        continue
                    for a, b, c in rows:
                        df = fs.derive_multi((0,) * m + tuple(a))
                        dg = gt.derive_multi(tuple(b) + (0,) * m)
                        _accumulate(out, (r + s + t, zero), c * df * dg)
        return SymbolSeries._make(m, _prune(out), n)

    def max_orders(self) -> dict:
        """r -> (max |a|, max |b|) over nonzero entries."""
        return {r: (max((sum(a) for a, _, _ in rows), default=0),
                    max((sum(b) for _, b, _ in rows), default=0))
                for r, rows in self.entries.items()}

    def to_json(self) -> list:
        from .render import jet_terms_json
        out = []
        for r in sorted(self.entries):
            for a, b, c in sorted(self.entries[r], key=lambda e: (grlex_key(e[0]), grlex_key(e[1]))):
                out.append({"nu": r, "dbar_f": list(a), "d_g": list(b),
                            "coeff": jet_terms_json(c), "jet_accuracy":
                                None if c.accuracy == math.inf else c.accuracy})
        return out


def bidiff_coefficients(chart: ChartData, max_deg: int | None = None) -> BidiffTable:
    """Extract C_0..C_N by evaluating tau(L_f) on antiholomorphic monomials."""
    m = chart.dim
    n = chart.nu_truncation
    if max_deg is None:
        max_deg = n
    # coeffs[(r, b)][a] = c_{r,a,b}
    coeffs: dict = {}
    gammas = [g for d in range(max_deg + 1) for g in holomorphic_multi_indices(m, d)]
    gammas.sort(key=grlex_key)
    for gamma in gammas:
        f = Jet.monomial(m, (0,) * m, gamma)
        F = total_symbol_closed(chart, f)
        gfac = _factorial_multi(gamma)
        seen = set()
        for (r, key), jet in F.terms.items():
            b = key[:m]
            seen.add((r, b))
            coeffs.setdefault((r, b), {})[gamma] = _peel(coeffs, r, b, gamma, jet, gfac, m)
        for (r, b), known in coeffs.items():
            if (r, b) not in seen and gamma not in known:
                known[gamma] = _peel(coeffs, r, b, gamma, Jet.zero(m), gfac, m)
    entries: dict = {}
    for (r, b), by_a in coeffs.items():
        for a, c in by_a.items():
            if not c.is_zero():
                entries.setdefault(r, []).append((a, b, c))
    for r in entries:
        entries[r].sort(key=lambda e: (grlex_key(e[0]), grlex_key(e[1])))
    return BidiffTable(m, n, dict(sorted(entries.items())))


def _peel(coeffs, r, b, gamma, jet, gfac, m) -> Jet:
    """c_{r,gamma,b} = (F[zbar^gamma]_{r,b} - sum_{a<gamma} c_{r,a,b} dbar^a zbar^gamma) / gamma!."""
    rest = jet
    for a, c in coeffs.get((r, b), {}).items():
        if a == gamma or any(x > y for x, y in zip(a, gamma)):
            continue
        diff = tuple(y - x for x, y in zip(a, gamma))
        falling = _factorial_multi(gamma) // _factorial_multi(diff)
        rest = rest - (c * Jet.monomial(m, (0,) * m, diff)).scale(falling)
    return rest.scale(Scalar(1) / gfac)
