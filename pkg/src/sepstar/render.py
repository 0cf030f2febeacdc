"""Canonical rendering of jets, series and reports.

Terms are always emitted sorted by (nu-power, fibre exponents grlex, base
exponents grlex), so identical inputs produce byte-identical output.
"""

from __future__ import annotations

import json

from .jet import INF, Jet
from .symbols import SymbolSeries, fibre_monomial_str


def _acc(value):
    return None if value == INF else value


def jet_terms_json(jet: Jet) -> list:
    m = jet.dim
    return [{"z": list(k[:m]), "zbar": list(k[m:]), "coeff": c.to_json()}
            for k, c in jet.sorted_items()]


def series_json(X: SymbolSeries, fibre: bool = True) -> list:
    m = X.dim
    out = []
    for (r, key), jet in X.sorted_items():
        for base, c in jet.sorted_items():
            rec = {"nu": r}
            if fibre:
                rec["zeta"] = list(key[:m])
                rec["zetabar"] = list(key[m:])
            rec["z"] = list(base[:m])
            rec["zbar"] = list(base[m:])
            rec["coeff"] = c.to_json()
            out.append(rec)
    return out


def accuracy_json(X: SymbolSeries, fibre: bool = True) -> list:
    """Trusted jet degree for every stored coefficient with finite accuracy."""
    m = X.dim
    out = []
    for (r, key), jet in X.sorted_items():
        if jet.accuracy == INF:
            continue
        rec = {"nu": r}
        if fibre:
            rec["zeta"] = list(key[:m])
            rec["zetabar"] = list(key[m:])
        rec["jet_accuracy"] = jet.accuracy
        out.append(rec)
    return out


def series_pretty(X: SymbolSeries) -> list:
    lines = []
    for (r, key), jet in X.sorted_items():
        mono = fibre_monomial_str(key, X.dim)
        label = f"nu^{r}" + (f" {mono}" if mono else "")
        lines.append(f"  {label}: {jet}")
    if not lines:
        lines.append("  0")
    if X.truncation != INF:
        lines.append(f"  + O(nu^{X.truncation + 1})")
    return lines


def series_block(X: SymbolSeries, fibre: bool = True) -> dict:
    return {"nu_truncation": _acc(X.truncation), "terms": series_json(X, fibre),
            "accuracy": accuracy_json(X, fibre)}


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=True) + "\n"


def render_report(result: dict, fmt: str = "json") -> str:
    """Render a command result dict; ``pretty`` uses the ``pretty`` lines if present."""
    if fmt == "json":
        return dumps({k: v for k, v in result.items() if k != "pretty"})
    if fmt == "pretty":
        lines = result.get("pretty")
        if lines is None:
            return dumps(result)
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")
