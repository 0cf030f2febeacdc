"""Exact verification routines with located diagnostics.

Every check compares two exact computations modulo the common nu-truncation
and jet accuracy.  A failure names the check, its index where one applies,
and the first offending monomial in canonical order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .engine import as_function, star, total_symbol_closed
from .jet import INF, Jet
from .kaehler import ChartData, holomorphic_multi_indices
from .operators import (
    d_op,
    euler,
    euler_inverse,
    exp_d,
    gamma_op,
    neumann_resolve,
    q_op,
)
from .scalar import Scalar
from .symbols import (
    SymbolSeries,
    _accumulate,
    _prune,
    binom_multi,
    check_E_membership,
    filtration_degree,
    series_compose,
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass
class Report:
    title: str
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, **detail) -> CheckResult:
        result = CheckResult(name, bool(passed), detail)
        self.checks.append(result)
        return result

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def extend(self, other: "Report"):
        self.checks.extend(other.checks)

    def to_json(self) -> dict:
        return {"title": self.title, "passed": self.passed,
                "checks": [c.to_json() for c in self.checks]}


def monomial_record(dim: int, r: int, fibre: tuple, base: tuple, coeff: Scalar) -> dict:
    return {"nu": r, "zeta": list(fibre[:dim]), "zetabar": list(fibre[dim:]),
            "z": list(base[:dim]), "zbar": list(base[dim:]), "coeff": coeff.to_json()}


def first_offender(X: SymbolSeries):
    """The first nonzero monomial of ``X`` in canonical order, or None."""
    for (r, key), jet in X.sorted_items():
        for base, c in jet.sorted_items():
            return monomial_record(X.dim, r, key, base, c)
    return None


def _residual(report: Report, name: str, diff: SymbolSeries, **where) -> CheckResult:
    bad = first_offender(diff)
    detail = dict(where)
    detail["nu_truncation"] = diff.truncation if diff.truncation != INF else None
    acc = diff.min_accuracy()
    detail["jet_accuracy"] = acc if acc != INF else None
    if bad is not None:
        detail["offender"] = bad
    return report.add(name, bad is None, **detail)


def rho(chart: ChartData, l: int) -> SymbolSeries:
    """Symbol of R_{nu dPhi/dzbar^l}: nu dPhi/dzbar^l + nu zetabar_l."""
    m = chart.dim
    zero = (0,) * (2 * m)
    bar = [0] * (2 * m)
    bar[m + l] = 1
    terms = {(r + 1, zero): j for r, j in chart.potential.zbar_gradient(l).items()}
    terms[(1, tuple(bar))] = Jet.constant(m)
    return SymbolSeries(m, terms)


def contracted_rho_residual(chart: ChartData, F: SymbolSeries, l: int) -> SymbolSeries:
    """sum_{|mu|>=1} (1/mu!) G[mu, l] d^mu_zeta F - dF/dzbar^l (nu-Laurent)."""
    m = chart.dim
    n = chart.nu_truncation - 1
    out: dict = {}
    for (s, key), c in F.terms.items():
        alpha = key[:m]
        for order in range(1, sum(alpha) + 1):
            for mu in holomorphic_multi_indices(m, order):
                if any(a < b for a, b in zip(alpha, mu)):
                    continue
                w = binom_multi(alpha, mu)
                new_key = tuple(a - u for a, u in zip(alpha, mu)) + key[m:]
                for t, g in chart.tensors[(mu, l)].items():
                    if s + t > n:
                        continue
                    _accumulate(out, (s + t, new_key), (c * g).scale(w))
        if s <= n:
            _accumulate(out, (s, key), -c.derive(l, conj=True))
    return SymbolSeries._make(m, _prune(out), min(n, F.truncation - 1))


def verify_symbol_conditions(chart: ChartData, F: SymbolSeries, f) -> Report:
    """Check the three conditions that characterize tau(L_f), plus naturalness.

    L_f 1 = f; L_f commutes with multiplication by zbar^l; L_f commutes with
    R_{nu dPhi/dzbar^l}, whose symbol is rho_l = nu dPhi/dzbar^l + nu zetabar_l.
    The last one is also checked in its contracted form against the G-tensors.
    """
    f = as_function(f, chart.dim)
    m = chart.dim
    report = Report("symbol conditions")
    report.add("zetabar-free", F.is_zeta_bar_free())
    member, bad = check_E_membership(F)
    report.add("natural", member, violations=bad[:3])
    _residual(report, "F at zeta=0 equals f", F.restrict_fiber_zero() - f)
    for l in range(m):
        zb = SymbolSeries.from_jet(Jet.zbar(m, l))
        _residual(report, "commutes with zbar^l",
                  series_compose(F, zb) - series_compose(zb, F), l=l)
    for l in range(m):
        r_l = rho(chart, l)
        _residual(report, "commutes with R_rho_l",
                  series_compose(F, r_l) - series_compose(r_l, F), l=l)
    for l in range(m):
        _residual(report, "contracted rho_l equation", contracted_rho_residual(chart, F, l), l=l)
    return report


def perturb(F: SymbolSeries, r: int, fibre: tuple, jet: Jet) -> SymbolSeries:
    """Negative control: add ``jet`` to the coefficient of nu^r fibre^key."""
    return F + SymbolSeries(F.dim, {(r, tuple(fibre)): jet}, F.truncation)


def verify_associativity(chart: ChartData, f, g, h) -> Report:
    report = Report("associativity")
    lhs = star(chart, star(chart, f, g), h)
    rhs = star(chart, f, star(chart, g, h))
    _residual(report, "(f*g)*h = f*(g*h)", lhs - rhs)
    return report


def random_jet(dim: int, rng: random.Random, max_deg: int = 2, max_terms: int = 3,
               complex_coeffs: bool = True) -> Jet:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        deg = rng.randint(0, max_deg)
        key = [0] * (2 * dim)
        for _ in range(deg):
            key[rng.randrange(2 * dim)] += 1
        re = Scalar(rng.randint(-3, 3)) / rng.randint(1, 3)
        im = Scalar(rng.randint(-2, 2)) if complex_coeffs and rng.random() < 0.3 else Scalar(0)
        terms[tuple(key)] = re + im * Scalar(0, 1)
    jet = Jet(dim, terms)
    return jet if jet.terms else Jet.constant(dim, 1)


def random_element(dim: int, nu_truncation: int, rng: random.Random, max_deg: int = 2
                   ) -> SymbolSeries:
    """Random zetabar-free member of the natural space: nu^r zeta^a with |a| <= r."""
    terms = {}
    for r in range(nu_truncation + 1):
        for _ in range(rng.randint(0, 2)):
            d = rng.randint(0, r)
            key = [0] * (2 * dim)
            for _ in range(d):
                key[rng.randrange(dim)] += 1
            terms[(r, tuple(key))] = random_jet(dim, rng, max_deg)
    X = SymbolSeries(dim, terms, nu_truncation)
    if X.is_zero():
        X = SymbolSeries.from_jet(random_jet(dim, rng, max_deg), 0, nu_truncation)
    return X


def random_function(dim: int, rng: random.Random, max_deg: int = 3) -> Jet:
    return random_jet(dim, rng, max_deg)


def _lemma_checks(chart: ChartData, X: SymbolSeries, report: Report, i: int):
    ex = exp_d(chart, 1, X)
    report_residual = lambda name, diff: _residual(report, name, diff, sample=i)  # noqa: E731
    report_residual("exp(-D) exp(D) X = X", exp_d(chart, -1, ex) - X)
    report_residual("exp(D) exp(-D) X = X", exp_d(chart, 1, exp_d(chart, -1, X)) - X)
    report_residual("(exp(D) - 1) X in E''", (ex - X).restrict_fiber_zero())
    x2 = X.zeta_positive_part()
    report_residual("exp(D) preserves E''", exp_d(chart, 1, x2).restrict_fiber_zero())
    report_residual("(Gamma_1 - D) X = exp(D) Gamma_1 exp(-D) X",
                    (euler(X) - d_op(chart, X))
                    - exp_d(chart, 1, euler(exp_d(chart, -1, X))))
    dx = d_op(chart, X)
    report_residual("[Gamma_1, D] X = D X", euler(dx) - d_op(chart, euler(X)) - dx)

    p = filtration_degree(X)
    for r in range(2, max(X.zeta_degree(), 2) + 1):
        gx = gamma_op(chart, r, X)
        report.add(f"Gamma_{r} raises filtration by {r - 1}", filtration_degree(gx) >= p + r - 1,
                   sample=i, before=_f(p), after=_f(filtration_degree(gx)))
        report_residual(f"Gamma_{r} maps into E''", gx.restrict_fiber_zero())
    qx = q_op(chart, X)
    report.add("Q raises filtration by 1", filtration_degree(qx) >= p + 1,
               sample=i, before=_f(p), after=_f(filtration_degree(qx)))
    report_residual("Q maps into E''", qx.restrict_fiber_zero())
    report.add("D respects filtration", filtration_degree(dx) >= p, sample=i)
    report.add("exp(D) respects filtration", filtration_degree(ex) >= p, sample=i)
    resolved = neumann_resolve(chart, X)
    report_residual("(1 - Gamma_1^{-1} Q) resolvent X = X",
                    resolved - euler_inverse(q_op(chart, resolved)) - X)


def _f(p):
    return None if p == INF else p


def verify_lemmas(chart: ChartData, sample_count: int = 20, seed: int = 0,
                  nu_truncation: int | None = None) -> Report:
    """Seeded random checks of the operator identities behind the closed formula."""
    n = chart.nu_truncation if nu_truncation is None else min(nu_truncation, chart.nu_truncation)
    rng = random.Random(seed)
    report = Report("lemmas")
    for i in range(sample_count):
        X = random_element(chart.dim, n, rng)
        _lemma_checks(chart, X, report, i)
        # the inhomogeneous equation for H = exp(-D) F - f
        f = as_function(SymbolSeries.function(
            chart.dim, {r: random_jet(chart.dim, rng) for r in range(rng.randint(1, 2))}, n))
        F = total_symbol_closed(chart, f)
        H = exp_d(chart, -1, F) - f
        _residual(report, "exp(-D) F - f lies in E''", H.restrict_fiber_zero(), sample=i)
        _residual(report, "(Gamma_1 - Q) H = Q f",
                  (euler(H) - q_op(chart, H)) - q_op(chart, f), sample=i)
    return _collapse(report)


def _collapse(report: Report) -> Report:
    """Merge repeated checks into one line each, keeping the first failure."""
    merged: dict = {}
    order = []
    for c in report.checks:
        if c.name not in merged:
            merged[c.name] = CheckResult(c.name, True, {"samples": 0})
            order.append(c.name)
        m = merged[c.name]
        m.detail["samples"] += 1
        if not c.passed and m.passed:
            m.passed = False
            m.detail["first_failure"] = c.detail
    return Report(report.title, [merged[n] for n in order])


def c1(chart: ChartData, f: Jet, g: Jet) -> Jet:
    """C_1(f, g) for nu-independent f and g."""
    return star(chart, f, g).coefficient(1).restrict_fiber_zero()


def verify_structure(chart: ChartData, f: Jet, g: Jet, h: Jet, index: int = 0) -> Report:
    """C_0 = fg, and B(f, g) = C_1(f, g) - C_1(g, f) is antisymmetric and Leibniz."""
    report = Report("bidifferential structure")
    fg = star(chart, f, g)
    c0 = fg.coefficient(0).restrict_fiber_zero()
    _residual(report, "C_0(f, g) = fg", SymbolSeries.from_jet(c0 - f * g), sample=index)

    def bracket(a, b):
        return c1(chart, a, b) - c1(chart, b, a)

    b_fg, b_gf = bracket(f, g), bracket(g, f)
    _residual(report, "B antisymmetric", SymbolSeries.from_jet(b_fg + b_gf), sample=index)
    left = bracket(f * h, g) - (f * bracket(h, g) + h * b_fg)
    _residual(report, "B Leibniz in first argument", SymbolSeries.from_jet(left), sample=index)
    right = bracket(f, g * h) - (g * bracket(f, h) + h * b_fg)
    _residual(report, "B Leibniz in second argument", SymbolSeries.from_jet(right), sample=index)
    report.add("B on constants vanishes",
               bracket(Jet.constant(chart.dim), g).is_zero(), sample=index)
    return report


def c1_coordinate_form(chart: ChartData, f: Jet, g: Jet) -> Jet:
    """sum g^{lbar k} (dbar_l f d_k g - dbar_l g d_k f), g^{lbar k} = nu^1 part of G^{-1}."""
    m = chart.dim
    out = Jet.zero(m)
    for l in range(m):
        for k in range(m):
            ginv = chart.inverse[(l, k)].get(1)
            if ginv is None:
                continue
            out = out + ginv * (f.derive(l, conj=True) * g.derive(k)
                                - g.derive(l, conj=True) * f.derive(k))
    return out


def verify_filtration(chart: ChartData, F: SymbolSeries) -> Report:
    report = Report("filtration")
    member, bad = check_E_membership(F)
    report.add("tau(L_f) in E", member, filtration=_f(filtration_degree(F)), violations=bad[:3])
    report.add("tau(L_f) zetabar-free", F.is_zeta_bar_free())
    return report
