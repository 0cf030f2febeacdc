"""Chart data derived from a formal potential.

The potential is a nu-Laurent series Phi = (1/nu) Phi_{-1} + Phi_0 + nu Phi_1 + ...
of jets.  From it we cache the mixed partials

    G[mu, l] = d^{|mu|+1} Phi / dz^mu dzbar^l      (mu a holomorphic multi-index)

the inverse G^{lbar k} of the metric G_{k lbar}, and the contractions

    Gamma[mu, k] = sum_l G[mu, l] G^{lbar k}

that every operator on symbols is built from.  A nu-series of jets is a plain
``dict`` from nu-power to :class:`Jet`.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Mapping

from .errors import BadPotential, DegenerateMetric, InsufficientAccuracy
from .jet import INF, Jet
from .scalar import ONE, ZERO, Scalar


@functools.lru_cache(maxsize=None)
def holomorphic_multi_indices(dim: int, order: int) -> tuple:
    """Multi-indices mu in N^dim with |mu| = order, in reverse lexicographic order."""
    out = []
    for combo in itertools.combinations_with_replacement(range(dim), order):
        mu = [0] * dim
        for k in combo:
            mu[k] += 1
        out.append(tuple(mu))
    return tuple(sorted(set(out), reverse=True))


def nseries_mul(a: Mapping[int, Jet], b: Mapping[int, Jet], max_order) -> dict:
    out: dict = {}
    for s, x in a.items():
        for t, y in b.items():
            if s + t > max_order:
                continue
            p = x * y
            out[s + t] = out[s + t] + p if s + t in out else p
    return {r: j for r, j in out.items() if not j.is_exact_zero()}


def nseries_add(a: Mapping[int, Jet], b: Mapping[int, Jet]) -> dict:
    out = dict(a)
    for r, j in b.items():
        out[r] = out[r] + j if r in out else j
    return {r: j for r, j in out.items() if not j.is_exact_zero()}


def nseries_is_zero(a: Mapping[int, Jet]) -> bool:
    return all(j.is_zero() for j in a.values())


@dataclass(frozen=True)
class Potential:
    """Phi = sum_r nu^r Phi_r with r >= -1 and Phi_{-1} nonzero."""

    dim: int
    series: Mapping[int, Jet]

    def __post_init__(self):
        series = {}
        for r, jet in self.series.items():
            if not isinstance(r, int) or r < -1:
                raise BadPotential(f"potential nu-power {r!r} is below -1")
            if jet.dim != self.dim:
                raise BadPotential(f"potential term nu^{r} has dimension {jet.dim}, expected {self.dim}")
            if not jet.is_exact_zero():
                series[r] = jet
        if -1 not in series or series[-1].is_zero():
            raise BadPotential("potential has no nonzero nu^-1 part")
        object.__setattr__(self, "series", dict(sorted(series.items())))

    @classmethod
    def standard(cls, phi_minus_one: Jet) -> "Potential":
        """The potential (1/nu) Phi_{-1} of the trivial deformation."""
        return cls(phi_minus_one.dim, {-1: phi_minus_one})

    @property
    def is_standard(self) -> bool:
        return set(self.series) == {-1}

    def zbar_gradient(self, l: int) -> dict:
        """nu-series of dPhi/dzbar^l."""
        return {r: j.derive(l, conj=True) for r, j in self.series.items()}


def derivative_tensors(potential: Potential, r_max: int, nu_max=INF) -> dict:
    """Table (mu, l) -> nu-series of d^{|mu|+1} Phi / dz^mu dzbar^l for 1 <= |mu| <= r_max.

    Symmetric in the holomorphic slots by construction: each multiset is
    stored once, keyed by its multiplicity vector ``mu``.
    """
    m = potential.dim
    table = {}
    for l in range(m):
        base = {r: j.derive(l, conj=True) for r, j in potential.series.items() if r <= nu_max}
        for order in range(1, r_max + 1):
            for mu in holomorphic_multi_indices(m, order):
                key = tuple(mu) + (0,) * m
                entry = {}
                for r, j in base.items():
                    d = j.derive_multi(key)
                    if not d.is_exact_zero():
                        entry[r] = d
                table[(mu, l)] = entry
    return table


def _constant_inverse(a: list[list[Scalar]]) -> list[list[Scalar]]:
    """Gauss-Jordan inverse of a square matrix of exact scalars."""
    n = len(a)
    work = [list(row) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col]), None)
        if pivot is None:
            raise DegenerateMetric("metric at the base point is singular")
        work[col], work[pivot] = work[pivot], work[col]
        inv = work[col][col].inverse()
        work[col] = [x * inv for x in work[col]]
        for r in range(n):
            if r != col and work[r][col]:
                f = work[r][col]
                work[r] = [x - f * y for x, y in zip(work[r], work[col])]
    return [row[n:] for row in work]


def _matmul(a, b, max_order):
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc: dict = {}
            for k in range(n):
                acc = nseries_add(acc, nseries_mul(a[i][k], b[k][j], max_order))
            row.append(acc)
        out.append(row)
    return out


def inverse_metric(metric: Mapping[tuple, Mapping[int, Jet]], dim: int, jet_accuracy,
                   nu_truncation: int) -> dict:
    """Inverse of the metric G_{k lbar}, as a table (l, k) -> nu-series.

    ``metric`` maps (k, l) to the nu-series of G_{k lbar} (valuation -1).
    Writing nu G = A + E with A the constant matrix at the base point, the
    inverse is nu * sum_n (-A^{-1} E)^n A^{-1}; each factor E raises
    (nu-order + jet degree) by one, so the sum is finite after truncation.
    The result is known through nu^(nu_truncation + 1).
    """
    m_order = nu_truncation  # nu G inverted through nu^N gives G^{-1} through nu^(N+1)
    scaled = [[{r + 1: j for r, j in metric.get((k, l), {}).items() if r + 1 <= m_order}
               for l in range(dim)] for k in range(dim)]
    constant_jets = all(j.degree() <= 0 for row in scaled for e in row for j in e.values())
    acc = INF if constant_jets else jet_accuracy
    if acc != INF:
        scaled = [[{r: j.truncate(acc) for r, j in e.items()} for e in row] for row in scaled]

    zero_key = (0,) * (2 * dim)
    a0 = []
    for k in range(dim):
        row = []
        for l in range(dim):
            j0 = scaled[k][l].get(0)
            if j0 is not None and j0.accuracy == 0:
                raise InsufficientAccuracy("metric constant term is not trusted")
            row.append(j0.terms.get(zero_key, ZERO) if j0 is not None else ZERO)
        a0.append(row)
    a0_inv = _constant_inverse(a0)
    a0_inv_jets = [[{0: Jet.constant(dim, c, acc)} if c else {} for c in row] for row in a0_inv]

    e = [[{} for _ in range(dim)] for _ in range(dim)]
    for k in range(dim):
        for l in range(dim):
            entry = dict(scaled[k][l])
            if a0[k][l]:
                entry = nseries_add(entry, {0: Jet.constant(dim, -a0[k][l], acc)})
            e[k][l] = entry
    step = _matmul(a0_inv_jets, e, m_order)
    step = [[{r: -j for r, j in x.items()} for x in row] for row in step]

    total = a0_inv_jets
    term = a0_inv_jets
    for _ in range(10_000):
        term = _matmul(step, term, m_order)
        if all(nseries_is_zero(x) for row in term for x in row):
            break
        total = [[nseries_add(x, y) for x, y in zip(r1, r2)] for r1, r2 in zip(total, term)]
    else:  # pragma: no cover - guarded by the filtration argument
        raise RuntimeError("inverse metric expansion failed to terminate")

    # total[l][k] inverts nu G; shift by nu to invert G itself
    out = {}
    for l in range(dim):
        for k in range(dim):
            series = {r + 1: j.truncate(acc) if acc != INF else j for r, j in total[l][k].items()}
            out[(l, k)] = {r: j for r, j in series.items() if not j.is_exact_zero()}
    return out


@dataclass(frozen=True)
class ChartData:
    """Immutable geometric input for every operator on a single chart."""

    potential: Potential
    nu_truncation: int
    jet_accuracy: object
    r_max: int
    tensors: dict = field(repr=False)
    inverse: dict = field(repr=False)
    gamma: dict = field(repr=False)

    @property
    def dim(self) -> int:
        return self.potential.dim

    def metric(self) -> dict:
        m = self.dim
        out = {}
        for k in range(m):
            mu = tuple(1 if i == k else 0 for i in range(m))
            for l in range(m):
                out[(k, l)] = self.tensors[(mu, l)]
        return out

    def metric_defect(self) -> dict:
        """(l, p) -> nu-series of sum_j G^{lbar j} G_{j pbar} - delta_{lp}."""
        m = self.dim
        g = self.metric()
        out = {}
        for l in range(m):
            for p in range(m):
                acc: dict = {}
                for j in range(m):
                    acc = nseries_add(acc, nseries_mul(self.inverse[(l, j)], g[(j, p)],
                                                       self.nu_truncation))
                if l == p:
                    acc = nseries_add(acc, {0: Jet.constant(m, -1)})
                out[(l, p)] = acc
        return out

    def gamma_coeff(self, mu: tuple, k: int) -> dict:
        return self.gamma.get((mu, k), {})


def contract_gamma(tensors: dict, inverse: dict, dim: int, r_max: int, nu_truncation: int) -> dict:
    """(mu, k) -> nu-series of sum_l G[mu, l] G^{lbar k}, through nu^N."""
    out = {}
    for order in range(1, r_max + 1):
        for mu in holomorphic_multi_indices(dim, order):
            for k in range(dim):
                acc: dict = {}
                for l in range(dim):
                    acc = nseries_add(acc, nseries_mul(tensors[(mu, l)], inverse[(l, k)],
                                                       nu_truncation))
                if acc:
                    out[(mu, k)] = acc
    return out


def chart_build(potential: Potential, nu_truncation: int, jet_accuracy, r_max: int | None = None
                ) -> ChartData:
    """Validate a potential and cache every tensor the operators need."""
    if not isinstance(potential, Potential):
        raise BadPotential("chart_build expects a Potential")
    if nu_truncation < 0:
        raise ValueError("nu truncation must be non-negative")
    if r_max is None:
        r_max = nu_truncation + 1
    dim = potential.dim
    tensors = derivative_tensors(potential, r_max, nu_max=nu_truncation)
    chart_metric = {}
    for k in range(dim):
        mu = tuple(1 if i == k else 0 for i in range(dim))
        for l in range(dim):
            chart_metric[(k, l)] = tensors[(mu, l)]
    inverse = inverse_metric(chart_metric, dim, jet_accuracy, nu_truncation)
    gamma = contract_gamma(tensors, inverse, dim, r_max, nu_truncation)
    return ChartData(potential, nu_truncation, jet_accuracy, r_max, tensors, inverse, gamma)
