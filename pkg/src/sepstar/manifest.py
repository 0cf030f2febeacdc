"""Manifest files: one chart (a potential), named functions and truncation orders.

Format (JSON)::

    {
      "dimension": 1,
      "potential": [{"nu_power": -1, "z": [1], "zbar": [1], "re": "1", "im": "0"}],
      "functions": {"f": [{"nu_power": 0, "z": [0], "zbar": [1], "re": "1"}]},
      "orders": {"nu_truncation": 4, "jet_accuracy": 12}
    }

Coefficients are exact fraction strings; ``im`` defaults to ``"0"`` and
``jet_accuracy`` may be omitted to have it derived.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import BadManifest, BadPotential, InsufficientAccuracy
from .jet import Jet
from .kaehler import Potential
from .scalar import Scalar, fraction_str


@dataclass
class Manifest:
    dimension: int
    potential: dict
    functions: dict = field(default_factory=dict)
    nu_truncation: int = 4
    jet_accuracy: int | None = None

    def build_potential(self) -> Potential:
        return Potential(self.dimension, self.potential)

    def function(self, name: str) -> dict:
        if name not in self.functions:
            known = ", ".join(sorted(self.functions)) or "none"
            raise BadManifest(f"unknown function {name!r} (manifest defines: {known})")
        return self.functions[name]

    def max_degree(self) -> int:
        return max((j.degree() for fn in self.functions.values() for j in fn.values()), default=0)

    def resolved_jet_accuracy(self, nu_truncation: int | None = None, override: int | None = None
                              ) -> int:
        """Explicit accuracy if given (checked), else 2(N + 1) + max function degree."""
        n = self.nu_truncation if nu_truncation is None else nu_truncation
        minimum = n + 2
        t = override if override is not None else self.jet_accuracy
        if t is None:
            return 2 * (n + 1) + max(self.max_degree(), 0)
        if t < minimum:
            raise InsufficientAccuracy(
                f"jet accuracy {t} too small for nu-order {n}: need at least {minimum}")
        return t


def _fail(path: str, message: str):
    raise BadManifest(f"{path}: {message}")


def _int(value, path: str, minimum=None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        _fail(path, f"expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        _fail(path, f"must be >= {minimum}, got {value}")
    return value


def _terms(raw, dim: int, path: str, min_power: int) -> dict:
    if not isinstance(raw, list):
        _fail(path, "expected a list of term records")
    acc: dict = {}
    for i, term in enumerate(raw):
        here = f"{path}[{i}]"
        if not isinstance(term, dict):
            _fail(here, "expected an object")
        unknown = set(term) - {"nu_power", "z", "zbar", "re", "im"}
        if unknown:
            _fail(here, f"unknown fields {sorted(unknown)}")
        power = _int(term.get("nu_power", 0), f"{here}.nu_power", min_power)
        exps = []
        for name in ("z", "zbar"):
            e = term.get(name, [0] * dim)
            if not isinstance(e, list) or len(e) != dim:
                _fail(f"{here}.{name}", f"expected a list of {dim} exponents")
            exps.extend(_int(x, f"{here}.{name}", 0) for x in e)
        try:
            c = Scalar(term.get("re", "0"), term.get("im", "0"))
        except (TypeError, ValueError) as exc:
            _fail(here, f"bad coefficient: {exc}")
        key = tuple(exps)
        bucket = acc.setdefault(power, {})
        bucket[key] = bucket[key] + c if key in bucket else c
    return {r: Jet(dim, t) for r, t in sorted(acc.items())}


def parse_manifest(text: str) -> Manifest:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BadManifest(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        _fail("$", "expected a JSON object")
    unknown = set(data) - {"dimension", "potential", "functions", "orders"}
    if unknown:
        _fail("$", f"unknown fields {sorted(unknown)}")
    if "dimension" not in data:
        _fail("$.dimension", "missing")
    dim = _int(data["dimension"], "$.dimension", 1)
    if "potential" not in data:
        _fail("$.potential", "missing")
    potential = _terms(data["potential"], dim, "$.potential", -1)
    if -1 not in potential or potential[-1].is_zero():
        _fail("$.potential", "needs at least one nonzero term with nu_power -1")
    try:
        Potential(dim, potential)
    except BadPotential as exc:
        _fail("$.potential", str(exc))
    functions_raw = data.get("functions", {})
    if not isinstance(functions_raw, dict):
        _fail("$.functions", "expected an object mapping names to term lists")
    functions = {name: _terms(raw, dim, f"$.functions.{name}", 0)
                 for name, raw in functions_raw.items()}
    orders = data.get("orders", {})
    if not isinstance(orders, dict):
        _fail("$.orders", "expected an object")
    unknown = set(orders) - {"nu_truncation", "jet_accuracy"}
    if unknown:
        _fail("$.orders", f"unknown fields {sorted(unknown)}")
    n = _int(orders.get("nu_truncation", 4), "$.orders.nu_truncation", 0)
    t = orders.get("jet_accuracy")
    if t is not None:
        t = _int(t, "$.orders.jet_accuracy", 0)
    return Manifest(dim, potential, functions, n, t)


def _terms_json(series: dict, dim: int) -> list:
    out = []
    for r, jet in sorted(series.items()):
        for key, c in jet.sorted_items():
            out.append({"nu_power": r, "z": list(key[:dim]), "zbar": list(key[dim:]),
                        "re": fraction_str(c.re), "im": fraction_str(c.im)})
    return out


def render_manifest(manifest: Manifest) -> str:
    orders = {"nu_truncation": manifest.nu_truncation}
    if manifest.jet_accuracy is not None:
        orders["jet_accuracy"] = manifest.jet_accuracy
    data = {
        "dimension": manifest.dimension,
        "potential": _terms_json(manifest.potential, manifest.dimension),
        "functions": {name: _terms_json(fn, manifest.dimension)
                      for name, fn in sorted(manifest.functions.items())},
        "orders": orders,
    }
    return json.dumps(data, indent=2) + "\n"
