"""Manifest parsing and the command line interface."""

from __future__ import annotations

import json

import pytest

from sepstar.cli import main
from sepstar.errors import BadManifest, InsufficientAccuracy
from sepstar.manifest import parse_manifest, render_manifest
from sepstar.render import series_json
from sepstar.symbols import SymbolSeries

from conftest import MANIFESTS


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


@pytest.mark.parametrize("name", ["flat", "quartic", "deformed", "indefinite"])
def test_manifest_round_trip(name):
    text = (MANIFESTS / f"{name}.json").read_text()
    m = parse_manifest(text)
    again = parse_manifest(render_manifest(m))
    assert again == m
    assert render_manifest(again) == render_manifest(m)


def test_manifest_diagnostics():
    with pytest.raises(BadManifest, match=r"\$\.dimension"):
        parse_manifest('{"potential": []}')
    with pytest.raises(BadManifest, match="nu_power -1"):
        parse_manifest('{"dimension": 1, "potential": [{"nu_power": 0, "z": [1], "zbar": [1], "re": "1"}]}')
    with pytest.raises(BadManifest, match=r"functions\.f\[0\]\.z"):
        parse_manifest('{"dimension": 1, "potential": [{"nu_power": -1, "z": [1], "zbar": [1], "re": "1"}],'
                       ' "functions": {"f": [{"z": [1, 2]}]}}')
    with pytest.raises(BadManifest, match="line 1"):
        parse_manifest("{")


def test_accuracy_resolution():
    m = parse_manifest((MANIFESTS / "flat.json").read_text())
    assert m.resolved_jet_accuracy(4) == 2 * 5 + m.max_degree()
    assert m.resolved_jet_accuracy(4, 6) == 6
    with pytest.raises(InsufficientAccuracy):
        m.resolved_jet_accuracy(4, 5)


def test_star_command(capsys):
    code, out = run(capsys, "star", "--manifest", str(MANIFESTS / "flat.json"), "-f", "f", "-g", "g")
    assert code == 0
    data = json.loads(out)
    assert data["terms"] == [
        {"nu": 0, "z": [1], "zbar": [1], "coeff": {"re": "1", "im": "0"}},
        {"nu": 1, "z": [0], "zbar": [0], "coeff": {"re": "1", "im": "0"}},
    ]


def test_symbol_command_deterministic(capsys):
    argv = ("symbol", "--manifest", str(MANIFESTS / "quartic.json"), "--function", "f")
    code1, out1 = run(capsys, *argv)
    code2, out2 = run(capsys, *argv)
    assert code1 == code2 == 0 and out1 == out2
    code, pretty = run(capsys, *argv, "--format", "pretty")
    assert code == 0 and pretty.startswith("tau(L_f)")


def test_verify_command_passes(capsys):
    code, out = run(capsys, "verify", "--manifest", str(MANIFESTS / "quartic.json"),
                    "--samples", "3", "--checks", "conditions,assoc,lemmas,filtration,structure")
    assert code == 0 and json.loads(out)["passed"] is True


def test_ctable_command(capsys):
    code, out = run(capsys, "ctable", "--manifest", str(MANIFESTS / "flat.json"), "--max-deg", "2")
    assert code == 0
    entries = json.loads(out)["entries"]
    assert [(e["nu"], e["dbar_f"], e["d_g"]) for e in entries] == [(0, [0], [0]), (1, [1], [1]), (2, [2], [2])]


def test_input_errors_exit_2(capsys, tmp_path):
    code, out = run(capsys, "symbol", "--manifest", str(MANIFESTS / "flat.json"), "--function", "nope")
    assert code == 2
    err = json.loads(out)["error"]
    assert err["type"] == "BadManifest" and "nope" in err["message"]
    bad = tmp_path / "bad.json"
    bad.write_text('{"dimension": 1, "potential": [{"nu_power": -1, "z": [2], "zbar": [0], "re": "1"},'
                   ' {"nu_power": -1, "z": [0], "zbar": [2], "re": "1"}], "functions": {"f": []}}')
    code, out = run(capsys, "symbol", "--manifest", str(bad), "--function", "f")
    assert code == 2 and json.loads(out)["error"]["type"] == "DegenerateMetric"
    code, out = run(capsys, "symbol", "--manifest", str(tmp_path / "missing.json"), "--function", "f")
    assert code == 2
    with pytest.raises(SystemExit) as exc:
        main(["star", "--manifest", str(MANIFESTS / "flat.json")])
    assert exc.value.code == 2


def test_accuracy_error_exit_3(capsys):
    code, out = run(capsys, "symbol", "--manifest", str(MANIFESTS / "flat.json"), "--function", "f",
                    "--jet-accuracy", "2")
    assert code == 3 and json.loads(out)["error"]["type"] == "InsufficientAccuracy"


def test_verify_failure_exit_1(capsys, monkeypatch):
    import sepstar.cli as cli
    from sepstar.verify import Report

    def failing(chart, F):
        report = Report("filtration")
        report.add("forced failure", False)
        return report

    monkeypatch.setattr(cli, "verify_filtration", failing)
    code, out = run(capsys, "verify", "--manifest", str(MANIFESTS / "flat.json"), "--checks", "filtration")
    assert code == 1 and json.loads(out)["passed"] is False


def test_zero_series_renders_empty():
    assert series_json(SymbolSeries.zero(1)) == []
