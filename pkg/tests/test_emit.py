import json

import numpy as np
import pytest

from isospec.emit import emit, format_real, render, to_json
from isospec.errors import OutputError
from isospec.models import Table, Verdict, VerificationReport


def report(verdict=Verdict.PASS):
    return VerificationReport("eigen:free1d/unique:[0.5]", {"eigenvalue": 0.25, "residual": 1e-15}, 1e-7, verdict,
                              "psi is an eigenfunction")


def test_format_real():
    assert format_real(0.1) == "0.10000000000000001"
    assert format_real(1.0) == "1"
    assert format_real(np.float64(-2.5)) == "-2.5"
    assert format_real(float("inf")) == "Infinity"
    assert format_real(float("nan")) == "NaN"


def test_to_json_layout():
    assert to_json({"a": [1, 2.5]}) == '{\n  "a": [\n    1,\n    2.5\n  ]\n}'
    assert to_json({"a": [1, 2.5], "b": None}, indent=None) == '{"a": [1, 2.5], "b": null}'
    assert to_json({"ok": np.bool_(True), "v": np.arange(2)}, indent=None) == '{"ok": true, "v": [0, 1]}'
    assert to_json(Verdict.INFO) == '"info"'


def test_non_finite_reals_are_null_in_json():
    text = to_json({"residual": float("nan"), "bounds": [float("-inf"), 1.0, np.float64("inf")]}, indent=None)
    assert text == '{"residual": null, "bounds": [null, 1, null]}'

    def reject(token):
        raise ValueError(token)

    assert json.loads(render(Table(("x",), ((float("nan"),),)), "json"), parse_constant=reject)["rows"] == [[None]]
    assert render(Table(("x",), ((float("nan"),),))) == "x\r\nNaN\r\n"


def test_csv_table():
    table = Table(("x", "valid", "roots"), ((1.5, True, [1.0, 2.0]), (2.0, False, [])))
    assert render(table) == "x,valid,roots\r\n1.5,true,1;2\r\n2,false,\r\n"


def test_json_table_keeps_extra_keys():
    table = Table(("lambda", "valid"), ((2.0, True),), {"valid_intervals": [[2.0, 4.0]]})
    parsed = json.loads(render(table, "json"))
    assert list(parsed) == ["columns", "rows", "valid_intervals"]
    assert parsed["rows"] == [[2.0, True]]
    assert parsed["valid_intervals"] == [[2.0, 4.0]]


def test_reports():
    parsed = json.loads(render([report()], "json"))
    assert parsed["reports"][0]["verdict"] == "pass"
    assert parsed["reports"][0]["measured"]["residual"] == 1e-15
    text = render(report(Verdict.FAIL))
    header, row = text.split("\r\n")[:2]
    assert header == "check_id,verdict,tolerance,measured,provenance"
    assert row.startswith("eigen:free1d/unique:[0.5],fail,9.9999999999999995e-08,")


def test_same_payload_same_bytes():
    table = Table(("x",), tuple((v,) for v in np.linspace(0.0, 1.0, 7)))
    assert render(table, "json") == render(table, "json")
    assert render(table) == render(table)


def test_emit_to_file_and_stdout(tmp_path, capsys):
    path = tmp_path / "out.csv"
    table = Table(("x",), ((1.0,),))
    emit(table, "csv", str(path))
    assert path.read_bytes() == b"x\r\n1\r\n"
    emit(table, "csv", "-")
    assert capsys.readouterr().out == "x\r\n1\r\n"


def test_emit_into_missing_directory(tmp_path):
    with pytest.raises(OutputError) as info:
        emit(Table(("x",), ()), "csv", str(tmp_path / "missing" / "out.csv"))
    assert info.value.exit_code == 4
