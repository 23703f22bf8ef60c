import json
import os
import pathlib
import subprocess

import jsonschema
import pytest

import qhawb

SRC = pathlib.Path(os.environ.get("QHA_SOURCE_DIR", pathlib.Path(__file__).resolve().parents[2]))


def schema(name):
    return json.loads((SRC / "schema" / name).read_text())


def test_catalog_names():
    assert set(qhawb.catalog_names()) == {"H2", "H8+", "H8-", "kZ2-hopf"}


@pytest.mark.parametrize("name", ["H2", "H8+", "H8-", "kZ2-hopf"])
def test_export_matches_schema_and_golden(name):
    doc = qhawb.export(f"catalog:{name}")
    jsonschema.validate(doc, schema("presentation.schema.json"))
    assert qhawb.export_text(f"catalog:{name}") == (SRC / "tests" / "golden" / f"{name}.json").read_text()


def test_import_round_trip():
    text = qhawb.export_text("catalog:H8+")
    assert qhawb.import_text(text) == text


def test_double_document():
    doc = qhawb.double("catalog:H2")
    assert doc["dim"] == 4
    jsonschema.validate(doc, schema("presentation.schema.json"))


@pytest.mark.parametrize("suite", ["axioms", "canonical", "integrals", "double"])
def test_verify_reports(suite):
    rep = qhawb.verify("catalog:H2", suite=suite)
    jsonschema.validate(rep, schema("report.schema.json"))
    assert rep["summary"]["pass"]
    assert rep["summary"]["failures"] == 0


def test_integrals_and_cointegrals():
    assert qhawb.integrals("catalog:H2")["left_integral"] == "1 + g"
    c = qhawb.cointegrals("catalog:H8+")
    assert c["right_cointegral"] == "(1/2+1/2*i)*P_x^3 + (1/2-1/2*i)*P_gx^3"


def test_errors_raise_qha_error():
    with pytest.raises(qhawb.QhaError, match="UnknownCatalogName"):
        qhawb.export("catalog:nope")
    with pytest.raises(qhawb.QhaError, match="SchemaError"):
        qhawb.import_text('{"name": 1}')


def test_cli_json_report_matches_schema():
    exe = os.environ.get("QHAWB")
    if not exe:
        pytest.skip("QHAWB not set")
    out = subprocess.run([exe, "--format", "json", "verify", "catalog:kZ2-hopf"], capture_output=True, text=True)
    assert out.returncode == 0
    rep = json.loads(out.stdout)
    jsonschema.validate(rep, schema("report.schema.json"))
    assert rep["algebra"] == "kZ2-hopf"
