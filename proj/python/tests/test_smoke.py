import json
import math
import os
import pathlib
import subprocess

import numpy as np
import pytest

import dbc

ROOT = pathlib.Path(__file__).resolve().parents[2]
SCHEMA = pathlib.Path(os.environ.get("DBC_SCHEMA", ROOT / "schema" / "report.schema.json"))
CLI = os.environ.get("DBC_CLI")


def test_gauss_example():
    m, h, n = dbc.gauss_decompose(np.array([[1, 1], [1, 2]], dtype=complex))
    np.testing.assert_allclose(m, [[1, 0], [1, 1]], atol=1e-15)
    np.testing.assert_allclose(h, np.eye(2), atol=1e-15)
    np.testing.assert_allclose(n, [[1, 1], [0, 1]], atol=1e-15)


def test_gauss_outside_open_cell():
    with pytest.raises(dbc.NotInOpenCell):
        dbc.gauss_decompose(np.array([[0, -1], [1, 0]], dtype=complex))


def test_dress_example():
    r = math.sqrt(2.0)
    up, bp = dbc.dress(np.array([[1, 1], [0, 1]], dtype=complex), np.array([[1, 0], [1, 1]], dtype=complex))
    np.testing.assert_allclose(up, [[r, 0], [r / 2, 1 / r]], atol=1e-14)
    np.testing.assert_allclose(bp, [[r, r / 2], [0, 1 / r]], atol=1e-14)
    with pytest.raises(dbc.NotInDressingDomain):
        dbc.dress(np.array([[1, 1], [0, 1]], dtype=complex), np.array([[1, 0], [-1, 1]], dtype=complex))


def test_errors_share_a_base():
    assert issubclass(dbc.NotInDressingDomain, dbc.Error)
    assert issubclass(dbc.ConfigError, dbc.Error)


def test_weyl_and_torus():
    np.testing.assert_array_equal(dbc.weyl_representative([1, 1], 2), -np.eye(2))
    np.testing.assert_allclose(dbc.torus_sqrt(np.diag([4, 0.25]).astype(complex)), np.diag([2, 0.5]))


def test_tstar_example():
    out = dbc.tstar_mult(np.array([1, 0, 1, 1], dtype=complex), np.array([0, 2, 1, 1], dtype=complex))
    np.testing.assert_allclose(out, [1, 2, 1, 1], atol=1e-15)
    s = dbc.tstar_source(np.array([1, 0, 1, 1], dtype=complex))
    assert abs(s[0] - 1) < 1e-15 and abs(s[1] - math.e) < 1e-15
    t = dbc.tstar_target(np.array([1, 0, 1, 1], dtype=complex))
    assert abs(t[0] - 1) < 1e-15 and abs(t[1] - 1) < 1e-15


def test_run_tstar_suite():
    reports = dbc.run(suites=["tstar_c"], samples=200)
    assert [r["suite"] for r in reports] == ["tstar_c"]
    assert all(c["pass"] for c in reports[0]["checks"])


def test_config_error():
    with pytest.raises(dbc.ConfigError):
        dbc.run(samples=0)
    with pytest.raises(dbc.ConfigError):
        dbc.run(suites=["bogus"])


def test_report_matches_schema():
    jsonschema = pytest.importorskip("jsonschema")
    schema = json.loads(SCHEMA.read_text())
    jsonschema.validate(dbc.run(suites=["kernel", "tstar_c"], samples=20), schema)


@pytest.mark.skipif(CLI is None, reason="command-line binary not provided")
def test_cli_report_and_exit_codes(tmp_path):
    jsonschema = pytest.importorskip("jsonschema")
    report = tmp_path / "report.json"
    ok = subprocess.run([CLI, "--suite", "tstar_c", "--samples", "100", "--report", str(report)],
                        capture_output=True, text=True)
    assert ok.returncode == 0, ok.stdout + ok.stderr
    jsonschema.validate(json.loads(report.read_text()), json.loads(SCHEMA.read_text()))
    bad = subprocess.run([CLI, "--samples", "0"], capture_output=True, text=True)
    assert bad.returncode == 2
    strict = subprocess.run([CLI, "--suite", "kernel", "--samples", "5", "--tol", "1e-14"],
                            capture_output=True, text=True)
    assert strict.returncode == 1
