from __future__ import annotations

import json
import subprocess
import sys

import pytest

from ncgeom.cli import SessionConfig, run
from ncgeom.io import algebra_from_json, dump_algebra, fixture_path, parse_algebra_file


def jrun(*argv):
    code, out, err = run([*argv, "--json"])
    assert code == 0, err
    return json.loads(out)


def test_submanifold_example():
    rep = jrun("submanifold", "--algebra", "f3xm2.json", "--ideal-gens", "p1")
    assert rep["verdict"] is True
    assert rep["dims_tuple"] == [9, 9, 6, 3]
    assert rep["tangent_dim"] == 3


def test_point_syntax_is_equivalent():
    a = jrun("submanifold", "--algebra", "f3xm2.json", "--ideal-gens", "p1")
    b = jrun("submanifold", "--algebra", "f3xm2.json", "--ideal-gens", "point:p1")
    c = jrun("submanifold", "--algebra", "f3xm2.json", "--ideal-gens", "p2⊗e11,p3⊗e11")
    assert a == b == c


def test_der_example():
    rep = jrun("der", "--algebra", "m3.json")
    assert (rep["der_dim"], rep["inner_dim"], rep["out_dim"]) == (8, 8, 0)


def test_text_output_uses_yes_no():
    code, out, _ = run(["submanifold", "--algebra", "f3xm2.json", "--ideal-gens", "p1"])
    assert code == 0
    assert "verdict: YES" in out


def test_freealg_quotient_emits_algebra(tmp_path):
    code, out, err = run(["freealg", "quotient", "--pres", "clockshift2.json"])
    assert code == 0, err
    data = json.loads(out)
    assert data["dim"] == 4
    A = algebra_from_json(data)
    assert A.center().dim == 1
    # the emitted file re-parses to identical structure constants
    path = tmp_path / "q.json"
    code, out, err = run(["freealg", "quotient", "--pres", "clockshift2.json", "--output", str(path)])
    assert code == 0, err
    B = parse_algebra_file(path)
    assert B.sc_entries == A.sc_entries and B.labels == A.labels
    assert dump_algebra(B) == path.read_text()


def test_freealg_nf_and_member():
    rep = jrun("freealg", "nf", "--pres", "heisenberg.pres.json", "--poly", "x*y*x")
    assert rep["normal_form"] == jrun("freealg", "nf", "--pres", "heisenberg.pres.json", "--poly", "y*x^2 + z*x")["normal_form"]
    assert jrun("freealg", "member", "--pres", "clockshift2.json", "--poly", "x^2 - 1")["member"] is True
    assert jrun("freealg", "member", "--pres", "heisenberg.pres.json", "--poly", "x")["member"] is False


def test_hochschild_variants():
    assert jrun("hochschild", "--algebra", "m2.json")["dim_H"] == 0
    assert jrun("hochschild", "--algebra", "m2.json", "--degree", "0")["dim_H"] == 1
    assert jrun("hochschild", "--algebra", "dual2xm2.json", "--variant", "relative")["dim_H"] == 0
    rep = jrun("hochschild", "--algebra", "f3xm2.json", "--variant", "constrained", "--ideal-gens", "p1")
    assert rep["dim_Z"] == 9


def test_quotient_manifold_commands():
    rep = jrun("quotient-manifold", "--algebra", "dual2xm2.json")
    assert rep["verdict"] is True
    assert (rep["dims"]["g_hat"], rep["dims"]["h"], rep["dims"]["der_B"]) == (9, 13, 4)
    diag = "e11_1 + e11_2,e12_1 + e12_2,e21_1 + e21_2,e22_1 + e22_2"
    rep = jrun("quotient-manifold", "--algebra", "m2m2.json", "--subalgebra-basis", diag)
    assert rep["verdict"] is False and rep["failing"] == ["iii"]


def test_connection_command():
    rep = jrun("connection", "--algebra", "dual2xm2.json")
    assert rep["der_B_dim"] == 4 and rep["projection_rank"] == rep["g_hat_dim"] == 9


def test_forms_command():
    rep = jrun("forms", "--algebra", "f3xm2.json", "--ideal-gens", "p1", "--degree", "1", "--form-cap", "2")
    assert rep["omega"][:2] == [12, 36]


@pytest.mark.parametrize(
    "argv, code",
    [
        (["der"], 2),
        (["frobnicate"], 2),
        (["der", "--algebra", "/nonexistent.json"], 2),
        (["der", "--algebra", "bad_unit.json"], 3),
        (["der", "--algebra", "m2.json", "--form-cap", "0"], 2),
        (["submanifold", "--algebra", "m2.json", "--ideal-gens", "e12"], 3),
        (["submanifold", "--algebra", "m2.json", "--ideal-gens", "q7"], 2),
        (["hochschild", "--algebra", "m2.json", "--degree", "5"], 4),
        (["hochschild", "--algebra", "m2.json", "--variant", "constrained"], 3),
        (["freealg", "nf", "--pres", "clockshift2.json", "--poly", "x*y*x*y*x*y", "--step-cap", "1"], 4),
        (["freealg", "quotient", "--pres", "heisenberg.pres.json", "--word-cap", "30"], 3),
        (["freealg", "nf", "--pres", "heisenberg.pres.json", "--poly", "x*w"], 2),
    ],
)
def test_exit_codes(argv, code):
    assert run(argv)[0] == code


def test_json_errors_are_structured():
    code, out, err = run(["der", "--algebra", "bad_unit.json", "--json"])
    assert code == 3 and out == ""
    data = json.loads(err)
    assert data["error"] == "UnitViolation" and data["exit_code"] == 3


def test_session_config_validation():
    with pytest.raises(ValueError):
        SessionConfig(hochschild_cap=0)
    with pytest.raises(ValueError):
        SessionConfig(output="yaml")
    assert SessionConfig().form_cap == 3


def test_report_all_is_deterministic_across_workers():
    argv = ["report-all", "--algebra", "f3xm2.json", "--ideal-gens", "p1", "--json"]
    outs = {run(argv + ["--workers", str(w)])[1] for w in (1, 4)}
    outs |= {run(argv)[1] for _ in range(2)}
    assert len(outs) == 1
    sections = [s["command"] for s in json.loads(outs.pop())["sections"]]
    assert sections[:3] == ["validate", "center", "der"]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ncgeom", "validate", "--algebra", str(fixture_path("m2"))],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "dim: 4" in proc.stdout
