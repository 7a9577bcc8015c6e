from __future__ import annotations

import io
import json

import numpy as np

from qbounds.cli import run
from qbounds.graphs import cycle, to_graph6


def call(*argv, stdin=""):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err, io.StringIO(stdin))
    return code, out.getvalue(), err.getvalue()


def test_bounds_cycle_json():
    code, out, _ = call("bounds", "--family", "cycle", "8")
    assert code == 0
    rep = json.loads(out)
    assert rep["lo"] == 4 and rep["hi"] == 4


def test_bounds_rows_carry_their_rule():
    code, out, _ = call("bounds", "--family", "cycle", "8")
    for c in json.loads(out)["contributions"]:
        assert c["rule"] and c["detail"]


def test_bounds_from_stdin_and_g6():
    g6 = to_graph6(cycle(5))
    _, a, _ = call("bounds", stdin=g6 + "\n")
    _, b, _ = call("bounds", "--g6", g6)
    assert json.loads(a)["lo"] == json.loads(b)["lo"] == 3


def test_bounds_csv_and_text():
    code, out, _ = call("bounds", "--family", "path", "4", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["graph-id,q-lo,q-hi,determined,provenance",
                                "path(4),4,4,true,lo:near-path+unique-shortest-path+zero-forcing;hi:trivial"]
    code, out, _ = call("bounds", "--family", "path", "4", "--format", "text")
    assert code == 0 and "q in [4, 4]" in out


def test_ssp_catalog():
    code, out, _ = call("ssp", "--catalog", "M_96")
    assert code == 0 and out.strip() == "SSP: true"
    code, out, _ = call("smp", "--catalog", "flipped-C5")
    assert code == 0 and out.strip() == "SMP: true"
    code, out, _ = call("ssp", "--catalog", "flipped-C5")
    assert out.strip() == "SSP: false"


def test_ssp_matrix_file(tmp_path):
    f = tmp_path / "m.json"
    f.write_text(json.dumps(np.diag([1.0, 2.0, 3.0]).tolist()))
    code, out, _ = call("ssp", "--g6", "B?", "--matrix", str(f))
    assert code == 0 and out.strip() == "SSP: true"


def test_tables_order_six():
    code, out, _ = call("tables", "--order", "6")
    assert code == 0
    assert out.startswith("matching feasible: 112/112")
    assert "named graphs verified:" in out and "FAIL" not in out


def test_tables_small_orders():
    code, out, _ = call("tables", "--order", "5")
    assert code == 0 and out.startswith("matching feasible: 31/31")


def test_construct_and_enumerate():
    code, out, _ = call("construct", "flipped-cycle", "6")
    payload = json.loads(out)
    assert code == 0 and payload["q"] == 3 and payload["claimed_q_upper"] == 3
    code, out, _ = call("enumerate", "--order", "5")
    assert code == 0 and len(out.split()) == 21


def test_catalog_verify():
    code, out, _ = call("catalog-verify")
    assert code == 0
    assert out and all(line.startswith("PASS") for line in out.splitlines())


def test_json_output_is_deterministic():
    for argv in (["bounds", "--family", "cycle", "7"],
                 ["search", "--family", "cycle", "5", "--mult", "1", "2", "2", "--starts", "10"],
                 ["construct", "tensor-path", "3", "3"]):
        assert call(*argv) == call(*argv)


def test_seed_from_environment(monkeypatch):
    argv = ["search", "--family", "cycle", "5", "--mult", "1", "2", "2", "--starts", "10"]
    monkeypatch.setenv("QBOUNDS_SEED", "4")
    a = call(*argv)
    b = call("--seed", "4", *argv)
    assert a == b and json.loads(a[1])["seed"] == 4
    monkeypatch.setenv("QBOUNDS_SEED", "x")
    assert call(*argv)[0] == 1


def test_usage_errors_exit_one(tmp_path):
    assert call("bounds", "--family", "nope", "3")[0] == 1
    assert call("bounds", "--family", "cycle", "5", "--g6", "Dhc")[0] == 1
    assert call("bounds")[0] == 1
    assert call("frobnicate")[0] == 1
    assert call("tables")[0] == 1
    code, _, err = call("ssp", "--g6", "Bw", "--matrix", str(tmp_path / "missing.json"))
    assert code == 1 and "missing.json" in err


def test_verification_failure_exits_two():
    # P_3 adjacency: the eigenvalue-0 vector meets {1,2} in one vertex only
    code, _, err = call("augment", "--family", "path", "3", "--lambda-index", "1", "--alpha", "1,2")
    assert code == 2 and "verification failed" in err


def test_inconclusive_search_exits_three():
    code, out, _ = call("search", "--family", "path", "3", "--spectrum", "0", "0", "1",
                        "--starts", "3", "--iterations", "50")
    assert code == 3 and json.loads(out)["success"] is False
