"""End-to-end command tests, run in process through `main(argv)`.

Each command must put exactly one JSON payload on stdout and one run-report
line on stderr, and identical inputs must produce byte-identical stdout.
"""

import json

import pytest

from projconst.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def payload(out: str) -> dict:
    return json.loads(out)


def report(err: str) -> dict:
    return json.loads(err.strip().splitlines()[-1])


@pytest.fixture
def kernel3(tmp_path):
    doc = {"ambient_dim": 3, "basis": [["1", "-1", "0"], ["0", "1", "-1"]]}
    path = tmp_path / "kernel3.json"
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.fixture
def scalar_line(tmp_path):
    path = tmp_path / "line.json"
    path.write_text(json.dumps({"ambient_dim": 1, "basis": [["1"]]}))
    return str(path)


class TestMinproj:
    def test_happy_path(self, capsys, kernel3):
        code, out, err = run(capsys, "minproj", kernel3)
        assert code == 0
        doc = payload(out)
        assert doc["lambda"] == "4/3"
        assert doc["attained"] is True
        assert len(doc["projection"]) == 3
        rep = report(err)
        assert rep["command"] == "minproj"
        assert rep["status"] == "ok"
        assert isinstance(rep["wall_time_ms"], int)
        assert len(rep["inputs_digest"]) == 64

    def test_stdout_is_deterministic(self, capsys, kernel3):
        _, first, _ = run(capsys, "minproj", kernel3)
        _, second, _ = run(capsys, "minproj", kernel3)
        assert first == second

    def test_oracle_agreement(self, capsys, kernel3):
        code, out, _ = run(capsys, "minproj", kernel3, "--oracle")
        assert code == 0
        doc = payload(out)
        assert doc["oracle"]["agrees"] is True
        assert abs(doc["oracle"]["estimate"] - 4 / 3) <= doc["oracle"]["tol"]

    def test_budget_exceeded(self, capsys, kernel3):
        code, _, err = run(capsys, "--budget", "2", "minproj", kernel3)
        assert code == 5
        assert report(err)["status"] == "inconclusive"

    def test_custom_budget_pair(self, capsys, kernel3):
        code, _, _ = run(capsys, "--budget", "3,2", "minproj", kernel3)
        assert code == 0


class TestInputValidation:
    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "minproj", str(tmp_path / "nope.json"))
        assert code == 2
        assert "error:" in err

    def test_malformed_json(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert run(capsys, "minproj", str(path))[0] == 2

    def test_missing_keys(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"basis": [["1"]]}))
        assert run(capsys, "minproj", str(path))[0] == 2

    def test_bad_rational(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"ambient_dim": 1, "basis": [["1.5"]]}))
        assert run(capsys, "minproj", str(path))[0] == 2

    def test_ragged_rows(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"ambient_dim": 2, "basis": [["1"], ["1", "2"]]}))
        assert run(capsys, "minproj", str(path))[0] == 2

    def test_rank_deficient(self, capsys, tmp_path):
        path = tmp_path / "dependent.json"
        path.write_text(json.dumps(
            {"ambient_dim": 2, "basis": [["1", "1"], ["2", "2"]]}))
        code, _, err = run(capsys, "minproj", str(path))
        assert code == 3
        assert report(err)["status"] == "error"

    def test_bad_budget_string(self, capsys, kernel3):
        assert run(capsys, "--budget", "a,b", "minproj", kernel3)[0] == 2

    def test_usage_errors(self, capsys):
        assert main([]) == 2
        capsys.readouterr()
        assert main(["frobnicate"]) == 2
        capsys.readouterr()


class TestZerosum:
    def test_law_holds(self, capsys, scalar_line):
        code, out, _ = run(capsys, "zerosum", scalar_line, "--copies", "3")
        assert code == 0
        doc = payload(out)
        assert doc["equal"] is True
        assert doc["sigma_lambda"] == "4/3"
        assert doc["mu_N"] == "4/3"
        assert doc["N"] == 3

    @pytest.mark.parametrize("copies", ["1", "7", "0"])
    def test_copies_out_of_range(self, capsys, scalar_line, copies):
        assert run(capsys, "zerosum", scalar_line, "--copies", copies)[0] == 2

    def test_budget_inconclusive(self, capsys, kernel3):
        # the amplified side lives in ell_inf^6, beyond this budget
        code, out, err = run(capsys, "--budget", "3", "zerosum", kernel3,
                             "--copies", "2")
        assert code == 5
        assert payload(out)["status"] == "inconclusive"
        assert report(err)["status"] == "inconclusive"


class TestPlan:
    def test_plain_plan(self, capsys):
        code, out, _ = run(capsys, "plan", "--lambda", "3")
        assert code == 0
        doc = payload(out)
        assert (doc["m"], doc["N"], doc["alpha"]) == (1, 5, "15/8")
        assert doc["schedule"][-1]["lambda_k"] == "3"

    def test_no_amplification_needed(self, capsys):
        code, out, _ = run(capsys, "plan", "--lambda", "3/2")
        assert code == 0
        doc = payload(out)
        assert doc["m"] == 0
        assert "N" not in doc

    @pytest.mark.parametrize("lam", ["1", "2/3", "junk", "-4"])
    def test_rejects_bad_targets(self, capsys, lam):
        assert run(capsys, "plan", "--lambda", lam)[0] == 2

    def test_demo_base_mismatch(self, capsys, scalar_line):
        # a target of 5/2 plans alpha = 15/8, but the line has constant 1
        code, _, _ = run(capsys, "plan", "--lambda", "5/2",
                         "--demo", scalar_line)
        assert code == 6

    def test_demo_zero_steps(self, capsys, kernel3):
        # lambda = 4/3 needs no amplification, so the demo just certifies it
        code, out, _ = run(capsys, "plan", "--lambda", "4/3",
                           "--demo", kernel3, "--steps", "0")
        assert code == 0
        doc = payload(out)
        assert doc["demo"]["base_lambda"] == "4/3"
        assert doc["demo"]["status"] == "ok"


class TestBM:
    def test_optimize(self, capsys):
        code, out, _ = run(capsys, "bm", "--optimize")
        assert code == 0
        doc = payload(out)
        assert abs(doc["g_star"] - 19.392304845413264) < 1e-12
        assert doc["strict"] is True

    def test_params(self, capsys):
        code, out, _ = run(capsys, "bm", "--params", "4")
        assert code == 0
        assert payload(out)["K"] == "9/2"

    def test_params_reject_nonpositive(self, capsys):
        assert run(capsys, "bm", "--params", "-1")[0] == 2

    def test_model(self, capsys):
        code, out, _ = run(capsys, "bm", "--model", "4", "--window", "256")
        assert code == 0
        doc = payload(out)
        assert doc == {"a": "4", "K": "9/2", "inverse_ok": True,
                       "W_norm_lower": "3", "Winv_norm_lower": "3",
                       "stabilized": True}

    def test_model_rejects_inexact(self, capsys):
        code, _, err = run(capsys, "bm", "--model", "5")
        assert code == 7
        assert report(err)["status"] == "error"

    def test_model_rejects_nonpositive(self, capsys):
        assert run(capsys, "bm", "--model", "0")[0] == 2

    def test_flags_are_exclusive(self, capsys):
        assert run(capsys, "bm", "--optimize", "--params", "4")[0] == 2


class TestSelftest:
    def test_single_criterion(self, capsys):
        code, out, _ = run(capsys, "selftest", "--only", "kernel-constants")
        assert code == 0
        assert "[PASS] kernel-constants" in out
        assert out.strip().endswith("OK (1 criteria)")

    def test_json_form(self, capsys):
        code, out, _ = run(capsys, "--json", "selftest",
                           "--only", "centring-witness,kernel-constants")
        assert code == 0
        doc = payload(out)
        assert doc["passed"] is True
        assert {c["key"] for c in doc["criteria"]} == {
            "centring-witness", "kernel-constants"}
        assert all(c["passed"] for c in doc["criteria"])

    def test_fault_injection_is_detected(self, capsys, monkeypatch):
        monkeypatch.setenv("PROJCONST_SELFTEST_FAULT", "centring-norm")
        code, out, _ = run(capsys, "selftest", "--only", "centring-norm")
        assert code == 1
        assert "[FAIL] centring-norm" in out

    def test_fault_leaves_other_criteria_alone(self, capsys, monkeypatch):
        monkeypatch.setenv("PROJCONST_SELFTEST_FAULT", "centring-norm")
        code, out, _ = run(capsys, "selftest", "--only", "kernel-constants")
        assert code == 0
        assert "[PASS] kernel-constants" in out
