import json
import random

import pytest

from qtspp.cli import main
from qtspp.fixtures import build_telescoping_fixture, mutate_fixture
from qtspp.guess import AnsatzStructure, build_table
from qtspp.ore import OreOperator


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write_json(path, payload):
    path.write_text(json.dumps(payload))
    return str(path)


class TestTsppCommands:
    def test_verify_match(self, capsys):
        code, out, _ = run(capsys, "tspp", "verify", "--n", "1")
        assert code == 0 and "match: True" in out

    def test_verify_json(self, capsys):
        code, out, _ = run(capsys, "tspp", "verify", "--n", "2", "--json")
        assert code == 0
        data = json.loads(out)
        assert data["n"] == 2 and data["count"] == 5 and data["matches_product"]
        assert data["poly"]["vars"] == ["q", "xn", "xj"]

    def test_cap_exceeded(self, capsys):
        code, _, err = run(capsys, "tspp", "verify", "--n", "99")
        assert code == 2 and "enumeration too large" in err


class TestOkadaCommands:
    def test_det(self, capsys):
        code, out, _ = run(capsys, "okada", "det", "--n", "4")
        assert code == 0 and "verified: True" in out

    def test_det_invalid_n(self, capsys):
        code, _, err = run(capsys, "okada", "det", "--n", "0")
        assert code == 2 and "positive" in err

    def test_cofactors_json(self, capsys):
        code, out, _ = run(capsys, "okada", "cofactors", "--n", "2", "--json")
        assert code == 0
        data = json.loads(out)
        assert data["n"] == 2 and len(data["c"]) == 2

    def test_identities_all(self, capsys):
        code, out, _ = run(capsys, "okada", "identities", "--n", "5")
        assert code == 0 and "all verified: True" in out

    def test_identities_single(self, capsys):
        code, out, _ = run(capsys, "okada", "identities", "--n", "4", "--which", "3p", "--json")
        assert code == 0
        data = json.loads(out)
        assert data["reports"][0]["identity"] == "three_prime"

    def test_identities_row_flag_misuse(self, capsys):
        code, _, err = run(capsys, "okada", "identities", "--n", "4", "--i", "1")
        assert code == 2 and "--i" in err


@pytest.fixture
def op_files(tmp_path):
    a = write_json(tmp_path / "a.json", (OreOperator.sn(2) - 1).to_json())
    b = write_json(tmp_path / "b.json", (OreOperator.sn() - 1).to_json())
    return a, b


@pytest.fixture
def flat_diag_table(tmp_path):
    table = build_table(range(1, 10), "diagonal", flat=True)
    return write_json(tmp_path / "diag.json", table.to_json())


class TestOreCommands:
    def test_divide_exact(self, capsys, op_files):
        a, b = op_files
        code, out, _ = run(capsys, "ore", "divide", "--a", a, "--b", b)
        assert code == 0 and "remainder: 0" in out

    def test_divide_with_remainder(self, capsys, tmp_path, op_files):
        _, b = op_files
        c = write_json(tmp_path / "c.json", (OreOperator.sn() + 1).to_json())
        code, out, _ = run(capsys, "ore", "divide", "--a", c, "--b", b)
        assert code == 1

    def test_leftmul(self, capsys, op_files):
        a, b = op_files
        code, out, _ = run(capsys, "ore", "leftmul", "--a", a, "--b", b)
        assert code == 0 and "True" in out

    def test_annihilates(self, capsys, op_files, flat_diag_table):
        _, b = op_files
        code, _, _ = run(capsys, "ore", "annihilates", "--op", b, "--table", flat_diag_table, "--min-points", "5")
        assert code == 0

    def test_apply(self, capsys, op_files, flat_diag_table):
        _, b = op_files
        code, out, _ = run(capsys, "ore", "apply", "--op", b, "--table", flat_diag_table, "--n", "3", "--j", "0", "--json")
        assert code == 0
        data = json.loads(out)
        assert data["value"]["num"]["terms"] == []

    def test_telescope_accepts_and_rejects(self, capsys, tmp_path):
        rng = random.Random(3)
        fix = build_telescoping_fixture(rng)
        cert = write_json(tmp_path / "cert.json", fix.certificate.to_json())
        summand = write_json(tmp_path / "summand.json", fix.summand.to_json())
        j0, j1 = fix.window
        code, _, _ = run(capsys, "ore", "telescope", "--cert", cert, "--summand", summand, "--from", str(j0), "--to", str(j1))
        assert code == 0
        bad = write_json(tmp_path / "bad.json", mutate_fixture(fix, rng).certificate.to_json())
        code, _, _ = run(capsys, "ore", "telescope", "--cert", bad, "--summand", summand, "--from", str(j0), "--to", str(j1))
        assert code == 1


class TestGuessCommands:
    def test_run_validated(self, capsys, tmp_path):
        table = build_table(range(1, 40), "custom", fn=lambda n, j: 1, j_values=[0])
        tfile = write_json(tmp_path / "t.json", table.to_json())
        sfile = write_json(
            tmp_path / "s.json", AnsatzStructure.make([(0, 0), (1, 0)], (0, 0, 0)).to_json()
        )
        code, out, _ = run(capsys, "guess", "run", "--table", tfile, "--stencil", sfile,
                           "--oversample", "4", "--holdout", "6", "--json")
        assert code == 0
        data = json.loads(out)
        assert data["status"] == "validated" and len(data["operators"]) == 1
        assert len(data["primes"]) == 2

    def test_run_refuted(self, capsys, tmp_path):
        table = build_table(range(1, 40), "custom", fn=lambda n, j: n, j_values=[0])
        tfile = write_json(tmp_path / "t.json", table.to_json())
        sfile = write_json(
            tmp_path / "s.json", AnsatzStructure.make([(0, 0), (1, 0)], (0, 0, 0)).to_json()
        )
        code, _, _ = run(capsys, "guess", "run", "--table", tfile, "--stencil", sfile,
                         "--oversample", "4", "--holdout", "6")
        assert code == 1

    def test_malformed_json(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{oops")
        code, _, err = run(capsys, "guess", "run", "--table", str(bad), "--stencil", str(bad))
        assert code == 2 and "line 1" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "guess", "run", "--table", str(tmp_path / "x.json"),
                           "--stencil", str(tmp_path / "y.json"))
        assert code == 2

    def test_table_builder(self, capsys, tmp_path):
        out_file = tmp_path / "diag.json"
        code, out, _ = run(capsys, "guess", "table", "--source", "diagonal",
                           "--from", "1", "--to", "8", "--flat", "--out", str(out_file))
        assert code == 0
        data = json.loads(out_file.read_text())
        assert data["mode"] == "exact" and len(data["points"]) == 8

    def test_escalate(self, capsys, tmp_path):
        table = build_table(range(1, 30), "custom", fn=lambda n, j: 1, j_values=[0])
        tfile = write_json(tmp_path / "t.json", table.to_json())
        code, out, _ = run(capsys, "guess", "escalate", "--table", tfile,
                           "--max-shift", "1", "--max-degree", "0",
                           "--oversample", "3", "--holdout", "4")
        assert code == 0 and "validated structure" in out
