import json

import pytest

from src import operations
from src.config import load_settings, set_settings
from src.operations import CurveOperations
from src.main import main


@pytest.fixture(autouse=True)
def isolated(monkeypatch, tmp_path):
    monkeypatch.chdir(tmp_path)
    yield
    set_settings(None)


def _forge(tmp_path, family, d, seed=1, name=None):
    out = tmp_path / (name or f"{family}-{d}.json")
    assert main(["forge", "--family", family, "--d", str(d), "--seed", str(seed), "--out", str(out)]) == 0
    return out


class TestForge:
    def test_writes_curve(self, tmp_path):
        out = _forge(tmp_path, "theta-tilde", 4, seed=42)
        doc = json.loads(out.read_text())
        assert doc["family"] == "theta-tilde"
        assert doc["genus"] == 8
        assert len(doc["points"]) == 96
        assert doc["expected"]["N"] == 96
        assert doc["witness"]["seed"] == 42

    def test_byte_identical_reruns(self, tmp_path):
        first = _forge(tmp_path, "lambda2", 3, seed=7, name="a.json")
        second = _forge(tmp_path, "lambda2", 3, seed=7, name="b.json")
        assert first.read_bytes() == second.read_bytes()

    def test_stdout(self, capsys):
        assert main(["forge", "--family", "gamma2", "--d", "3", "--seed", "2"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["family"] == "gamma2"
        assert doc["points"][-1] == ["inf", "+"]

    def test_kummer_prime_flag(self, tmp_path):
        out = tmp_path / "kummer.json"
        assert main(["forge", "--family", "kummer", "--p", "3", "--out", str(out)]) == 0
        assert json.loads(out.read_text())["genus"] == 2

    def test_genus_zero_request(self, tmp_path):
        assert main(["forge", "--family", "gamma1", "--d", "2", "--out", str(tmp_path / "x.json")]) == 2
        assert not (tmp_path / "x.json").exists()

    def test_batch(self, tmp_path):
        out = tmp_path / "batch"
        assert main(["forge", "--family", "gamma2", "--d", "3", "--count", "3", "--seed", "10", "--out", str(out)]) == 0
        manifest = json.loads((out / "manifest.json").read_text())
        assert [entry["seed"] for entry in manifest["entries"]] == [10, 11, 12]
        for entry in manifest["entries"]:
            assert entry["success"]
            assert (out / entry["path"]).exists()

    def test_batch_needs_out(self):
        assert main(["forge", "--family", "gamma2", "--d", "3", "--count", "2"]) == 2

    def test_missing_degree_is_a_usage_error(self, tmp_path):
        assert main(["forge", "--family", "gamma1", "--out", str(tmp_path / "x.json")]) == 2
        assert not (tmp_path / "x.json").exists()

    def test_failed_verification_exits_one(self, tmp_path, monkeypatch):
        real = operations.verify_points
        monkeypatch.setattr(operations, "verify_points", lambda curve: real(curve).model_copy(update={"passed": False}))
        assert main(["forge", "--family", "gamma2", "--d", "3", "--out", str(tmp_path / "x.json")]) == 1

    def test_config_file(self, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"seed": 42}))
        out = tmp_path / "from-config.json"
        assert main(["--config", str(config), "forge", "--family", "lambda2", "--d", "2", "--out", str(out)]) == 0
        assert json.loads(out.read_text())["witness"]["seed"] == 42


class TestVerify:
    def test_pass(self, tmp_path, capsys):
        path = _forge(tmp_path, "theta-tilde", 2)
        capsys.readouterr()
        assert main(["verify", str(path)]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["passed"]
        assert report["witness"]["identity_ok"]

    def test_twisted_family(self, tmp_path, capsys):
        path = _forge(tmp_path, "theta2", 3)
        capsys.readouterr()
        assert main(["verify", str(path)]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["two_torsion"] is True
        assert report["witness"]["function_witness"] is False

    def test_corrupted_point(self, tmp_path):
        path = _forge(tmp_path, "gamma1", 4)
        doc = json.loads(path.read_text())
        doc["points"][0][1] = "12345/1"
        path.write_text(json.dumps(doc))
        assert main(["verify", str(path)]) == 1

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"family": "gamma1", ')
        assert main(["verify", str(path)]) == 3

    def test_missing_field(self, tmp_path):
        path = _forge(tmp_path, "gamma1", 4)
        doc = json.loads(path.read_text())
        del doc["f"]
        path.write_text(json.dumps(doc))
        assert main(["verify", str(path)]) == 3

    def test_missing_file(self, tmp_path):
        assert main(["verify", str(tmp_path / "absent.json")]) == 3


class TestSieve:
    def test_lambda2(self, tmp_path, capsys):
        path = _forge(tmp_path, "lambda2", 3)
        capsys.readouterr()
        code = main(["sieve", str(path), "--primes", "2", "--bound", "2", "--support", "2", "--classes", "r"])
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert report["verdict"] == "PASS"
        assert report["found_relations"] == []

    def test_budget(self, tmp_path):
        path = _forge(tmp_path, "lambda2", 3)
        assert main(["sieve", str(path), "--op-budget", "10"]) == 2

    def test_even_degree(self, tmp_path):
        path = _forge(tmp_path, "theta-tilde", 2)
        assert main(["sieve", str(path), "--classes", "eps"]) == 2


class TestPte:
    @pytest.mark.parametrize("family, d", [("B", 3), ("Z", 4), ("baseline", 3)])
    def test_sampled(self, capsys, family, d):
        assert main(["pte", "--family", family, "--d", str(d), "--seed", "5"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["pte"] is True
        assert doc["identity_ok"] is True

    def test_kummer(self, capsys):
        assert main(["pte", "--family", "kummer", "--p", "5"]) == 0
        assert json.loads(capsys.readouterr().out)["block_size"] == 5

    def test_from_curve_file(self, tmp_path, capsys):
        path = _forge(tmp_path, "lambda-tilde", 2)
        capsys.readouterr()
        assert main(["pte", str(path)]) == 0
        assert json.loads(capsys.readouterr().out)["block_size"] == 4

    def test_needs_a_source(self):
        assert main(["pte"]) == 2

    def test_seed_defaults_to_settings(self):
        set_settings(load_settings(None, {"seed": 9}))
        response = CurveOperations().execute("pte", {"family": "B", "d": 3})
        assert response["success"]
        assert response["data"]["document"].witness.seed == 9


class TestInvariants:
    def test_genus_two(self, tmp_path, capsys):
        path = _forge(tmp_path, "theta-tilde", 2)
        capsys.readouterr()
        assert main(["invariants", str(path)]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert set(doc) == {"I2", "I4", "I6", "I10"}
        assert doc["I10"] != "0/1"

    def test_compare_with_itself(self, tmp_path, capsys):
        path = _forge(tmp_path, "theta-tilde", 2)
        capsys.readouterr()
        assert main(["invariants", str(path), "--compare", str(path), "--over", "rational"]) == 0
        assert json.loads(capsys.readouterr().out)["equivalent"] is True

    def test_compare_different_curves(self, tmp_path, capsys):
        first = _forge(tmp_path, "theta-tilde", 2, seed=1)
        second = _forge(tmp_path, "theta-tilde", 2, seed=2)
        capsys.readouterr()
        assert main(["invariants", str(first), "--compare", str(second)]) == 0
        assert json.loads(capsys.readouterr().out)["equivalent"] is False

    def test_higher_genus(self, tmp_path):
        path = _forge(tmp_path, "theta-tilde", 3)
        assert main(["invariants", str(path)]) == 2


@pytest.mark.slow
def test_sieve_with_default_settings(tmp_path, capsys):
    path = _forge(tmp_path, "lambda2", 3)
    capsys.readouterr()
    assert main(["sieve", str(path)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["verdict"] == "PASS"
    assert len(report["primes"]) == 5
    assert report["bound"] == 10
    assert report["support"] == 3
