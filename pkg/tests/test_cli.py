"""Command-line surface: exit codes, report schema, determinism."""

import json
import subprocess
import sys

from quadclif import __version__
from quadclif.checks import CHECK_ORDER
from quadclif.cli import main
from quadclif.pencil import load_instance, save_instance

from conftest import cached_pencil
from test_checks import diag_instance

# Pinned output of `gen --seed 42 --bound 5`; the instance format and the
# generator are both frozen, so this digest must never drift.
SEED42_DIGEST = "b0b63425e0f60cbaeaf492a2dfe51db1359208f7968fe5c080b8a75b5cb336d4"


def gen(tmp_path, seed=42, bound=5, name="inst.json"):
    out = tmp_path / name
    rc = main(["gen", "--seed", str(seed), "--bound", str(bound),
               "-o", str(out)])
    assert rc == 0
    return out


def stripped(report_path):
    rep = json.loads(report_path.read_text())
    for c in rep["checks"]:
        del c["seconds"]
    return rep


class TestGen:
    def test_digest_pinned_and_reproducible(self, tmp_path, capsys):
        out = gen(tmp_path)
        assert capsys.readouterr().out.strip() == SEED42_DIGEST
        data = out.read_bytes()
        out2 = gen(tmp_path, name="again.json")
        assert out2.read_bytes() == data
        assert load_instance(str(out)).digest() == SEED42_DIGEST

    def test_different_seed_different_instance(self, tmp_path, capsys):
        gen(tmp_path, seed=7, name="a.json")
        d7 = capsys.readouterr().out.strip()
        assert d7 != SEED42_DIGEST and len(d7) == 64

    def test_bad_bound(self, tmp_path, capsys):
        rc = main(["gen", "--seed", "1", "--bound", "0",
                   "-o", str(tmp_path / "x.json")])
        assert rc == 2
        assert "error" in capsys.readouterr().err

    def test_unwritable_out(self, tmp_path, capsys):
        rc = main(["gen", "--seed", "1", "--bound", "3",
                   "-o", str(tmp_path / "no" / "dir" / "x.json")])
        assert rc == 2


class TestCheckUsage:
    def test_missing_instance_file(self, tmp_path, capsys):
        rc = main(["check", str(tmp_path / "absent.json")])
        assert rc == 2
        assert "error" in capsys.readouterr().err

    def test_unknown_check_id(self, tmp_path):
        inst = gen(tmp_path, seed=1, bound=3)
        assert main(["check", "prop9.9-nope", str(inst)]) == 2

    def test_two_instance_paths(self, tmp_path):
        inst = gen(tmp_path, seed=1, bound=3)
        assert main(["check", str(inst), str(inst)]) == 2

    def test_instance_needed_but_missing(self):
        assert main(["check", "prop2.2-smoothness"]) == 2

    def test_two_check_ids(self, tmp_path):
        inst = gen(tmp_path, seed=1, bound=3)
        assert main(["check", "prop3.13-center", "prop4.8-m0-matrix",
                     str(inst)]) == 2

    def test_bad_flags(self, tmp_path):
        inst = gen(tmp_path, seed=1, bound=3)
        assert main(["check", str(inst), "--primes", "101,frog"]) == 2
        assert main(["check", str(inst), "--primes", "7"]) == 2
        assert main(["check", "prop4.9-segre", str(inst),
                     "--points", "0"]) == 2
        assert main(["check", "prop4.9-segre", str(inst),
                     "--max-degree", "9"]) == 2

    def test_corrupt_instance_json(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{\"not\": \"an instance\"}")
        assert main(["check", bad.as_posix()]) == 2


class TestCheckRuns:
    def test_instance_free_without_instance(self, capsys):
        rc = main(["check", "prop4.9-segre"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "PASS prop4.9-segre" in out
        assert "overall: pass" in out

    def test_single_check_on_instance(self, tmp_path, capsys):
        inst = gen(tmp_path)
        rc = main(["check", "prop3.12-dplus-square", str(inst)])
        assert rc == 0
        assert "PASS prop3.12-dplus-square" in capsys.readouterr().out

    def test_diagonal_instance_fails(self, tmp_path, capsys):
        path = tmp_path / "diag.json"
        save_instance(diag_instance(), str(path))
        report = tmp_path / "r.json"
        rc = main(["check", "prop2.2-smoothness", str(path),
                   "--report", str(report)])
        assert rc == 1
        out = capsys.readouterr().out
        assert "FAIL prop2.2-smoothness" in out
        assert "overall: fail" in out
        rep = json.loads(report.read_text())
        assert rep["overall"] == "fail"
        pts = [tuple(w["point"]) for w in rep["checks"][0]["witnesses"]
               if w.get("point")]
        assert (1, 0, 0) in pts

    def test_report_schema_and_determinism(self, tmp_path, capsys):
        inst = gen(tmp_path)
        r1, r2 = tmp_path / "r1.json", tmp_path / "r2.json"
        argv = ["check", "prop3.13-center", str(inst)]
        assert main(argv + ["--report", str(r1)]) == 0
        assert main(argv + ["--report", str(r2)]) == 0
        capsys.readouterr()
        rep = stripped(r1)
        assert rep == stripped(r2)
        assert rep["schema"] == 1
        assert rep["tool"] == {"name": "quadclif", "version": __version__}
        assert rep["instance"]["digest"] == SEED42_DIGEST
        assert rep["instance"]["seed"] == 42
        assert rep["primes"] == [101, 103, 107]
        assert rep["flags"] == {"points": 20, "max_degree": 6}
        ids = [c["id"] for c in rep["checks"]]
        assert ids == ["prop3.13-center"]

    def test_full_run(self, tmp_path, capsys):
        inst = tmp_path / "inst.json"
        save_instance(cached_pencil(42), str(inst))
        report = tmp_path / "full.json"
        rc = main(["check", str(inst), "--points", "2",
                   "--report", str(report)])
        assert rc == 0
        lines = [ln for ln in capsys.readouterr().out.splitlines() if ln]
        assert lines[-1] == "overall: pass"
        assert [ln.split()[1] for ln in lines[:-1]] == list(CHECK_ORDER)
        rep = json.loads(report.read_text())
        assert [c["id"] for c in rep["checks"]] == list(CHECK_ORDER)
        assert all(c["status"] == "pass" for c in rep["checks"])


class TestEntryPoint:
    def test_module_invocation(self, tmp_path):
        out = tmp_path / "m.json"
        proc = subprocess.run(
            [sys.executable, "-m", "quadclif", "gen", "--seed", "3",
             "--bound", "4", "-o", str(out)],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        assert len(proc.stdout.strip()) == 64
        assert out.exists()

    def test_usage_error_on_no_subcommand(self):
        proc = subprocess.run(
            [sys.executable, "-m", "quadclif"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 2
