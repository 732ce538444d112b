import json
import subprocess
import sys

import pytest

from cdglab.scalars import FieldSpec
from cdglab.verifier import report as rp
from cdglab.verifier.cli import main
from cdglab.verifier.scenarios import REGISTRY, Context, resolve

FAST = ["interval-sweep", "graded-free-not-contractible", "splitting-cones"]


def test_registry_has_every_scenario():
    assert {"axioms-sweep", "interval-sweep", "homotopy-forget", "ses-totalization", "deformation-cone",
            "z2-decomposition", "z2-tautology", "splitting-cones", "splitting-cocycle", "deformation-hom",
            "bar-contraction", "bar-inverting", "graded-free-not-contractible"} <= set(REGISTRY)


def test_every_expectation_has_a_provenance():
    ctx = Context()
    for sc in resolve(FAST):
        for x in sc.run(ctx):
            assert x.provenance in ("source", "trivial", "derived")


def test_empty_selection_exits_zero(capsys):
    assert main([]) == 0


def test_unknown_scenario_is_a_usage_error(capsys):
    assert main(["--scenario", "no-such-thing"]) == 2
    assert "unknown scenario" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [["--window", "3:1"], ["--field", "fp:6"], ["--bar-convention", "lax"]])
def test_bad_arguments_exit_two(argv, capsys):
    with pytest.raises(SystemExit) as e:
        main(argv)
    assert e.value.code == 2


def test_passing_scenario_exits_zero(tmp_path, capsys):
    path = tmp_path / "r.json"
    assert main(["--scenario", "interval-sweep", "--report", str(path), "-q"]) == 0
    data = rp.parse(path.read_text())
    assert data["schema_version"] == 1 and data["ok"]
    assert [e["name"] for e in data["scenarios"]] == ["interval-sweep"]


def test_failing_scenario_exits_one(capsys):
    # the pair (1, ε) turns out to be a boundary, so this scenario reports a failure
    assert main(["--scenario", "splitting-cocycle"]) == 1
    assert "failed: (1, ε) is not a boundary" in capsys.readouterr().out


def test_list(capsys):
    assert main(["--list"]) == 0
    out = capsys.readouterr().out
    assert all(name in out for name in REGISTRY)


def test_report_round_trip_and_order():
    r = rp.run(resolve(list(reversed(FAST))), Context(FieldSpec(5)))
    assert rp.parse(rp.emit(r)) == r
    assert [e["name"] for e in r["scenarios"]] == sorted(FAST)
    assert r["field"] == "fp:5"


def test_reports_are_deterministic():
    a = rp.run(resolve(["homotopy-forget", "z2-decomposition"]), Context(seed=7))
    b = rp.run(resolve(["homotopy-forget", "z2-decomposition"]), Context(seed=7), workers=2)
    assert rp.emit(rp.strip_timing(a)) == rp.emit(rp.strip_timing(b))


def test_schema_mismatch_is_refused():
    with pytest.raises(ValueError):
        rp.parse(json.dumps({"schema_version": 99}))


def test_crashing_scenario_is_a_failed_entry():
    from cdglab.verifier.scenarios import Scenario

    def boom(ctx):
        raise RuntimeError("kaboom")

    e = rp.run_scenario(Scenario("boom", "crashes", boom), Context())
    assert not e["ok"] and "kaboom" in e["error"]


def test_console_script_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "cdglab.verifier", "--scenario", "bar-inverting", "-q"],
                         capture_output=True, text=True)
    assert res.returncode == 0, res.stderr
