import json
import subprocess
import sys

import pytest

from charp import scenarios
from charp.config import Budget, _FAST, load_config


FROZEN_IDS = {
    "decalage", "sym-cohomology", "four-term-exact", "norm-cokernel-zp2",
    "cartier", "omega-trunc-vs-symp", "steenrod-p0", "steenrod-p1",
    "witt-bockstein-agree", "algebra-bockstein", "witt-identity", "ghost-v",
    "additive-cohomology-dims", "lattice-vanishing", "semidirect-agree",
    "weights-1", "weights-2", "weights-3", "weights-4",
    "borel-1", "borel-2", "borel-3", "field-search",
    "alpha-sl2-f4", "alpha-u2-f2-zero", "alpha-ta-f9", "chi1-iso",
    "integral-facts-p2", "bock-alpha-nonzero-p2",
}


def test_registry_is_the_frozen_surface():
    assert set(scenarios.REGISTRY) == FROZEN_IDS


def test_unknown_scenario():
    with pytest.raises(KeyError):
        scenarios.run("no-such-scenario")


def test_invalid_params_rejected():
    with pytest.raises(ValueError):
        scenarios.run("witt-identity", {"quark": 7})


def test_report_schema():
    rep = scenarios.run("witt-identity", {"p": 3})
    for key in ("id", "params", "computed", "expected", "pass", "skipped",
                "runtime_ms", "version"):
        assert key in rep
    for item in rep["expected"].values():
        assert item["provenance"] in ("paper", "trivial", "derived")
    json.dumps(rep)   # serialisable


def test_reports_deterministic_modulo_runtime():
    a = scenarios.run("ghost-v", {"p": 3, "seed": 11})
    b = scenarios.run("ghost-v", {"p": 3, "seed": 11})
    a.pop("runtime_ms")
    b.pop("runtime_ms")
    assert a == b


def test_budget_exceeded_is_skipped_not_passed():
    tiny = Budget(_FAST)
    tiny["max_level"] = 1
    rep = scenarios.run("decalage", {"p": 3}, budget=tiny)
    assert rep["skipped"] is True and rep["pass"] is False
    assert scenarios.exit_code([rep]) == 0   # skipped is not a failure


def test_run_all_empty_filter():
    reports = scenarios.run_all("no-such-tag")
    assert reports == []
    assert scenarios.exit_code(reports) == 0


def test_run_all_combinatorics_tag():
    reports = scenarios.run_all("combinatorics")
    ids = {r["id"] for r in reports}
    assert {"weights-1", "weights-2", "weights-3", "weights-4",
            "borel-1", "borel-2", "borel-3", "field-search"} <= ids
    assert all(r["pass"] for r in reports)


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "charp.cli", *args],
                          capture_output=True, text=True)


def test_cli_list():
    out = _cli("list")
    assert out.returncode == 0
    assert "witt-identity" in out.stdout


def test_cli_run_json_and_out(tmp_path):
    target = tmp_path / "report.json"
    out = _cli("run", "witt-identity", "--p", "2", "--json",
               "--out", str(target))
    assert out.returncode == 0
    rep = json.loads(out.stdout)
    assert rep["pass"] is True and rep["params"]["p"] == 2
    ondisk = json.loads(target.read_text())
    assert ondisk["id"] == "witt-identity"


def test_cli_usage_errors():
    assert _cli("run", "definitely-not-a-scenario").returncode == 2
    assert _cli("run", "witt-identity", "--dim", "3").returncode == 2
    assert _cli().returncode == 2


def test_config_file_overrides(tmp_path):
    cfg = tmp_path / "budget.cfg"
    cfg.write_text("max_level = 3\nmax_terms = 5\n")
    budget = load_config(str(cfg))
    assert budget.max_level == 3 and budget.max_terms == 5
    cfg2 = tmp_path / "budget.toml"
    cfg2.write_text('max_group_order = 123\nstretch_p5 = true\n')
    budget2 = load_config(str(cfg2))
    assert budget2.max_group_order == 123 and budget2.stretch_p5 is True


def test_profile_selection(monkeypatch):
    monkeypatch.setenv("CHARP_BUDGET_PROFILE", "full")
    budget = load_config()
    assert budget.profile == "full" and budget.stretch_p5 is True
    monkeypatch.setenv("CHARP_BUDGET_PROFILE", "bogus")
    with pytest.raises(ValueError):
        load_config()


def test_run_all_fast_under_two_minutes():
    import time
    t0 = time.time()
    reports = scenarios.run_all("fast")
    elapsed = time.time() - t0
    assert reports and all(r["pass"] for r in reports)
    assert elapsed < 120, f"fast scenarios took {elapsed:.0f}s"
