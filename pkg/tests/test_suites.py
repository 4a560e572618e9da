import pytest

from suenrich.suites import ALL, SUITES, Options, run, run_suite


def test_options_validation():
    with pytest.raises(ValueError):
        Options(mutate="nonsense")
    with pytest.raises(ValueError):
        run_suite("nonsense")
    assert set(ALL) <= set(SUITES) and "transfer" not in ALL


@pytest.mark.parametrize("name", ["su", "omega"])
def test_clean_suites_pass(name):
    r = run_suite(name)
    assert r.passed and r.checks
    js = r.to_json(timing=True)
    assert js["pass"] and js["failed"] == 0 and "seconds" in js


def test_gamma_mutation_is_caught():
    r = run_suite("gamma", Options(mutate="gamma-table", fail_fast=True))
    assert not r.passed
    assert r.failures()[0].name.startswith("gamma-identity")


def test_eta_mutation_is_caught():
    r = run_suite("wf", Options(mutate="eta-idempotent", fail_fast=True))
    assert not r.passed


def test_run_selection():
    results = run("su")
    assert [r.name for r in results] == ["su"]
