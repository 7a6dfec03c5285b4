import pytest

from teamsem.experiments import (EXPERIMENTS, ExperimentOptions,
                                 ExperimentResult, list_experiments,
                                 run_experiment)


def test_ids_unique_and_claims_present():
    ids = [name for name, _claim, _fn in EXPERIMENTS]
    assert len(ids) == len(set(ids))
    assert all(claim for _name, claim, _fn in list_experiments())


def test_record_line_format():
    result = ExperimentResult("x", "PASS", "details here")
    assert result.line() == "x\tPASS\tdetails here"


def test_unknown_experiment_raises():
    with pytest.raises(KeyError):
        run_experiment("missing")


def test_anon_remark_experiment():
    result = run_experiment("one-element-anon-remark")
    assert result.verdict == "PASS"
    assert "flattening" in result.details


def test_ne_distribution_reports_measured_status():
    result = run_experiment("ne-disjunction-distribution")
    assert result.verdict == "PASS"
    assert "measured" in result.details
    assert "stable across strategies" in result.details


def test_magma_experiment_reports_computed_counterexample():
    result = run_experiment("magma-closed-teams")
    assert result.verdict == "FAIL"
    assert "anon(x; y)" in result.details
    assert "closed team" in result.details


def test_exclusion_mode_threads_through():
    result = run_experiment("exclusion-flattening-inequality",
                            ExperimentOptions(exclusion_mode="neq"))
    assert result.verdict == "PASS"


def test_coherence_experiment():
    result = run_experiment("coherence-examples")
    assert result.verdict == "PASS"
