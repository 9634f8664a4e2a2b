import pytest

from singular_weyl import ParameterSet
from singular_weyl.verify import (
    run_verification,
    sweep_contiguous,
    sweep_harmonicity,
    sweep_heisenberg,
    sweep_periodicity,
)


def test_report_schema_and_warn():
    params = ParameterSet(n=2, q=0, s=0.5j)
    report = run_verification(params, lam_max=6, m_max=4, contiguous_samples=50, pde_points=10)
    assert report["ok"]
    assert {"params", "checks", "summary", "ok"} <= set(report)
    statuses = {c["check"]: c["status"] for c in report["checks"]}
    assert statuses["operators/printed-coefficient-diff"] == "WARN"
    assert report["summary"]["FAIL"] == 0
    assert report["summary"]["WARN"] >= 1
    for check in report["checks"]:
        assert {"check", "status", "max_residual", "tolerance"} <= set(check)


def test_deterministic_for_fixed_seed():
    params = ParameterSet(n=2, q=1, s=-0.25)
    first = run_verification(params, lam_max=4, m_max=4, seed=5, contiguous_samples=20, pde_points=5)
    second = run_verification(params, lam_max=4, m_max=4, seed=5, contiguous_samples=20, pde_points=5)
    assert first == second


def test_sweeps_standalone():
    assert all(c["status"] == "PASS" for c in sweep_contiguous(samples=30))
    assert all(c["status"] == "PASS" for c in sweep_harmonicity(3, 3))
    params = ParameterSet(n=1, q=1, s=0.5j)
    assert all(c["status"] == "PASS" for c in sweep_periodicity(params, lam_max=6, m_max=6))


def test_heisenberg_sweep_reports_lowering_diff():
    params = ParameterSet(n=3, q=3, s=0.5j)
    checks = sweep_heisenberg(params, lam_max=10, m_max=6, points=30)
    by_name = {c["check"]: c for c in checks}
    assert by_name["operators/heisenberg-lsq"]["status"] == "PASS"
    assert by_name["operators/heisenberg-shipped-match"]["status"] == "PASS"
    assert by_name["operators/printed-coefficient-diff"]["status"] == "WARN"
    assert by_name["operators/printed-coefficient-diff"]["count"] > 0
