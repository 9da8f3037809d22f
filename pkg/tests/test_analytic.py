import math

import pytest

from evgrover import analytic
from evgrover.errors import (
    ConsistencyError,
    DegenerateInstanceError,
    ResolutionInfeasibleError,
)

from oracles import attenuation_direct, scan_min_m


def test_theta_quarter():
    assert abs(analytic.theta_of(1, 4) - math.pi / 3) <= 1e-15


def test_theta_half():
    assert analytic.theta_of(8, 16) == math.pi / 2


def test_theta_small_angle():
    N = 2**20
    th = analytic.theta_of(1, N)
    assert abs(th - 2 * math.sqrt(1 / N)) / th <= 1e-3


@pytest.mark.parametrize("M,N", [(0, 4), (4, 4), (5, 4)])
def test_theta_degenerate(M, N):
    with pytest.raises(DegenerateInstanceError):
        analytic.theta_of(M, N)


def test_amplitudes_initial():
    th = analytic.theta_of(3, 64)
    assert abs(analytic.amplitudes_after(0, th).alpha - math.sqrt(3 / 64)) <= 1e-15


def test_amplitudes_exact_rotation():
    st = analytic.amplitudes_after(1, analytic.theta_of(1, 4))
    assert abs(st.alpha - 1) <= 1e-15 and abs(st.beta) <= 1e-15


def test_m_standard_examples():
    assert analytic.m_standard(1, 4) == 1
    assert analytic.m_standard(2, 8) == 1
    assert analytic.m_standard(1, 2**20) == 804
    assert analytic.m_standard(1, 8) == 2
    assert analytic.m_standard(1, 2**16) == 201


def test_m_standard_unclamped_for_dense_marking():
    # M/N > (pi/4)^2: the uniform state already beats any rotation
    assert analytic.m_standard(3, 4) == 0
    assert analytic.m_standard(6, 8) == 0


def test_attenuation_examples():
    assert analytic.attenuation(math.sqrt(3 / 16), 3, 16) == pytest.approx(0, abs=1e-15)
    assert analytic.attenuation(1.0, 3, 16) == 1.0
    assert analytic.attenuation(math.sin(math.pi / 2), 1, 4) == 1.0


def test_attenuation_after_zero_iterations_exact():
    for M, N in [(1, 4), (3, 32), (7, 1024), (100, 4096)]:
        assert analytic.attenuation_after(0, M, N) == 0.0


def test_attenuation_after_exact_rotation():
    assert analytic.attenuation_after(1, 1, 4) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("M,N", [(1, 1024), (3, 256), (8, 4096), (5, 64)])
def test_attenuation_after_matches_literal_formula(M, N):
    for m in range(0, 3 * analytic.m_standard(M, N)):
        assert abs(analytic.attenuation_after(m, M, N) - attenuation_direct(m, M, N)) <= 1e-12


def test_attenuation_half_marked_identically_zero():
    for m in range(10):
        assert analytic.attenuation_after(m, 4, 8) == 0.0


def test_predicted_ratio_limits():
    assert analytic.predicted_ratio(1.0, 3, 64) == pytest.approx(1.0, abs=1e-15)
    assert analytic.predicted_ratio(0.0, 3, 64) == pytest.approx(
        2 / math.pi * math.asin(math.sqrt(3 / 64)), abs=1e-15
    )


def test_predicted_ratio_small_argument_form():
    r, N = 0.01, 2**20
    exact = analytic.predicted_ratio(r, 1, N)
    approx = 2 / math.pi * math.sqrt(r + 1 / N)
    assert abs(exact - approx) / exact <= 0.01


def test_predicted_ratio_monotone():
    values = [analytic.predicted_ratio(r / 100, 2, 1024) for r in range(101)]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_pm_success_probability():
    assert analytic.pm_success_probability(1.0) == 1.0
    assert analytic.pm_success_probability(0.0) == 0.0


@pytest.mark.parametrize("L", range(2, 13))
@pytest.mark.parametrize("M", range(1, 9))
def test_pm_worst_case_bound(L, M):
    N = 1 << L
    if M > N - 1:
        pytest.skip("M must be below N")
    m = analytic.m_standard(M, N)
    alpha = analytic.amplitudes_after(m, analytic.theta_of(M, N)).alpha
    assert analytic.pm_success_probability(alpha) >= 1 - M / N - 1e-12


def test_classical_queries():
    assert analytic.classical_expected_queries(1, 100) == 50
    assert analytic.classical_expected_queries(1, 4) == 2


def test_planner_zero_resolution_is_one():
    for M, N in [(1, 4), (1, 1024), (3, 64), (4, 2**14)]:
        assert analytic.min_truncated_iterations(0.0, M, N) == 1


def test_planner_r_one_is_m_standard():
    for M, N in [(1, 8), (1, 2**16), (3, 2**10), (4, 2**14)]:
        assert analytic.min_truncated_iterations(1.0 / M, M, N) == analytic.m_standard(M, N)


def test_planner_large_instance_matches_scan():
    N = 2**20
    got = analytic.min_truncated_iterations(0.01, 1, N)
    want = scan_min_m(0.01, 1, N, analytic.m_standard(1, N))
    assert got == want
    assert abs(got - 51) <= 1


def test_planner_rejects_coarse_resolution():
    with pytest.raises(ResolutionInfeasibleError):
        analytic.min_truncated_iterations(0.6, 2, 64)
    with pytest.raises(ResolutionInfeasibleError):
        analytic.min_truncated_iterations(-0.1, 2, 64)


def test_planner_verify_flag_passes():
    assert analytic.min_truncated_iterations(0.05, 2, 2**12, verify=True) >= 1


def test_planner_verify_flag_detects_disagreement(monkeypatch):
    real = analytic.attenuation_after
    calls = {"n": 0}

    def skewed(m, M, N):
        calls["n"] += 1
        return real(m, M, N) + (0.5 if calls["n"] > 20 else 0.0)

    monkeypatch.setattr(analytic, "attenuation_after", skewed)
    with pytest.raises(ConsistencyError):
        analytic.min_truncated_iterations(0.4, 1, 2**12, verify=True)


@pytest.mark.parametrize("L", range(2, 15))
@pytest.mark.parametrize("M", [1, 2, 3, 4])
@pytest.mark.parametrize("frac", [0.0, 0.1, 0.5, 0.9])
def test_planner_equals_exhaustive_scan(L, M, frac):
    N = 1 << L
    if 2 * M >= N:
        pytest.skip("half-marked or denser: no positive attenuation")
    eps = frac / M
    m_stand = analytic.m_standard(M, N)
    want = scan_min_m(eps, M, N, m_stand)
    got = analytic.min_truncated_iterations(eps, M, N)
    assert got == (m_stand if want is None else want)
    assert abs(analytic.closed_form_iterations(eps, M, N) - got) <= 1


@pytest.mark.parametrize("L", range(2, 13))
@pytest.mark.parametrize("M", range(1, 9))
def test_attenuation_range_and_monotone(L, M):
    N = 1 << L
    if 2 * M >= N:
        pytest.skip("covered by the acceptance suite")
    m_stand = analytic.m_standard(M, N)
    a = [analytic.attenuation_after(m, M, N) for m in range(m_stand + 1)]
    assert all(0 <= v <= 1 for v in a)
    assert all(y > x for x, y in zip(a, a[1:]))


def test_plan_record():
    plan = analytic.plan_truncation(0.01, 1, 2**16)
    assert plan.epsilon_stand == 1.0
    assert plan.m_stand == 201 and plan.m_trunc == 13
    assert plan.feasible and not plan.degenerate
    assert plan.attenuation > 0.01
    assert 1 <= plan.m_trunc <= plan.m_stand


def test_plan_flags_degenerate():
    assert analytic.plan_truncation(0.0, 4, 8).degenerate
