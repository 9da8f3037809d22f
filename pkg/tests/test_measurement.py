import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from evgrover import analytic
from evgrover.errors import InvalidModelError
from evgrover.measurement import (
    EnsembleModel,
    EvReport,
    bits_to_index,
    chebyshev_bound,
    exact_ev_sigma_z,
    exact_evs,
    measure_evs,
    projective_sample,
    read_bit,
    readout_bits,
    sampled_ev,
)
from evgrover.state import SearchInstance, StateVector, run_grover, uniform_superposition

from oracles import grover_state, sigma_z_ev


def test_basis_state_evs():
    s = StateVector.basis(2, 2)  # x_2 = 1, x_1 = 0
    assert exact_ev_sigma_z(s, 1) == 1.0
    assert exact_ev_sigma_z(s, 2) == -1.0


def test_uniform_evs_zero():
    assert np.all(exact_evs(uniform_superposition(6)) == 0.0)


def test_qubit_index_out_of_range():
    s = uniform_superposition(3)
    with pytest.raises(IndexError):
        exact_ev_sigma_z(s, 0)
    with pytest.raises(IndexError):
        exact_ev_sigma_z(s, 4)


@pytest.mark.parametrize("L,marked,m", [(3, (5,), 2), (4, (1, 6, 12), 2), (5, (0, 31), 3)])
def test_exact_evs_match_dense_observable(L, marked, m):
    got = exact_evs(run_grover(SearchInstance(L, marked), m))
    want = [sigma_z_ev(grover_state(L, marked, m), k, L) for k in range(1, L + 1)]
    np.testing.assert_allclose(got, want, atol=1e-12)


def test_exact_evs_single_vs_batched():
    s = run_grover(SearchInstance(6, (3, 40, 41)), 3)
    batched = exact_evs(s)
    for k in range(1, 7):
        assert abs(batched[k - 1] - exact_ev_sigma_z(s, k)) <= 1e-12


def test_ev_identity_single_marked():
    # M = 1 at L=3, x = 5 -> bits (1, 0, 1) for qubits (1, 2, 3)
    inst = SearchInstance(3, (5,))
    m = 2
    a = analytic.attenuation_after(m, 1, 8)
    np.testing.assert_allclose(exact_evs(run_grover(inst, m)), [-a, a, -a], atol=1e-12)


def test_sampled_ev_deterministic():
    s = run_grover(SearchInstance(4, (9,)), 2)
    model = EnsembleModel(500, seed=7)
    assert sampled_ev(s, 2, model) == sampled_ev(s, 2, model)
    assert measure_evs(s, model).values == measure_evs(s, model).values


def test_sampled_ev_is_ensemble_average():
    v = sampled_ev(uniform_superposition(1), 1, EnsembleModel(101, seed=3))
    # (n0 - n1)/n with n odd can never be zero
    assert v != 0 and abs(v * 101 - round(v * 101)) <= 1e-9


def test_measure_evs_sampled_provenance():
    s = run_grover(SearchInstance(3, (2,)), 1)
    rep = measure_evs(s, EnsembleModel(64, seed=5), conditions=[(1, 0)], target=2)
    assert rep.mode == "sampled" and rep.ensemble_size == 64 and rep.seed == 5
    assert EvReport.from_dict(rep.to_dict()) == rep


def test_ensemble_model_validation():
    with pytest.raises(InvalidModelError):
        EnsembleModel(0)
    with pytest.raises(InvalidModelError):
        EnsembleModel(10, resolution_epsilon=1.0)


def test_for_run_gives_distinct_seeds():
    base = EnsembleModel(10, seed=1)
    seeds = {base.for_run(i).seed for i in range(20)}
    assert len(seeds) == 20
    assert base.for_run(3) == base.for_run(3)


@pytest.mark.parametrize(
    "n,eps,want", [(100, 0.2, 0.9375), (10_000, 0.05, 0.99), (1, 0.1, 0.0), (25, 0.1, 0.0)]
)
def test_chebyshev_bound(n, eps, want):
    assert chebyshev_bound(n, eps) == pytest.approx(want, abs=1e-15)


def test_chebyshev_bound_rejects_bad_input():
    with pytest.raises(ValueError):
        chebyshev_bound(0, 0.1)
    with pytest.raises(ValueError):
        chebyshev_bound(10, 0.0)


def test_projective_sample_peaks_on_marked():
    inst = SearchInstance(2, (2,))
    s = run_grover(inst, 1)
    assert all(projective_sample(s, seed) == 2 for seed in range(10))


@pytest.mark.parametrize(
    "value,bit,tie", [(0.3, 0, False), (-0.3, 1, False), (0.0, 1, True), (-0.0, 1, True)]
)
def test_read_bit(value, bit, tie):
    r = read_bit(value)
    assert (r.bit, r.tie) == (bit, tie)


def test_read_bit_confidence_threshold():
    assert read_bit(0.1, 0.05).confident
    assert not read_bit(0.05, 0.05).confident
    assert not read_bit(-0.01, 0.05).confident


def test_readout_bits_accepts_report_or_list():
    vals = [0.2, -0.4, 0.1]
    rep = EvReport(vals)
    assert readout_bits(rep) == readout_bits(vals)


def test_bits_to_index():
    assert bits_to_index([1, 0, 1]) == 5
    assert bits_to_index([0, 1, 1, 0]) == 6
    assert bits_to_index([]) == 0


@settings(max_examples=60, deadline=None)
@given(L=st.integers(1, 6), data=st.data())
def test_evs_bounded_and_consistent(L, data):
    seed = data.draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    v = rng.normal(size=1 << L) + 1j * rng.normal(size=1 << L)
    s = StateVector(L, v / np.linalg.norm(v))
    evs = exact_evs(s)
    assert np.all(np.abs(evs) <= 1.0)
    for k in range(1, L + 1):
        assert math.isclose(evs[k - 1], sigma_z_ev(s.amplitudes, k, L), abs_tol=1e-12)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 5000), seed=st.integers(0, 10_000))
def test_sampled_ev_grid(n, seed):
    v = sampled_ev(StateVector.basis(2, 1), 2, EnsembleModel(n, seed=seed))
    assert v == 1.0  # a definite qubit-2 value of 0 leaves no sampling noise
