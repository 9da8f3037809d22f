"""
Small-instance identity checks run by ``evgrover verify``.

Each suite compares the state-vector path against an independent closed
form or enumeration and returns a ``SuiteResult``. Bounds are chosen so
that ``--max-qubits 4`` finishes in a few seconds.
"""
from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import analytic
from .errors import ConsistencyError
from .filtering import correlated_target_evs, locate_marked_item
from .measurement import EnsembleModel, chebyshev_bound, exact_ev_sigma_z, sampled_ev
from .state import (
    SearchInstance,
    StateVector,
    apply_diffusion,
    apply_oracle,
    iterate_grover,
    subspace_coefficients,
)


@dataclass
class SuiteResult:
    name: str
    passed: bool
    checks: int
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name:<10} {self.checks:>8} checks  {self.seconds:6.2f}s  {self.detail}"


def _instances(max_qubits: int, max_marked: int, rng: np.random.Generator, per_cell: int = 2):
    for L in range(1, max_qubits + 1):
        N = 1 << L
        for M in range(1, min(max_marked, N - 1) + 1):
            for _ in range(per_cell):
                S = rng.choice(N, size=M, replace=False)
                yield SearchInstance(L, tuple(int(x) for x in S))


def _all_instances(L: int, max_marked: int):
    N = 1 << L
    for M in range(1, min(max_marked, N - 1) + 1):
        for S in itertools.combinations(range(N), M):
            yield SearchInstance(L, S)


def suite_core(max_qubits: int, seed: int) -> SuiteResult:
    """Norm, involutions, two-dimensional closure and agreement with alpha_m."""
    rng = np.random.default_rng(seed)
    checks, worst = 0, 0.0
    for inst in _instances(min(max_qubits, 10), 8, rng):
        m_max = 2 * max(1, analytic.m_standard(inst.M, inst.N)) + 2
        theta = analytic.theta_of(inst.M, inst.N)
        for m, state in enumerate(iterate_grover(inst, m_max)):
            marked, unmarked = subspace_coefficients(state, inst)
            alpha = analytic.amplitudes_after(m, theta).alpha
            worst = max(
                worst,
                abs(state.norm() - 1.0),
                float(np.ptp(marked.real)) if marked.size else 0.0,
                float(np.ptp(unmarked.real)) if unmarked.size else 0.0,
                float(np.abs(marked.imag).max()),
                abs(marked[0].real - alpha / math.sqrt(inst.M)),
            )
            checks += 1
        twice = apply_oracle(apply_oracle(state, inst), inst)
        worst = max(worst, float(np.abs(twice.amplitudes - state.amplitudes).max()))
        twice = apply_diffusion(apply_diffusion(state))
        worst = max(worst, float(np.abs(twice.amplitudes - state.amplitudes).max()))
    return SuiteResult("core", worst <= 1e-9, checks, f"max deviation {worst:.2e}")


def suite_ev_identity(max_qubits: int, seed: int) -> SuiteResult:
    """<Z_k> = (A_m/M) sum_{x in S} (-1)^{x_k} on every qubit."""
    rng = np.random.default_rng(seed + 1)
    checks, worst = 0, 0.0
    for inst in _instances(min(max_qubits, 10), 8, rng):
        m_max = 2 * max(1, analytic.m_standard(inst.M, inst.N))
        for m, state in enumerate(iterate_grover(inst, m_max)):
            a = analytic.attenuation_after(m, inst.M, inst.N)
            for k in range(1, inst.num_qubits + 1):
                sign_sum = sum(1 - 2 * ((x >> (k - 1)) & 1) for x in inst.marked)
                worst = max(worst, abs(exact_ev_sigma_z(state, k) - a / inst.M * sign_sum))
                checks += 1
    return SuiteResult("ev-identity", worst <= 1e-9, checks, f"max residual {worst:.2e}")


def _condition_batch(L: int, target: int, max_size: int):
    """All (mask, value) pairs with 1..max_size conditions on qubits other than ``target``."""
    others = [q for q in range(1, L + 1) if q != target]
    masks, values = [], []
    for size in range(1, min(max_size, len(others)) + 1):
        for qubits in itertools.combinations(others, size):
            mask = sum(1 << (q - 1) for q in qubits)
            for bits in itertools.product((0, 1), repeat=size):
                masks.append(mask)
                values.append(sum(b << (q - 1) for q, b in zip(qubits, bits)))
    return np.array(masks, dtype=np.int64), np.array(values, dtype=np.int64)


def suite_filtering(max_qubits: int, seed: int, m_max: int = 20) -> SuiteResult:
    """Two-run filtered EV against the sum over the filtered marked subset."""
    rng = np.random.default_rng(seed + 2)
    top = min(max_qubits, 6)
    pool: list[SearchInstance] = []
    for L in range(2, top + 1):
        if L <= 3:
            pool.extend(_all_instances(L, 4))
        else:
            N = 1 << L
            for M in range(1, 5):
                for _ in range(4):
                    S = rng.choice(N, size=M, replace=False)
                    pool.append(SearchInstance(L, tuple(int(x) for x in S)))
    checks, worst = 0, 0.0
    for inst in pool:
        L, M = inst.num_qubits, inst.M
        S = inst.marked_indices()
        batches = {t: _condition_batch(L, t, 3) for t in range(1, L + 1)}
        for m, state in enumerate(iterate_grover(inst, m_max)):
            a = analytic.attenuation_after(m, M, inst.N)
            plain = {t: exact_ev_sigma_z(state, t) for t in range(1, L + 1)}
            for t, (masks, values) in batches.items():
                corr = correlated_target_evs(state, t, masks, values)
                got = 0.5 * (plain[t] + corr)
                match = (S[None, :] & masks[:, None]) == values[:, None]
                signs = 1 - 2 * ((S >> (t - 1)) & 1)
                want = a / M * (match * signs[None, :]).sum(axis=1)
                worst = max(worst, float(np.abs(got - want).max()))
                checks += len(masks)
    return SuiteResult("filtering", worst <= 1e-9, checks, f"max residual {worst:.2e}")


def suite_cascade(max_qubits: int, seed: int) -> SuiteResult:
    """Exact-EV cascade lands in S within L runs whenever A_m > 0."""
    top = min(max_qubits, 6)
    rng = np.random.default_rng(seed + 3)
    checks = failures = 0
    for L in range(1, top + 1):
        pool = list(_all_instances(L, (1 << L) - 1)) if L <= 3 else [
            SearchInstance.random(L, int(rng.integers(1, (1 << L))), int(rng.integers(2**31)))
            for _ in range(60)
        ]
        for inst in pool:
            m_max = max(2, 2 * analytic.m_standard(inst.M, inst.N))
            for m in range(1, m_max + 1):
                if analytic.attenuation_after(m, inst.M, inst.N) <= 0:
                    continue
                try:
                    out = locate_marked_item(inst, m)
                except ConsistencyError:
                    failures += 1
                    continue
                failures += not out.success or out.runs_used > L
                checks += 1
    return SuiteResult("cascade", failures == 0, checks, f"{failures} failures")


def suite_planner(max_qubits: int, seed: int) -> SuiteResult:
    """Planner equals the exhaustive scan; closed form within one step."""
    checks = mismatches = 0
    worst_gap = 0
    for L in range(1, min(max_qubits + 8, 16) + 1):
        N = 1 << L
        for M in range(1, min(4, N - 1) + 1):
            if analytic.is_degenerate(M, N):
                continue
            m_stand = analytic.m_standard(M, N)
            for frac in (0.0, 0.01, 0.1, 0.5, 0.9):
                eps = frac / M
                planned = analytic.min_truncated_iterations(eps, M, N)
                scanned = analytic.scan_min_iterations(eps, M, N, m_stand)
                scanned = m_stand if scanned is None else scanned
                mismatches += planned != scanned
                worst_gap = max(worst_gap, abs(analytic.closed_form_iterations(eps, M, N) - scanned))
                checks += 1
            mismatches += analytic.min_truncated_iterations(1.0 / M, M, N) != m_stand
            checks += 1
    ok = mismatches == 0 and worst_gap <= 1
    return SuiteResult("planner", ok, checks, f"{mismatches} mismatches, closed-form gap {worst_gap}")


def suite_chebyshev(max_qubits: int, seed: int, trials: int = 1000) -> SuiteResult:
    """Empirical coverage of |xbar - EV| < eps is at least the Chebyshev bound."""
    details, ok, checks = [], True, 0
    for n, eps in ((100, 0.2), (10_000, 0.05)):
        for ev in (0.0, 0.5, -0.8):
            half = math.acos(math.sqrt((1.0 + ev) / 2.0))
            state = StateVector(1, np.array([math.cos(half), math.sin(half)]))
            exact = exact_ev_sigma_z(state, 1)
            hits = sum(
                abs(sampled_ev(state, 1, EnsembleModel(n, seed + t)) - exact) < eps
                for t in range(trials)
            )
            cover = hits / trials
            bound = chebyshev_bound(n, eps)
            ok &= cover >= bound
            checks += trials
            details.append(f"n={n} ev={ev:+.1f}: {cover:.3f}>={bound:.4f}")
    return SuiteResult("chebyshev", ok, checks, "; ".join(details))


SUITES: dict[str, Callable[[int, int], SuiteResult]] = {
    "core": suite_core,
    "ev-identity": suite_ev_identity,
    "filtering": suite_filtering,
    "cascade": suite_cascade,
    "planner": suite_planner,
    "chebyshev": suite_chebyshev,
}


def run_suites(names: list[str] | None, max_qubits: int, seed: int = 0) -> list[SuiteResult]:
    results = []
    for name in names or list(SUITES):
        t0 = time.perf_counter()
        res = SUITES[name](max_qubits, seed)
        res.seconds = time.perf_counter() - t0
        results.append(res)
    return results
