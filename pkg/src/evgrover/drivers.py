"""
End-to-end searches in the PM, standard EV and truncated EV versions, and
the sweep that compares truncated against standard iteration counts.

Instances with 2M >= N are searched on a register padded with one extra
(unmarked) qubit: there the plain rotation gives A_m <= 0 and the EV
readout would carry no usable sign. The padded register still satisfies
L - 1 <= log2(N) <= L for the original database.
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from typing import Iterable, Sequence

import numpy as np

from . import analytic
from .errors import ResolutionInfeasibleError
from .filtering import locate_marked_item
from .measurement import EnsembleModel, EvReport, projective_sample
from .state import SearchInstance, run_grover

VERSIONS: tuple[str, ...] = ("pm", "ev_standard", "ev_truncated")


@dataclass
class SearchResult:
    version: str
    num_qubits: int
    num_marked: int
    marked: list[int]
    instance_seed: int | None
    seed: int
    register_qubits: int
    iterations_used: int
    m_standard: int
    runs_used: int
    oracle_queries: int
    found: int | None
    success: bool
    attenuation: float
    epsilon: float
    ensemble_size: int
    member_queries: int
    ev_reports: list[EvReport] = field(default_factory=list)
    confident: list[bool] = field(default_factory=list)
    ties: list[bool] = field(default_factory=list)
    wall_time: float = field(default=0.0, compare=False)

    def to_dict(self) -> dict:
        d = {f.name: getattr(self, f.name) for f in fields(self)}
        d["ev_reports"] = [r.to_dict() for r in self.ev_reports]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> SearchResult:
        d = dict(d)
        d["ev_reports"] = [EvReport.from_dict(r) for r in d.get("ev_reports", [])]
        return cls(**d)

    def summary(self) -> dict:
        """Flat scalar view, one CSV row."""
        d = self.to_dict()
        d.pop("ev_reports")
        d["marked"] = " ".join(str(x) for x in self.marked)
        d["confident"] = all(self.confident)
        d["ties"] = sum(self.ties)
        return d


def search_register(inst: SearchInstance) -> SearchInstance:
    """Register the EV versions run on: ``inst`` itself, or padded by one qubit if 2M >= N."""
    if analytic.is_degenerate(inst.M, inst.N):
        return inst.padded(1)
    return inst


def run_standard_pm(
    inst: SearchInstance,
    seed: int = 0,
    *,
    iterations: int | None = None,
    instance_seed: int | None = None,
) -> SearchResult:
    """m_stand iterates, then one projective measurement of the register."""
    t0 = time.perf_counter()
    m_stand = analytic.m_standard(inst.M, inst.N)
    m = m_stand if iterations is None else iterations
    state = run_grover(inst, m)
    x = projective_sample(state, seed)
    return SearchResult(
        version="pm",
        num_qubits=inst.num_qubits,
        num_marked=inst.M,
        marked=list(inst.marked),
        instance_seed=instance_seed,
        seed=seed,
        register_qubits=inst.num_qubits,
        iterations_used=m,
        m_standard=m_stand,
        runs_used=1,
        oracle_queries=m,
        found=x,
        success=x in inst,
        attenuation=analytic.attenuation_after(m, inst.M, inst.N),
        epsilon=0.0,
        ensemble_size=0,
        member_queries=m,
        wall_time=time.perf_counter() - t0,
    )


def _ev_search(
    version: str,
    inst: SearchInstance,
    reg: SearchInstance,
    m: int,
    m_stand: int,
    model: EnsembleModel | None,
    epsilon: float,
    instance_seed: int | None,
    t0: float,
) -> SearchResult:
    outcome = locate_marked_item(reg, m, model, epsilon)
    n = model.size if model is not None else 0
    return SearchResult(
        version=version,
        num_qubits=inst.num_qubits,
        num_marked=inst.M,
        marked=list(inst.marked),
        instance_seed=instance_seed,
        seed=model.seed if model is not None else 0,
        register_qubits=reg.num_qubits,
        iterations_used=m,
        m_standard=m_stand,
        runs_used=outcome.runs_used,
        oracle_queries=outcome.oracle_queries,
        found=outcome.location,
        success=outcome.location in inst,
        attenuation=outcome.attenuation,
        epsilon=epsilon,
        ensemble_size=n,
        member_queries=outcome.oracle_queries * max(n, 1),
        ev_reports=outcome.reports,
        confident=[r.confident for r in outcome.readings],
        ties=[r.tie for r in outcome.readings],
        wall_time=time.perf_counter() - t0,
    )


def run_standard_ev(
    inst: SearchInstance,
    model: EnsembleModel | None = None,
    *,
    epsilon: float | None = None,
    iterations: int | None = None,
    instance_seed: int | None = None,
) -> SearchResult:
    """m_stand iterates, EV sign readout (with filtering when M > 1).

    ``epsilon`` only sets the confidence threshold of the readout; it
    defaults to the model's claimed resolution (0 for exact EVs).
    """
    t0 = time.perf_counter()
    if epsilon is None:
        epsilon = model.resolution_epsilon if model is not None else 0.0
    reg = search_register(inst)
    m_stand = analytic.m_standard(reg.M, reg.N)
    m = m_stand if iterations is None else iterations
    return _ev_search("ev_standard", inst, reg, m, m_stand, model, epsilon, instance_seed, t0)


def run_truncated_ev(
    inst: SearchInstance,
    epsilon: float,
    model: EnsembleModel | None = None,
    *,
    iterations: int | None = None,
    instance_seed: int | None = None,
    verify: bool = False,
) -> SearchResult:
    """Fewest iterates with A_m / M > epsilon, then the same readout as the standard EV version."""
    t0 = time.perf_counter()
    if not 0.0 <= epsilon < 1.0 / inst.M:
        raise ResolutionInfeasibleError(
            f"truncated EV version needs 0 <= epsilon < 1/M = {1.0 / inst.M}, got {epsilon}"
        )
    reg = search_register(inst)
    m_stand = analytic.m_standard(reg.M, reg.N)
    if iterations is None:
        m = analytic.min_truncated_iterations(epsilon, reg.M, reg.N, verify=verify)
    else:
        m = iterations
    return _ev_search("ev_truncated", inst, reg, m, m_stand, model, epsilon, instance_seed, t0)


def run_version(
    version: str,
    inst: SearchInstance,
    *,
    epsilon: float = 0.0,
    model: EnsembleModel | None = None,
    seed: int = 0,
    iterations: int | None = None,
    instance_seed: int | None = None,
) -> SearchResult:
    if version == "pm":
        return run_standard_pm(inst, seed, iterations=iterations, instance_seed=instance_seed)
    if version == "ev_standard":
        return run_standard_ev(
            inst, model, epsilon=epsilon, iterations=iterations, instance_seed=instance_seed
        )
    if version == "ev_truncated":
        return run_truncated_ev(
            inst, epsilon, model, iterations=iterations, instance_seed=instance_seed
        )
    raise ValueError(f"unknown version {version!r}; expected one of {VERSIONS}")


# ---------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class SweepCell:
    num_qubits: int
    num_marked: int
    r: float

    @property
    def epsilon(self) -> float:
        return self.r / self.num_marked


@dataclass
class SweepRow:
    L: int
    M: int
    N: int
    r: float
    epsilon: float
    m_stand: int
    m_trunc_planned: int
    m_min_measured: int
    ratio_predicted: float
    ratio_measured: float
    classical_queries: float
    success_rate: float


SWEEP_COLUMNS = tuple(f.name for f in fields(SweepRow))


def cell_seed(master_seed: int, cell: SweepCell) -> int:
    coords = [master_seed, cell.num_qubits, cell.num_marked, int(round(cell.r * 1e9))]
    return int(np.random.SeedSequence(coords).generate_state(1)[0])


def exact_success(reg: SearchInstance, m: int, epsilon: float) -> bool:
    """Readable at resolution ``epsilon`` and the exact-EV cascade lands in S."""
    if analytic.attenuation_after(m, reg.M, reg.N) / reg.M <= epsilon:
        return False
    return locate_marked_item(reg, m, None, epsilon).success


def measured_min_iterations(reg: SearchInstance, epsilon: float, m_stand: int) -> int:
    """Bisection for the fewest iterates with exact success; m_stand when none succeeds."""
    hi = max(1, m_stand)
    if not exact_success(reg, hi, epsilon):
        return hi
    lo = 1
    while lo < hi:
        mid = (lo + hi) // 2
        if exact_success(reg, mid, epsilon):
            hi = mid
        else:
            lo = mid + 1
    return lo


def _run_cell(args: tuple[SweepCell, int, int, int]) -> SweepRow:
    cell, trials, ensemble_size, master_seed = args
    seed = cell_seed(master_seed, cell)
    inst = SearchInstance.random(cell.num_qubits, cell.num_marked, seed)
    reg = search_register(inst)
    M, N = reg.M, reg.N
    eps = cell.epsilon
    m_stand = max(1, analytic.m_standard(M, N))
    m_trunc = analytic.min_truncated_iterations(eps, M, N, verify=True)
    m_min = measured_min_iterations(reg, eps, m_stand)

    n_trials = trials if ensemble_size > 0 else 1
    rng = np.random.SeedSequence(seed).spawn(n_trials)
    wins = 0
    for child in rng:
        model = None
        standard = cell.r >= 1.0
        if ensemble_size > 0:
            resolution = 0.0 if standard else eps
            model = EnsembleModel(ensemble_size, int(child.generate_state(1)[0]), resolution)
        if standard:
            # r = 1 is the standard EV version itself
            res = run_standard_ev(inst, model)
        else:
            res = run_truncated_ev(inst, eps, model)
        wins += res.success
    return SweepRow(
        L=reg.num_qubits,
        M=M,
        N=N,
        r=cell.r,
        epsilon=eps,
        m_stand=m_stand,
        m_trunc_planned=m_trunc,
        m_min_measured=m_min,
        ratio_predicted=analytic.predicted_ratio(cell.r, M, N),
        ratio_measured=m_min / m_stand,
        classical_queries=analytic.classical_expected_queries(inst.M, inst.N),
        success_rate=wins / n_trials,
    )


def compare_versions(
    cells: Sequence[SweepCell],
    seeds: int = 1,
    ensemble_size: int = 0,
    master_seed: int = 0,
    jobs: int = 1,
) -> list[SweepRow]:
    """One row per cell, in grid order.

    ``seeds`` sampled-mode trials per cell feed ``success_rate``; exact mode
    (``ensemble_size == 0``) is deterministic and runs once.
    """
    if not cells:
        raise ValueError("sweep grid is empty")
    work = [(c, seeds, ensemble_size, master_seed) for c in cells]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_cell, work))
    return [_run_cell(w) for w in work]


def make_grid(
    qubits: Iterable[int], marked: Iterable[int], ratios: Iterable[float]
) -> list[SweepCell]:
    """Cartesian grid in (L, M, r) order; cells with M > N - 1 are skipped."""
    cells = []
    for L in qubits:
        for M in marked:
            if M > (1 << L) - 1:
                continue
            for r in ratios:
                if not 0.0 <= r <= 1.0:
                    raise ValueError(f"r must lie in [0, 1], got {r}")
                cells.append(SweepCell(L, M, float(r)))
    return cells

