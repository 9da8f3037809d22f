"""
Readout: exact and ensemble-sampled sigma_z expectations, projective samples,
and sign-based bit extraction.

All randomness is driven by explicit integer seeds through numpy's
``SeedSequence`` so that runs are reproducible and independent across qubits
and runs.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field, replace
from typing import Literal, Sequence

import numpy as np

from .errors import InvalidModelError
from .state import StateVector, bit_signs

Mode = Literal["exact", "sampled"]

# exact EVs below this are rounding residue of a cancelling sum; report them as 0
EXACT_ZERO_TOL = 1e-12


@dataclass(frozen=True)
class EnsembleModel:
    """n ensemble members measured per run, plus the claimed EV resolution."""

    size: int
    seed: int = 0
    resolution_epsilon: float = 0.0

    def __post_init__(self) -> None:
        if int(self.size) < 1:
            raise InvalidModelError(f"ensemble size must be >= 1, got {self.size}")
        if not 0.0 <= self.resolution_epsilon < 1.0:
            raise InvalidModelError(
                f"resolution epsilon must be in [0, 1), got {self.resolution_epsilon}"
            )

    def for_run(self, run_index: int) -> EnsembleModel:
        """Model with an independent seed for the ``run_index``-th algorithm run."""
        seed = int(np.random.SeedSequence([self.seed, run_index]).generate_state(1)[0])
        return replace(self, seed=seed)


@dataclass
class EvReport:
    values: list[float]
    mode: Mode = "exact"
    ensemble_size: int = 0
    seed: int = 0
    runs_consumed: int = 1
    # correlation applied before readout; empty / None for a plain run
    conditions: list[tuple[int, int]] = field(default_factory=list)
    target: int | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["conditions"] = [list(c) for c in self.conditions]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> EvReport:
        d = dict(d)
        d["conditions"] = [tuple(c) for c in d.get("conditions", [])]
        d["values"] = [float(v) for v in d["values"]]
        return cls(**d)


def _check_qubit(state: StateVector, k: int) -> None:
    if not 1 <= k <= state.num_qubits:
        raise IndexError(f"qubit index {k} outside [1, {state.num_qubits}]")


def exact_ev_sigma_z(state: StateVector, k: int) -> float:
    """<sigma_z^(k)> = sum_x |c_x|^2 (-1)^{x_k}."""
    _check_qubit(state, k)
    return float(state.probabilities() @ bit_signs(state.num_qubits, k))


def exact_evs(state: StateVector) -> np.ndarray:
    """All L single-qubit sigma_z expectations in one pass over the amplitudes."""
    p = state.probabilities().reshape((2,) * state.num_qubits)
    out = np.empty(state.num_qubits)
    for k in range(1, state.num_qubits + 1):
        # qubit k is reshaped axis L - k (C order puts the high bit first)
        axis = state.num_qubits - k
        other = tuple(a for a in range(state.num_qubits) if a != axis)
        marg = p.sum(axis=other) if other else p
        out[k - 1] = marg[0] - marg[1]
    out[np.abs(out) < EXACT_ZERO_TOL] = 0.0
    return np.clip(out, -1.0, 1.0)


def _sample_average(ev: float, n: int, rng: np.random.Generator) -> float:
    p0 = min(1.0, max(0.0, (1.0 + ev) / 2.0))
    n0 = int(rng.binomial(n, p0))
    return (2 * n0 - n) / n


def sampled_ev(state: StateVector, k: int, model: EnsembleModel) -> float:
    """Sample average (n0 - n1)/n over ``model.size`` projective measurements of qubit k."""
    _check_qubit(state, k)
    rng = np.random.default_rng([model.seed, k])
    return _sample_average(exact_ev_sigma_z(state, k), model.size, rng)


def measure_evs(
    state: StateVector, model: EnsembleModel | None = None, **provenance
) -> EvReport:
    """EV report for every qubit of ``state``; exact when ``model`` is None."""
    exact = exact_evs(state)
    if model is None:
        return EvReport([float(v) for v in exact], "exact", 0, 0, 1, **provenance)
    values = []
    for k in range(1, state.num_qubits + 1):
        rng = np.random.default_rng([model.seed, k])
        values.append(_sample_average(float(exact[k - 1]), model.size, rng))
    return EvReport(values, "sampled", model.size, model.seed, 1, **provenance)


def chebyshev_bound(n: int, epsilon: float) -> float:
    """Lower bound 1 - 1/(4 n eps^2) on Prob{|xbar - EV| < eps}, clamped at 0."""
    if n < 1 or epsilon <= 0:
        raise ValueError(f"need n >= 1 and epsilon > 0, got n={n}, epsilon={epsilon}")
    return max(0.0, 1.0 - 1.0 / (4.0 * n * epsilon * epsilon))


def projective_sample(state: StateVector, seed: int) -> int:
    """Draw a basis index x with probability |c_x|^2."""
    p = state.probabilities()
    p = p / p.sum()
    rng = np.random.default_rng(seed)
    return int(rng.choice(state.dim, p=p))


@dataclass(frozen=True)
class BitReading:
    bit: int
    confident: bool
    tie: bool = False


def read_bit(value: float, threshold: float = 0.0) -> BitReading:
    """Sign readout of one EV. An exact zero reads as 1 and is flagged as a tie."""
    if value > 0:
        bit, tie = 0, False
    elif value < 0:
        bit, tie = 1, False
    else:
        bit, tie = 1, True
    return BitReading(bit, abs(value) > threshold, tie)


def readout_bits(report: EvReport | Sequence[float], threshold: float = 0.0) -> list[BitReading]:
    values = report.values if isinstance(report, EvReport) else report
    return [read_bit(float(v), threshold) for v in values]


def bits_to_index(bits: Sequence[int]) -> int:
    """Assemble x from bits listed qubit 1 first."""
    return sum(int(b) << i for i, b in enumerate(bits))
