"""
Filtered expectation values.

A correlation C_t(conditions) flips qubit t on every basis state that
violates at least one condition (qubit j, bit s_j). Averaging the target EV
of a plain run with that of a run followed by C_t leaves only the
contribution of basis states that satisfy all conditions:

    1/2 [<Z_t>_plain + <Z_t>_corr] = (A_m / M) * sum_{x in S'} (-1)^{x_t}

with S' the marked items matching the conditions. Repeating this one qubit
at a time reads off the address of a single marked item in at most L runs.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .analytic import attenuation_after
from .errors import ConsistencyError, InvalidSpecError
from .measurement import (
    EXACT_ZERO_TOL,
    BitReading,
    EnsembleModel,
    EvReport,
    bits_to_index,
    measure_evs,
    read_bit,
)
from .state import SearchInstance, StateVector, bit_signs, run_grover


@dataclass(frozen=True)
class ConditionList:
    entries: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        entries = tuple((int(j), int(b)) for j, b in self.entries)
        qubits = [j for j, _ in entries]
        if len(set(qubits)) != len(qubits):
            raise InvalidSpecError(f"condition qubits must be distinct: {qubits}")
        for j, b in entries:
            if j < 1:
                raise InvalidSpecError(f"condition qubit {j} must be >= 1")
            if b not in (0, 1):
                raise InvalidSpecError(f"condition value for qubit {j} must be 0 or 1, got {b}")
        object.__setattr__(self, "entries", entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def qubits(self) -> tuple[int, ...]:
        return tuple(j for j, _ in self.entries)

    def masks(self) -> tuple[int, int]:
        """(mask of conditioned bits, required value of those bits)."""
        mask = value = 0
        for j, b in self.entries:
            mask |= 1 << (j - 1)
            value |= b << (j - 1)
        return mask, value

    def matches(self, x: int) -> bool:
        mask, value = self.masks()
        return (x & mask) == value

    def extended(self, qubit: int, bit: int) -> ConditionList:
        return ConditionList(self.entries + ((qubit, bit),))

    def check_register(self, num_qubits: int) -> None:
        for j in self.qubits:
            if j > num_qubits:
                raise InvalidSpecError(f"condition qubit {j} outside [1, {num_qubits}]")


def _as_conditions(conditions: ConditionList | Iterable[tuple[int, int]]) -> ConditionList:
    return conditions if isinstance(conditions, ConditionList) else ConditionList(tuple(conditions))


@dataclass(frozen=True)
class CorrelationSpec:
    target: int
    conditions: ConditionList = field(default_factory=ConditionList)

    def __post_init__(self) -> None:
        object.__setattr__(self, "conditions", _as_conditions(self.conditions))
        if self.target < 1:
            raise InvalidSpecError(f"target qubit {self.target} must be >= 1")
        if self.target in self.conditions.qubits:
            raise InvalidSpecError(f"target qubit {self.target} is also a condition qubit")
        if len(self.conditions) == 0:
            raise InvalidSpecError("correlation needs at least one condition")

    def check_register(self, num_qubits: int) -> None:
        if self.target > num_qubits:
            raise InvalidSpecError(f"target qubit {self.target} outside [1, {num_qubits}]")
        self.conditions.check_register(num_qubits)


def correlation_sources(
    num_qubits: int, target: int, masks: np.ndarray, values: np.ndarray
) -> np.ndarray:
    """Gather indices for one or many correlations on the same target.

    ``masks`` and ``values`` broadcast against each other; the result has
    their shape plus a trailing axis of length 2**num_qubits, so that
    ``amplitudes[src]`` is the correlated register.
    """
    x = np.arange(1 << num_qubits, dtype=np.int64)
    masks = np.asarray(masks, dtype=np.int64)[..., None]
    values = np.asarray(values, dtype=np.int64)[..., None]
    mismatch = ((x & masks) != values).astype(np.int64)
    return x ^ (mismatch << (target - 1))


def apply_correlation(state: StateVector, spec: CorrelationSpec) -> StateVector:
    """Flip the target qubit on every basis state that violates a condition."""
    spec.check_register(state.num_qubits)
    mask, value = spec.conditions.masks()
    src = correlation_sources(state.num_qubits, spec.target, mask, value)
    return StateVector(state.num_qubits, state.amplitudes[src], state.oracle_queries)


def correlated_target_evs(
    state: StateVector, target: int, masks: np.ndarray, values: np.ndarray
) -> np.ndarray:
    """<Z_target> after each of a batch of correlations, computed on the permuted registers."""
    src = correlation_sources(state.num_qubits, target, masks, values)
    probs = np.abs(state.amplitudes[src]) ** 2
    return probs @ bit_signs(state.num_qubits, target)


def _snap(v: float) -> float:
    return 0.0 if abs(v) < EXACT_ZERO_TOL else v


def filtered_ev_of_state(
    state: StateVector,
    conditions: ConditionList | Iterable[tuple[int, int]],
    target: int,
    model: EnsembleModel | None = None,
) -> float:
    """Two-run filtered EV when the algorithm output is ``state``.

    With ``model`` set, each run is read through an independent ensemble
    sample (runs 0 and 1 of the model).
    """
    spec = CorrelationSpec(target, _as_conditions(conditions))
    spec.check_register(state.num_qubits)
    plain_model = model.for_run(0) if model is not None else None
    corr_model = model.for_run(1) if model is not None else None
    plain = measure_evs(state, plain_model).values[target - 1]
    corr = measure_evs(apply_correlation(state, spec), corr_model).values[target - 1]
    avg = 0.5 * (plain + corr)
    return _snap(avg) if model is None else avg


def filtered_ev(
    inst: SearchInstance,
    iterations: int,
    conditions: ConditionList | Iterable[tuple[int, int]],
    target: int,
    model: EnsembleModel | None = None,
) -> float:
    """Filtered EV of ``target`` after ``iterations`` Grover iterates on ``inst``."""
    return filtered_ev_of_state(run_grover(inst, iterations), conditions, target, model)


def filtered_sum(inst: SearchInstance, conditions: ConditionList, target: int) -> int:
    """sum over marked x satisfying ``conditions`` of (-1)^{x_target}."""
    return sum(
        1 - 2 * ((x >> (target - 1)) & 1) for x in inst.marked if conditions.matches(x)
    )


@dataclass
class CascadeOutcome:
    location: int
    runs_used: int
    oracle_queries: int
    success: bool
    readings: list[BitReading]
    reports: list[EvReport]
    attenuation: float
    conditions: ConditionList

    @property
    def confident(self) -> bool:
        return all(r.confident for r in self.readings)


def locate_marked_item(
    inst: SearchInstance,
    iterations: int,
    model: EnsembleModel | None = None,
    epsilon: float = 0.0,
) -> CascadeOutcome:
    """
    Read the address of one marked item from EVs, one qubit per level.

    Run 1 is the plain algorithm and fixes bit 1. Each later level adds a
    single run with the correlation C_{k+1}(bits found so far) and averages
    its qubit-(k+1) EV with the plain run's. With one marked item every bit
    comes straight from run 1.

    Parameters
    ----------
    inst : SearchInstance
    iterations : int
        Grover iterates per run.
    model : EnsembleModel, optional
        Ensemble used to sample EVs; exact EVs when omitted.
    epsilon : float
        Resolution below which a bit is reported as not confident.

    Returns
    -------
    CascadeOutcome
        ``success`` is whether the assembled address lies in S. Exact-mode
        failures with a positive readable attenuation raise
        ``ConsistencyError`` instead.
    """
    L, M, N = inst.num_qubits, inst.M, inst.N
    a_m = attenuation_after(iterations, M, N)
    readable = a_m / M > epsilon
    if not readable:
        warnings.warn(
            f"A_m/M = {a_m / M:.3g} <= epsilon = {epsilon:.3g} at m={iterations}; "
            "bit readout is unreliable",
            RuntimeWarning,
            stacklevel=2,
        )
    exact = model is None
    check = exact and readable

    state = run_grover(inst, iterations)
    plain = measure_evs(state, model.for_run(0) if model else None)
    reports = [plain]

    if M == 1:
        readings = [read_bit(v, epsilon) for v in plain.values]
        conditions = ConditionList(tuple((k + 1, r.bit) for k, r in enumerate(readings)))
    else:
        first = read_bit(plain.values[0], epsilon)
        readings = [first]
        conditions = ConditionList(((1, first.bit),))
        for k in range(1, L):
            target = k + 1
            spec = CorrelationSpec(target, conditions)
            corr = measure_evs(
                apply_correlation(state, spec),
                model.for_run(k) if model else None,
                conditions=list(conditions.entries),
                target=target,
            )
            reports.append(corr)
            avg = 0.5 * (plain.values[k] + corr.values[k])
            reading = read_bit(_snap(avg) if exact else avg, epsilon)
            readings.append(reading)
            conditions = conditions.extended(target, reading.bit)
            if check and not any(conditions.matches(s) for s in inst.marked):
                raise ConsistencyError(
                    f"no marked item satisfies {conditions.entries} (S={inst.marked}, m={iterations})"
                )

    location = bits_to_index([r.bit for r in readings])
    success = location in inst
    if check and not success:
        raise ConsistencyError(
            f"cascade assembled {location}, not in S={inst.marked} (m={iterations})"
        )
    runs = len(reports)
    return CascadeOutcome(
        location=location,
        runs_used=runs,
        oracle_queries=runs * iterations,
        success=success,
        readings=readings,
        reports=reports,
        attenuation=a_m,
        conditions=conditions,
    )

