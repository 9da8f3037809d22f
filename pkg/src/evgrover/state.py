"""
Dense state-vector register and the unitaries of Grover's algorithm.

Qubit k (1-based) is stored at integer bit position k - 1, so the basis
index x = x_L ... x_2 x_1 and bit k is ``(x >> (k - 1)) & 1``.

Every public operation returns a new ``StateVector``; the loop in
``run_grover`` works in place on a private copy.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator

import numpy as np

from .errors import DegenerateInstanceError, DimensionError, SizeError

MAX_QUBITS = 24


def _check_qubits(num_qubits: int, max_qubits: int | None = None) -> None:
    cap = MAX_QUBITS if max_qubits is None else max_qubits
    if not isinstance(num_qubits, (int, np.integer)) or not 1 <= num_qubits <= cap:
        raise SizeError(f"num_qubits must be in [1, {cap}], got {num_qubits!r}")


@dataclass(eq=False)
class StateVector:
    """Amplitudes c_x of an L-qubit register plus an oracle-query counter."""

    num_qubits: int
    amplitudes: np.ndarray
    oracle_queries: int = 0

    def __post_init__(self) -> None:
        _check_qubits(self.num_qubits, max(MAX_QUBITS, self.num_qubits))
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (1 << self.num_qubits,):
            raise DimensionError(
                f"expected {1 << self.num_qubits} amplitudes, got shape {self.amplitudes.shape}"
            )

    @property
    def dim(self) -> int:
        return 1 << self.num_qubits

    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.amplitudes, self.amplitudes).real))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def copy(self) -> StateVector:
        return StateVector(self.num_qubits, self.amplitudes.copy(), self.oracle_queries)

    @classmethod
    def basis(cls, num_qubits: int, index: int) -> StateVector:
        _check_qubits(num_qubits)
        if not 0 <= index < (1 << num_qubits):
            raise SizeError(f"basis index {index} out of range for {num_qubits} qubits")
        amps = np.zeros(1 << num_qubits, dtype=np.complex128)
        amps[index] = 1.0
        return cls(num_qubits, amps)


@dataclass(frozen=True)
class SearchInstance:
    """
    Search problem on an L-qubit register.

    ``marked`` is the set S of marked locations, stored sorted. The
    membership test is f(x) = 1 iff x in S.
    """

    num_qubits: int
    marked: tuple[int, ...]
    max_qubits: int = field(default=MAX_QUBITS, compare=False, repr=False)

    def __post_init__(self) -> None:
        _check_qubits(self.num_qubits, self.max_qubits)
        marked = tuple(sorted(int(x) for x in self.marked))
        if len(set(marked)) != len(marked):
            raise DegenerateInstanceError(f"marked locations must be distinct: {self.marked}")
        n = 1 << self.num_qubits
        for x in marked:
            if not 0 <= x < n:
                raise DegenerateInstanceError(
                    f"marked location {x} outside [0, {n}) for {self.num_qubits} qubits"
                )
        if not 1 <= len(marked) <= n - 1:
            raise DegenerateInstanceError(
                f"need 1 <= M <= N - 1 = {n - 1}, got M = {len(marked)}"
            )
        object.__setattr__(self, "marked", marked)

    @property
    def N(self) -> int:
        return 1 << self.num_qubits

    @property
    def M(self) -> int:
        return len(self.marked)

    @property
    def num_marked(self) -> int:
        return len(self.marked)

    def f(self, x: int) -> int:
        return int(x in self._marked_set)

    def __contains__(self, x: object) -> bool:
        return x in self._marked_set

    @cached_property
    def _marked_set(self) -> frozenset[int]:
        return frozenset(self.marked)

    def marked_indices(self) -> np.ndarray:
        return np.fromiter(self.marked, dtype=np.int64, count=len(self.marked))

    def padded(self, extra_qubits: int = 1) -> SearchInstance:
        """Same marked set on a register with ``extra_qubits`` more (all unmarked)."""
        return SearchInstance(self.num_qubits + extra_qubits, self.marked, self.max_qubits)

    @classmethod
    def from_database(
        cls, size: int, marked: Iterable[int], max_qubits: int = MAX_QUBITS
    ) -> SearchInstance:
        """Build an instance for a database of arbitrary ``size``.

        Locations ``size .. 2**L - 1`` are padding and are never marked.
        """
        if size < 2:
            raise SizeError(f"database size must be >= 2, got {size}")
        marked = list(marked)
        for x in marked:
            if not 0 <= x < size:
                raise DegenerateInstanceError(f"marked location {x} outside [0, {size})")
        num_qubits = max(1, math.ceil(math.log2(size)))
        return cls(num_qubits, tuple(marked), max_qubits)

    @classmethod
    def random(
        cls, num_qubits: int, num_marked: int, seed: int, max_qubits: int = MAX_QUBITS
    ) -> SearchInstance:
        """Marked set drawn without replacement from [0, 2**L) using ``seed``."""
        _check_qubits(num_qubits, max_qubits)
        n = 1 << num_qubits
        if not 1 <= num_marked <= n - 1:
            raise DegenerateInstanceError(f"need 1 <= M <= {n - 1}, got {num_marked}")
        rng = np.random.default_rng(seed)
        marked = rng.choice(n, size=num_marked, replace=False)
        return cls(num_qubits, tuple(int(x) for x in marked), max_qubits)


def uniform_superposition(num_qubits: int, max_qubits: int | None = None) -> StateVector:
    """Equal-weight superposition 2**(-L/2) sum_x |x>."""
    _check_qubits(num_qubits, max_qubits)
    n = 1 << num_qubits
    amps = np.full(n, 1.0 / math.sqrt(n), dtype=np.complex128)
    return StateVector(num_qubits, amps)


def _check_dims(state: StateVector, inst: SearchInstance) -> None:
    if state.num_qubits != inst.num_qubits:
        raise DimensionError(
            f"state has {state.num_qubits} qubits, instance has {inst.num_qubits}"
        )


def _oracle_inplace(amps: np.ndarray, marked: np.ndarray) -> None:
    amps[marked] *= -1.0


def _diffusion_inplace(amps: np.ndarray) -> None:
    mean = amps.mean()
    np.subtract(2.0 * mean, amps, out=amps)


def apply_oracle(state: StateVector, inst: SearchInstance) -> StateVector:
    """Phase flip on every marked location; one oracle query."""
    _check_dims(state, inst)
    out = state.copy()
    _oracle_inplace(out.amplitudes, inst.marked_indices())
    out.oracle_queries += 1
    return out


def apply_diffusion(state: StateVector) -> StateVector:
    """Inversion about the average: c_x -> 2<c> - c_x."""
    out = state.copy()
    _diffusion_inplace(out.amplitudes)
    return out


def grover_iterate(state: StateVector, inst: SearchInstance) -> StateVector:
    return apply_diffusion(apply_oracle(state, inst))


def iterate_grover(inst: SearchInstance, max_iterations: int) -> Iterator[StateVector]:
    """Yield the register after 0, 1, ..., ``max_iterations`` Grover iterates.

    The yielded objects are snapshots; mutating them does not disturb the loop.
    """
    if max_iterations < 0:
        raise ValueError(f"iteration count must be >= 0, got {max_iterations}")
    state = uniform_superposition(inst.num_qubits, inst.max_qubits)
    amps = state.amplitudes
    marked = inst.marked_indices()
    yield state.copy()
    for i in range(1, max_iterations + 1):
        _oracle_inplace(amps, marked)
        _diffusion_inplace(amps)
        state.oracle_queries = i
        yield state.copy()


def run_grover(inst: SearchInstance, iterations: int) -> StateVector:
    """Uniform superposition followed by ``iterations`` Grover iterates."""
    if iterations < 0:
        raise ValueError(f"iteration count must be >= 0, got {iterations}")
    state = uniform_superposition(inst.num_qubits, inst.max_qubits)
    amps = state.amplitudes
    marked = inst.marked_indices()
    for _ in range(iterations):
        _oracle_inplace(amps, marked)
        _diffusion_inplace(amps)
    state.oracle_queries = iterations
    return state


def bit_signs(num_qubits: int, qubit: int) -> np.ndarray:
    """(-1)**x_k for every basis index x, as float64."""
    x = np.arange(1 << num_qubits, dtype=np.int64)
    return 1.0 - 2.0 * ((x >> (qubit - 1)) & 1)


def subspace_coefficients(state: StateVector, inst: SearchInstance) -> tuple[np.ndarray, np.ndarray]:
    """Split amplitudes into (marked, unmarked) arrays."""
    _check_dims(state, inst)
    mask = np.zeros(state.dim, dtype=bool)
    mask[inst.marked_indices()] = True
    return state.amplitudes[mask], state.amplitudes[~mask]


__all__ = [
    "MAX_QUBITS",
    "SearchInstance",
    "StateVector",
    "apply_diffusion",
    "apply_oracle",
    "bit_signs",
    "grover_iterate",
    "iterate_grover",
    "run_grover",
    "subspace_coefficients",
    "uniform_superposition",
]
