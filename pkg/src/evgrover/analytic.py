"""
Closed-form Grover dynamics in the two-dimensional (marked, unmarked) plane.

After m iterates the register is
    alpha/sqrt(M) sum_{x in S}|x> + beta/sqrt(N-M) sum_{x not in S}|x>
with alpha = sin((2m+1)theta/2), beta = cos((2m+1)theta/2) and
cos(theta) = 1 - 2M/N. Per-qubit sigma_z expectations are scaled by the
attenuation A = (alpha^2 N - M) / (N - M).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConsistencyError, DegenerateInstanceError, ResolutionInfeasibleError

# |eps * M - 1| below this counts as the r = 1 limit
_RATIO_ONE_TOL = 1e-12


@dataclass(frozen=True)
class RotationState:
    alpha: float
    beta: float
    theta: float


@dataclass(frozen=True)
class TruncationPlan:
    """Early-stopping decision for a given EV resolution."""

    epsilon: float
    epsilon_stand: float
    r: float
    m_stand: int
    m_trunc: int
    predicted_ratio: float
    closed_form: int
    attenuation: float
    # A_m / M > eps at m_trunc; false only when no m <= m_stand qualifies
    feasible: bool
    # 2M >= N: the plain rotation gives no usable positive EV signal
    degenerate: bool

    @property
    def m_trunc_predicted(self) -> float:
        return self.m_stand * self.predicted_ratio


def _check_instance(M: int, N: int) -> None:
    if not 1 <= M <= N - 1:
        raise DegenerateInstanceError(f"need 1 <= M <= N - 1, got M={M}, N={N}")


def theta_of(M: int, N: int) -> float:
    """Rotation angle per Grover iterate, arccos(1 - 2M/N)."""
    _check_instance(M, N)
    return math.acos(1.0 - 2.0 * M / N)


def amplitudes_after(m: int, theta: float) -> RotationState:
    if m < 0:
        raise ValueError(f"m must be >= 0, got {m}")
    phi = (2 * m + 1) * theta / 2.0
    return RotationState(math.sin(phi), math.cos(phi), theta)


def m_standard(M: int, N: int) -> int:
    """floor(sqrt(N/M) * pi/4), the iteration count of the standard versions.

    Not clamped: when M/N > (pi/4)**2 the floor is 0 and the uniform
    state is already the best the PM version can do.
    """
    _check_instance(M, N)
    return math.floor(math.sqrt(N / M) * math.pi / 4.0)


def is_degenerate(M: int, N: int) -> bool:
    """True when 2M >= N; then A_1 <= 0 and the EV readout has no signal."""
    _check_instance(M, N)
    return 2 * M >= N


def attenuation(alpha: float, M: int, N: int) -> float:
    _check_instance(M, N)
    return (alpha * alpha * N - M) / (N - M)


def attenuation_after(m: int, M: int, N: int) -> float:
    """A_m for a register rotated m times.

    Uses sin^2((2m+1)t/2) - sin^2(t/2) = sin(mt) sin((m+1)t), which makes
    A_0 exactly zero and avoids cancellation for small m.
    """
    if m < 0:
        raise ValueError(f"m must be >= 0, got {m}")
    _check_instance(M, N)
    if m == 0 or 2 * M == N:
        # theta = pi/2: alpha^2 = 1/2 = M/N for every m
        return 0.0
    theta = theta_of(M, N)
    return N * math.sin(m * theta) * math.sin((m + 1) * theta) / (N - M)


def pm_success_probability(alpha: float) -> float:
    return alpha * alpha


def classical_expected_queries(M: int, N: int) -> float:
    """Average classical oracle queries N / (M + 1)."""
    _check_instance(M, N)
    return N / (M + 1)


def predicted_ratio(r: float, M: int, N: int) -> float:
    """m_trunc / m_stand in the M << N approximation, (2/pi) arcsin sqrt(r + (1-r)M/N)."""
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"r must lie in [0, 1], got {r}")
    _check_instance(M, N)
    arg = r + (1.0 - r) * M / N
    return 2.0 / math.pi * math.asin(math.sqrt(min(arg, 1.0)))


def closed_form_iterations(epsilon: float, M: int, N: int) -> int:
    """Smallest integer m strictly above asin(sqrt(r + (1-r)M/N))/theta - 1/2, at least 1."""
    _check_instance(M, N)
    r = min(epsilon * M, 1.0)
    bound = math.asin(math.sqrt(r + (1.0 - r) * M / N)) / theta_of(M, N) - 0.5
    return max(1, math.floor(bound) + 1)


def scan_min_iterations(epsilon: float, M: int, N: int, m_max: int | None = None) -> int | None:
    """Exhaustive scan: smallest m in [1, m_max] with A_m / M > epsilon, or None."""
    if m_max is None:
        m_max = max(1, m_standard(M, N))
    for m in range(1, m_max + 1):
        if attenuation_after(m, M, N) / M > epsilon:
            return m
    return None


def _check_resolution(epsilon: float, M: int) -> float:
    if epsilon < 0.0 or math.isnan(epsilon):
        raise ResolutionInfeasibleError(f"epsilon must be >= 0, got {epsilon}")
    r = epsilon * M
    if r > 1.0 + _RATIO_ONE_TOL:
        raise ResolutionInfeasibleError(
            f"epsilon={epsilon} exceeds 1/M={1.0 / M}; even the standard EV version cannot read bits"
        )
    return min(r, 1.0)


def min_truncated_iterations(
    epsilon: float, M: int, N: int, *, verify: bool = False
) -> int:
    """
    Fewest Grover iterates for which every bit is readable at resolution ``epsilon``.

    Starts from the closed-form inversion and steps along the (monotone)
    attenuation curve until A_m / M > epsilon holds at m and fails at m - 1.
    Never exceeds the standard count; epsilon == 1/M returns it directly.

    Parameters
    ----------
    epsilon : float
        Absolute EV resolution, 0 <= epsilon <= 1/M.
    M, N : int
        Marked count and register size.
    verify : bool
        Re-derive the answer by exhaustive scan and raise on disagreement.
    """
    _check_instance(M, N)
    r = _check_resolution(epsilon, M)
    m_stand = max(1, m_standard(M, N))
    if r >= 1.0 - _RATIO_ONE_TOL:
        return m_stand

    def ok(m: int) -> bool:
        return attenuation_after(m, M, N) / M > epsilon

    m = min(closed_form_iterations(epsilon, M, N), m_stand)
    while m > 1 and ok(m - 1):
        m -= 1
    while m < m_stand and not ok(m):
        m += 1

    if verify:
        scanned = scan_min_iterations(epsilon, M, N, m_stand)
        expected = m_stand if scanned is None else scanned
        if expected != m:
            raise ConsistencyError(
                f"planner gave m={m}, exhaustive scan gave {expected} (eps={epsilon}, M={M}, N={N})"
            )
    return m


def plan_truncation(epsilon: float, M: int, N: int, *, verify: bool = False) -> TruncationPlan:
    r = _check_resolution(epsilon, M)
    m_trunc = min_truncated_iterations(epsilon, M, N, verify=verify)
    a = attenuation_after(m_trunc, M, N)
    return TruncationPlan(
        epsilon=epsilon,
        epsilon_stand=1.0 / M,
        r=r,
        m_stand=m_standard(M, N),
        m_trunc=m_trunc,
        predicted_ratio=predicted_ratio(r, M, N),
        closed_form=closed_form_iterations(epsilon, M, N),
        attenuation=a,
        feasible=a / M > epsilon,
        degenerate=is_degenerate(M, N),
    )
