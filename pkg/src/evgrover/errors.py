"""Exception hierarchy for the simulator."""


class GroverError(ValueError):
    """Base class for all input and consistency errors raised by evgrover."""


class SizeError(GroverError):
    """Qubit count outside the supported range."""


class DimensionError(GroverError):
    """State and instance disagree on the number of qubits."""


class DegenerateInstanceError(GroverError):
    """Marked count M with M < 1 or M > N - 1, for which theta is undefined."""


class ResolutionInfeasibleError(GroverError):
    """Requested EV resolution is too coarse to read any bit reliably (eps > 1/M)."""


class InvalidSpecError(GroverError):
    """Malformed correlation spec or condition list."""


class InvalidModelError(GroverError):
    """Malformed ensemble model."""


class ConsistencyError(RuntimeError):
    """An exact-mode identity that must always hold was violated."""
