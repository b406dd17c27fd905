"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: InputError -> 2, BackendError -> 3,
InvariantError -> 4.
"""


class TdvrpError(Exception):
    """Base class for all package errors."""


class InputError(TdvrpError):
    """Bad input: malformed files, out-of-range arguments, size mismatches."""


class RouteError(InputError):
    """A route breaks its structural rules (duplicate node, depot inside)."""


class BackendError(TdvrpError):
    """A travel-time provider request failed."""


class TransientBackendError(BackendError):
    """Retryable provider failure (timeout, 5xx)."""


class PermanentBackendError(BackendError):
    """Non-retryable provider failure (rejected request, denied key)."""


class QuotaExhaustedError(BackendError):
    """The provider or the local budget refused further elements today."""


class IncompleteMatrixError(BackendError):
    """Responses left holes in the assembled matrix."""

    def __init__(self, holes):
        self.holes = list(holes)
        preview = ", ".join(f"layer {s}: {i}->{j}" for s, i, j in self.holes[:5])
        more = "" if len(self.holes) <= 5 else f" (+{len(self.holes) - 5} more)"
        super().__init__(f"assembled matrix has missing entries: {preview}{more}")


class PlanSuspendedError(BackendError):
    """Fetch stopped early on quota; cached progress lets the plan resume."""

    def __init__(self, completed_requests, total_requests, cache_path=None):
        self.completed_requests = completed_requests
        self.total_requests = total_requests
        self.cache_path = cache_path
        where = f" (cache: {cache_path})" if cache_path else ""
        super().__init__(
            f"quota exhausted after {completed_requests}/{total_requests} "
            f"requests; rerun to resume{where}"
        )


class InvariantError(TdvrpError):
    """An internal consistency check failed; indicates a bug."""
