"""Ground truth for small instances.

Exhaustive search over client permutations gives the exact optimum (the
time-dependent arc costs make the integer formulation nonlinear, so
enumeration is the honest oracle). A separate checker verifies that an
arc-variable solution satisfies the degree constraints and the
Miller-Tucker-Zemlin subtour-elimination condition.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .errors import InputError
from .model import Instance, MultiLayerMatrix, Route, Schedule, _order_schedule

DEFAULT_CLIENT_CAP = 10


@dataclass(frozen=True, eq=False)
class ArcSolution:
    """Binary arc choices x plus the MTZ ordering variables u.

    x[i][j] = 1 iff the vehicle drives arc i->j; the diagonal is always zero.
    u[i] is the 1-based visit position of client i (u[0] is unused and 0).
    """

    x: np.ndarray
    u: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.int64)
        u = np.asarray(self.u, dtype=np.int64)
        if x.ndim != 2 or x.shape[0] != x.shape[1]:
            raise InputError(f"x must be square, got shape {x.shape}")
        if u.shape != (x.shape[0],):
            raise InputError(f"u must have one entry per node, got shape {u.shape}")
        if not np.isin(x, (0, 1)).all():
            raise InputError("x entries must be 0 or 1")
        if np.trace(x) != 0:
            raise InputError("x must have a zero diagonal (no self-arcs)")
        x.setflags(write=False)
        u.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "u", u)

    @property
    def n_nodes(self) -> int:
        return self.x.shape[0]


@dataclass(frozen=True)
class Violation:
    constraint: str  # "out-degree" | "in-degree" | "subtour-order"
    nodes: tuple
    detail: str


def brute_force_optimum(
    instance: Instance, matrix: MultiLayerMatrix, max_clients: int = DEFAULT_CLIENT_CAP
) -> tuple[Route, Schedule]:
    """Exact optimum by enumerating every client permutation.

    Ties go to the lexicographically smallest permutation. Refuses instances
    with more than `max_clients` clients (the search is factorial).
    """
    n = instance.n_nodes
    if matrix.n_nodes != n:
        raise InputError(f"matrix covers {matrix.n_nodes} nodes, instance has {n}")
    n_clients = n - 1
    if n_clients > max_clients:
        raise InputError(
            f"{n_clients} clients exceeds the exhaustive-search cap of {max_clients}"
        )
    best_order = None
    best_cost = None
    for perm in permutations(range(1, n)):
        cost = _order_schedule(perm, matrix).total_cost
        if best_cost is None or cost < best_cost:
            best_order, best_cost = perm, cost
    route = Route(best_order)
    return route, _order_schedule(route.order, matrix)


def route_to_arcs(route: Route) -> ArcSolution:
    """Arc variables of a complete route, with u set to the visit positions."""
    order = route.order if isinstance(route, Route) else Route(tuple(route)).order
    n = len(order) + 1
    if set(order) != set(range(1, n)):
        raise InputError(
            f"route {list(order)} is not a complete tour over clients 1..{n - 1}"
        )
    x = np.zeros((n, n), dtype=np.int64)
    u = np.zeros(n, dtype=np.int64)
    prev = 0
    for pos, node in enumerate(order, start=1):
        x[prev, node] = 1
        u[node] = pos
        prev = node
    x[prev, 0] = 1
    return ArcSolution(x=x, u=u)


def check_milp_feasibility(sol: ArcSolution, n: int) -> list[Violation]:
    """Check the degree constraints and the MTZ ordering condition.

    Every node needs exactly one departure and one arrival; for every ordered
    client pair i != j the condition u_i - u_j + n*x_ij <= n - 1 must hold.
    Returns one entry per violated constraint; an empty list means feasible.
    """
    if sol.n_nodes != n:
        raise InputError(f"solution covers {sol.n_nodes} nodes, expected {n}")
    x, u = sol.x, sol.u
    violations = []
    for i in range(n):
        row = int(x[i].sum())
        if row != 1:
            violations.append(
                Violation("out-degree", (i,), f"row {i} sums to {row}, expected 1")
            )
    for j in range(n):
        col = int(x[:, j].sum())
        if col != 1:
            violations.append(
                Violation("in-degree", (j,), f"column {j} sums to {col}, expected 1")
            )
    for i in range(1, n):
        for j in range(1, n):
            if i == j:
                continue
            lhs = int(u[i]) - int(u[j]) + n * int(x[i, j])
            if lhs > n - 1:
                violations.append(
                    Violation(
                        "subtour-order",
                        (i, j),
                        f"u[{i}]-u[{j}]+{n}*x[{i},{j}] = {lhs} > {n - 1}",
                    )
                )
    return violations


def objective_of(sol: ArcSolution, matrix: MultiLayerMatrix):
    """Total driving time of the tour encoded in sol.x.

    Requires x to encode one closed tour through every node; disconnected
    structures are rejected with the offending cycle named.
    """
    n = sol.n_nodes
    if matrix.n_nodes != n:
        raise InputError(f"matrix covers {matrix.n_nodes} nodes, solution has {n}")
    succ = {}
    for i in range(n):
        outs = np.flatnonzero(sol.x[i])
        if outs.size != 1:
            raise InputError(f"node {i} has {outs.size} outgoing arcs, expected 1")
        succ[i] = int(outs[0])
    order = []
    current = succ[0]
    while current != 0:
        order.append(current)
        if len(order) > n:
            raise InputError("arc assignment does not close at the depot")
        current = succ[current]
    if len(order) != n - 1:
        missing = sorted(set(range(1, n)) - set(order))
        raise InputError(
            f"arc assignment splits into subtours; depot tour skips nodes {missing}"
        )
    return _order_schedule(tuple(order), matrix).total_cost
