"""Randomized greedy construction plus insertion-deletion improvement.

Construction builds n_grasp tours by repeatedly inserting a not-yet-routed
client at one of the k_grasp cheapest (node, slot) candidates, drawn
uniformly; the best tour is kept. Improvement then runs n_improve rounds:
delete l_delete nodes one at a time (each drawn from the k_del largest
cost savings, savings recomputed after every deletion), reinsert them
first-deleted-first-reinserted at one of their k_ins cheapest slots, and keep
the round's result only if it beats the best tour so far.

Every candidate delta is a full re-evaluation of the modified tour: in a
time-dependent matrix an insertion shifts all downstream departure times, so
local two-arc arithmetic would be wrong.

All randomness comes from one numpy PCG64 stream seeded once per solve, and
every candidate list is sorted with deterministic tie-breaks, so results are
reproducible bit-for-bit for a given seed. With k_grasp=k_del=k_ins=1 the
search degenerates to pure greedy and the seed does not matter at all.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import InputError, InvariantError
from .model import (
    Instance,
    MultiLayerMatrix,
    Route,
    Schedule,
    SolverParams,
    _order_schedule,
)

RNG_ALGORITHM = "numpy-pcg64"


@dataclass(frozen=True)
class InsertionCandidate:
    node: int
    position: int
    delta_cost: int | float


@dataclass(frozen=True)
class SolveResult:
    best_route: Route
    best_schedule: Schedule
    cost_trace: tuple
    params: SolverParams
    seed: int
    rng_algorithm: str = RNG_ALGORITHM


def _cost(order, matrix) -> int | float:
    return _order_schedule(order, matrix).total_cost


def enumerate_insertions(partial, remaining, matrix: MultiLayerMatrix):
    """All (node, slot) insertions of `remaining` into the partial tour,
    sorted by cost delta, ties broken by (node, position)."""
    order = tuple(partial.order if isinstance(partial, Route) else partial)
    nodes = sorted(remaining)
    if set(nodes) & set(order):
        raise InputError("remaining nodes overlap the partial route")
    base = _cost(order, matrix)
    candidates = []
    for node in nodes:
        for pos in range(len(order) + 1):
            trial = order[:pos] + (node,) + order[pos:]
            candidates.append(
                InsertionCandidate(node, pos, _cost(trial, matrix) - base)
            )
    candidates.sort(key=lambda c: (c.delta_cost, c.node, c.position))
    return candidates


def construct_route(matrix: MultiLayerMatrix, k_grasp: int, rng) -> Route:
    """Grow one tour from empty, drawing each insertion uniformly from the
    k_grasp cheapest candidates."""
    if k_grasp < 1:
        raise InputError(f"k_grasp must be >= 1, got {k_grasp}")
    order: tuple[int, ...] = ()
    remaining = set(range(1, matrix.n_nodes))
    while remaining:
        candidates = enumerate_insertions(order, remaining, matrix)
        pool = candidates[: min(k_grasp, len(candidates))]
        pick = pool[int(rng.integers(0, len(pool)))]
        order = order[: pick.position] + (pick.node,) + order[pick.position :]
        remaining.discard(pick.node)
    route = Route(order)
    _assert_complete(route, matrix.n_nodes)
    return route


def run_grasp(matrix: MultiLayerMatrix, params: SolverParams, rng) -> SolveResult:
    """Construction phase: n_grasp randomized tours, best one kept.

    The cost trace lists every trial's cost in trial order.
    """
    trace = []
    best_route = None
    best_cost = None
    for _ in range(params.n_grasp):
        route = construct_route(matrix, params.k_grasp, rng)
        cost = _cost(route.order, matrix)
        trace.append(cost)
        if best_cost is None or cost < best_cost:
            best_route, best_cost = route, cost
    _assert_complete(best_route, matrix.n_nodes)
    return SolveResult(
        best_route=best_route,
        best_schedule=_order_schedule(best_route.order, matrix),
        cost_trace=tuple(trace),
        params=params,
        seed=params.seed,
    )


def improve(route, matrix: MultiLayerMatrix, params: SolverParams, rng) -> SolveResult:
    """Insertion-deletion improvement, n_improve rounds from the best-so-far.

    A round that does not beat the incumbent is discarded; the trace records
    the best cost after each round, so it is non-increasing.
    """
    best = tuple(route.order if isinstance(route, Route) else route)
    n_clients = len(best)
    if set(best) != set(range(1, matrix.n_nodes)):
        raise InputError("improvement needs a complete route over all clients")
    if params.l_delete > n_clients:
        raise InputError(
            f"l_delete={params.l_delete} exceeds the {n_clients} clients in the route"
        )
    best_cost = _cost(best, matrix)
    trace = []
    for _ in range(params.n_improve):
        current = list(best)
        deleted = []
        for _ in range(params.l_delete):
            base = _cost(tuple(current), matrix)
            savings = []
            for idx, node in enumerate(current):
                rest = tuple(current[:idx] + current[idx + 1 :])
                savings.append((base - _cost(rest, matrix), node, idx))
            savings.sort(key=lambda s: (-s[0], s[1]))
            pool = savings[: min(params.k_del, len(savings))]
            _, node, idx = pool[int(rng.integers(0, len(pool)))]
            del current[idx]
            deleted.append(node)
        for node in deleted:
            base = _cost(tuple(current), matrix)
            slots = []
            for pos in range(len(current) + 1):
                trial = tuple(current[:pos] + [node] + current[pos:])
                slots.append((_cost(trial, matrix) - base, pos))
            slots.sort()
            pool = slots[: min(params.k_ins, len(slots))]
            _, pos = pool[int(rng.integers(0, len(pool)))]
            current.insert(pos, node)
        cost = _cost(tuple(current), matrix)
        if cost < best_cost:
            best, best_cost = tuple(current), cost
        trace.append(best_cost)
    final = Route(best)
    _assert_complete(final, matrix.n_nodes)
    return SolveResult(
        best_route=final,
        best_schedule=_order_schedule(final.order, matrix),
        cost_trace=tuple(trace),
        params=params,
        seed=params.seed,
    )


def solve(instance: Instance, matrix: MultiLayerMatrix, params: SolverParams) -> SolveResult:
    """Full pipeline: seed one RNG stream, construct, then improve.

    A fixed (instance, matrix, params) triple reproduces the exact same
    result; only changing the seed can change it.
    """
    if matrix.n_nodes != instance.n_nodes:
        raise InputError(
            f"matrix covers {matrix.n_nodes} nodes but instance has {instance.n_nodes}"
        )
    if params.l_delete > instance.n_nodes - 1:
        raise InputError(
            f"l_delete={params.l_delete} exceeds the {instance.n_nodes - 1} clients"
        )
    rng = np.random.default_rng(params.seed)
    constructed = run_grasp(matrix, params, rng)
    improved = improve(constructed.best_route, matrix, params, rng)
    result = SolveResult(
        best_route=improved.best_route,
        best_schedule=improved.best_schedule,
        cost_trace=constructed.cost_trace + improved.cost_trace,
        params=params,
        seed=params.seed,
    )
    _assert_complete(result.best_route, matrix.n_nodes)
    if result.best_schedule.total_cost != _cost(result.best_route.order, matrix):
        raise InvariantError("reported schedule does not match its route")
    return result


def _assert_complete(route: Route, n_nodes: int) -> None:
    if not route.is_complete(n_nodes):
        raise InvariantError(
            f"route {list(route.order)} is not a permutation of clients 1..{n_nodes - 1}"
        )


def result_to_json(result: SolveResult) -> str:
    """Canonical JSON for a solve result (integer seconds)."""
    p = result.params
    doc = {
        "route": [int(v) for v in result.best_route.order],
        "departures_s": [int(round(v)) for v in result.best_schedule.departures],
        "total_cost_s": int(round(result.best_schedule.total_cost)),
        "cost_trace_s": [int(round(v)) for v in result.cost_trace],
        "seed": int(result.seed),
        "rng": result.rng_algorithm,
        "params": {
            "n_grasp": p.n_grasp,
            "k_grasp": p.k_grasp,
            "n_improve": p.n_improve,
            "l_delete": p.l_delete,
            "k_del": p.k_del,
            "k_ins": p.k_ins,
        },
    }
    return json.dumps(doc)


def result_from_json(text: str) -> dict:
    """Parse a result file back into a plain dict (route, departures, costs)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(
            f"result is not valid JSON: {exc.msg} at line {exc.lineno} column {exc.colno}"
        ) from exc
    if not isinstance(doc, dict) or "route" not in doc:
        raise InputError("result document must be a JSON object with a 'route' field")
    return doc
