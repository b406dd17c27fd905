"""Core domain types and time-dependent route evaluation.

Travel times live in a stack of layers, one per time step of the planning
horizon. Looking up an arc cost picks the layer of the departure time, so a
tour's cost depends on *when* each arc is entered, not just which arcs are
used. Times are kept in integer seconds so that evaluation is exact; the one
exception is the layer-averaged matrix used as the classical baseline, whose
entries are exact means and may be fractional.

All types here are immutable after construction; arrays are marked read-only,
so any number of evaluations may share a matrix concurrently.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, RouteError


@dataclass(frozen=True)
class Node:
    id: int
    lat: float
    lon: float
    label: str = ""


@dataclass(frozen=True)
class Instance:
    """A depot plus client locations. Node ids are 0..N-1 with the depot at 0."""

    nodes: tuple[Node, ...]
    depot_index: int = 0

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        if len(self.nodes) < 2:
            raise InputError("an instance needs a depot plus at least one client")
        for pos, node in enumerate(self.nodes):
            if node.id != pos:
                raise InputError(
                    f"node ids must be 0..N-1 in order; position {pos} has id {node.id}"
                )
            if not -90.0 <= node.lat <= 90.0:
                raise InputError(f"node {node.id}: latitude {node.lat} out of range")
            if not -180.0 <= node.lon <= 180.0:
                raise InputError(f"node {node.id}: longitude {node.lon} out of range")
        if self.depot_index != 0:
            raise InputError(f"depot index must be 0, got {self.depot_index}")

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def clients(self) -> range:
        return range(1, len(self.nodes))

    def coordinates(self) -> list[tuple[float, float]]:
        return [(n.lat, n.lon) for n in self.nodes]


def _as_times_array(times) -> np.ndarray:
    arr = np.asarray(times)
    if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
        raise InputError(f"times must have shape (layers, n, n), got {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 2:
        raise InputError(f"need at least 1 layer and 2 nodes, got shape {arr.shape}")
    dtype = np.float64 if np.issubdtype(arr.dtype, np.floating) else np.int64
    arr = np.ascontiguousarray(arr, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class MultiLayerMatrix:
    """Stack of NxN travel-time layers covering the planning horizon.

    Layer s holds travel times (seconds) for departures in
    [s*step_seconds, (s+1)*step_seconds); departures at or past the horizon
    fall back to the last layer. Layers may be asymmetric (one-way roads).
    The `closed` flag records that every layer is known to satisfy the
    triangle inequality (see validate_matrix).
    """

    times: np.ndarray
    step_seconds: int
    closed: bool = False
    _lookup: list = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if int(self.step_seconds) <= 0:
            raise InputError(f"step_seconds must be positive, got {self.step_seconds}")
        object.__setattr__(self, "step_seconds", int(self.step_seconds))
        arr = _as_times_array(self.times)
        object.__setattr__(self, "times", arr)
        # nested lists make the evaluation inner loop ~5x faster than ndarray
        # scalar indexing
        object.__setattr__(self, "_lookup", arr.tolist())

    @property
    def n_layers(self) -> int:
        return self.times.shape[0]

    @property
    def n_nodes(self) -> int:
        return self.times.shape[1]

    @property
    def horizon_seconds(self) -> int:
        return self.n_layers * self.step_seconds


@dataclass(frozen=True)
class Route:
    """Visit order of clients; the tour is depot -> order[0] -> ... -> depot.

    The depot never appears in `order`. A complete route is a permutation of
    all clients; partial routes occur during construction.
    """

    order: tuple[int, ...]

    def __post_init__(self):
        order = tuple(int(v) for v in self.order)
        object.__setattr__(self, "order", order)
        seen = set()
        for v in order:
            if v == 0:
                raise RouteError("the depot cannot appear inside a route")
            if v < 0:
                raise RouteError(f"negative node index {v} in route")
            if v in seen:
                raise RouteError(f"duplicate node {v} in route")
            seen.add(v)

    def __len__(self) -> int:
        return len(self.order)

    def is_complete(self, n_nodes: int) -> bool:
        return set(self.order) == set(range(1, n_nodes))


@dataclass(frozen=True)
class Schedule:
    """Departure times along a tour plus the total driving time.

    `departures[0]` is the depot start (always 0); one entry follows per
    visited client. `total_cost` is the arrival time back at the depot.
    """

    departures: tuple
    total_cost: int | float


@dataclass(frozen=True)
class SolverParams:
    """Knobs of the randomized search.

    n_grasp construction trials keep the best tour; each insertion is drawn
    from the k_grasp cheapest. The improvement pass runs n_improve times,
    deleting l_delete nodes (drawn from the k_del largest savings) and
    reinserting each at one of its k_ins cheapest slots. The default
    k_ins=1 reinserts greedily, which benchmarks better at a fixed budget
    than randomized reinsertion; deletions stay randomized.
    """

    n_grasp: int = 30
    k_grasp: int = 3
    n_improve: int = 20
    l_delete: int = 6
    k_del: int = 3
    k_ins: int = 1
    seed: int = 0

    def __post_init__(self):
        for name in ("n_grasp", "k_grasp", "l_delete", "k_del", "k_ins"):
            if getattr(self, name) < 1:
                raise InputError(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.n_improve < 0:
            raise InputError(f"n_improve must be >= 0, got {self.n_improve}")
        if self.seed < 0 or self.seed >= 2**64:
            raise InputError(f"seed must fit in 64 unsigned bits, got {self.seed}")


def layer_index(k, matrix: MultiLayerMatrix) -> int:
    """Layer holding departures at time k; past-horizon times use the last layer."""
    if k < 0:
        raise InputError(f"departure time must be >= 0, got {k}")
    return min(int(k // matrix.step_seconds), matrix.n_layers - 1)


def travel_time(i: int, j: int, k, matrix: MultiLayerMatrix):
    """Seconds to drive arc i->j when leaving i at time k.

    Reads (row i, column j) of the departure layer only; asymmetric entries
    are never mixed.
    """
    n = matrix.n_nodes
    if i == j:
        raise InputError(f"self-arc {i}->{i} has no travel time")
    if not (0 <= i < n) or not (0 <= j < n):
        raise InputError(f"arc {i}->{j} out of range for {n} nodes")
    return matrix._lookup[layer_index(k, matrix)][i][j]


def _order_schedule(order, matrix: MultiLayerMatrix) -> Schedule:
    """Fast-path evaluation of a raw visit order (no validation)."""
    step = matrix.step_seconds
    last = matrix.n_layers - 1
    rows = matrix._lookup
    k = 0
    departures = [0]
    prev = 0
    for node in order:
        s = int(k // step)
        if s > last:
            s = last
        k = k + rows[s][prev][node]
        departures.append(k)
        prev = node
    if prev != 0:
        s = int(k // step)
        if s > last:
            s = last
        k = k + rows[s][prev][0]
    return Schedule(tuple(departures), k)


def evaluate_route(route, matrix: MultiLayerMatrix) -> Schedule:
    """Departure times and total driving time of the closed tour.

    The depot departure is time 0; each later departure adds the travel time
    of the incoming arc, costed at the layer of its own departure time. An
    empty route costs 0.
    """
    order = route.order if isinstance(route, Route) else Route(tuple(route)).order
    n = matrix.n_nodes
    for v in order:
        if v >= n:
            raise RouteError(f"node {v} out of range for {n}-node matrix")
    return _order_schedule(order, matrix)


def average_matrix(matrix: MultiLayerMatrix) -> MultiLayerMatrix:
    """Collapse the layers into one by element-wise mean.

    The result keeps the original horizon as its single step, so every lookup
    lands in layer 0. Entries are exact means and may be fractional.
    """
    mean = matrix.times.sum(axis=0, dtype=np.float64) / matrix.n_layers
    return MultiLayerMatrix(
        times=mean[np.newaxis, :, :],
        step_seconds=matrix.horizon_seconds,
        closed=matrix.closed,
    )


@dataclass(frozen=True)
class LayerReport:
    layer: int
    triangle_violations: int
    worst_violation: int | float


@dataclass(frozen=True)
class MatrixReport:
    """Diagnostic summary from validate_matrix; ok means the matrix is clean."""

    negative_entries: int
    nonzero_diagonal: int
    layers: tuple[LayerReport, ...]

    @property
    def ok(self) -> bool:
        return (
            self.negative_entries == 0
            and self.nonzero_diagonal == 0
            and all(l.triangle_violations == 0 for l in self.layers)
        )

    def summary(self) -> str:
        if self.ok:
            return "matrix clean: no negative entries, zero diagonal, triangle inequality holds"
        parts = []
        if self.negative_entries:
            parts.append(f"{self.negative_entries} negative entries")
        if self.nonzero_diagonal:
            parts.append(f"{self.nonzero_diagonal} nonzero diagonal entries")
        for rep in self.layers:
            if rep.triangle_violations:
                parts.append(
                    f"layer {rep.layer}: {rep.triangle_violations} triangle "
                    f"violations (worst {rep.worst_violation})"
                )
        return "; ".join(parts)


def validate_matrix(matrix: MultiLayerMatrix) -> MatrixReport:
    """Scan every layer for negative entries, nonzero diagonal and triangle
    inequality violations t(i,k) > t(i,j) + t(j,k).

    Diagnostic only: nothing is modified. A clean report is the condition for
    marking a matrix `closed`.
    """
    arr = matrix.times
    n = matrix.n_nodes
    negative = int((arr < 0).sum())
    diag = int((arr[:, range(n), range(n)] != 0).sum())

    idx = np.arange(n)
    distinct = (
        (idx[:, None, None] != idx[None, :, None])
        & (idx[None, :, None] != idx[None, None, :])
        & (idx[:, None, None] != idx[None, None, :])
    )
    layers = []
    for s in range(matrix.n_layers):
        d = arr[s]
        excess = d[:, None, :] - d[:, :, None] - d[None, :, :]
        violating = (excess > 0) & distinct
        count = int(violating.sum())
        worst = excess[violating].max().item() if count else 0
        layers.append(LayerReport(s, count, worst))
    return MatrixReport(negative, diag, tuple(layers))


# --- file formats -----------------------------------------------------------
#
# Matrix file (JSON, integer seconds):
#   {"version": 1, "n_nodes": N, "n_layers": S, "step_seconds": int,
#    "closed": bool, "times": [layer][row][col]}
# Instance file (JSON):
#   {"version": 1, "depot_index": 0,
#    "nodes": [{"id": int, "lat": float, "lon": float, "label": str}, ...]}


def matrix_to_json(matrix: MultiLayerMatrix) -> str:
    times = matrix.times
    if np.issubdtype(times.dtype, np.floating):
        times = np.rint(times).astype(np.int64)
    doc = {
        "version": 1,
        "n_nodes": matrix.n_nodes,
        "n_layers": matrix.n_layers,
        "step_seconds": matrix.step_seconds,
        "closed": bool(matrix.closed),
        "times": times.tolist(),
    }
    return json.dumps(doc)


def matrix_from_json(text: str) -> MultiLayerMatrix:
    doc = _parse_json(text, "matrix")
    _require_version(doc, "matrix")
    try:
        times = np.asarray(doc["times"], dtype=np.int64)
        step = int(doc["step_seconds"])
        closed = bool(doc.get("closed", False))
        n_nodes = int(doc["n_nodes"])
        n_layers = int(doc["n_layers"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed matrix document: {exc}") from exc
    matrix = MultiLayerMatrix(times=times, step_seconds=step, closed=closed)
    if matrix.n_nodes != n_nodes or matrix.n_layers != n_layers:
        raise InputError(
            f"matrix header says {n_layers} layers of {n_nodes} nodes but times "
            f"array is {matrix.n_layers}x{matrix.n_nodes}x{matrix.n_nodes}"
        )
    return matrix


def instance_to_json(instance: Instance) -> str:
    doc = {
        "version": 1,
        "depot_index": instance.depot_index,
        "nodes": [
            {"id": n.id, "lat": n.lat, "lon": n.lon, "label": n.label}
            for n in instance.nodes
        ],
    }
    return json.dumps(doc)


def instance_from_json(text: str) -> Instance:
    doc = _parse_json(text, "instance")
    _require_version(doc, "instance")
    try:
        raw = sorted(doc["nodes"], key=lambda n: int(n["id"]))
        nodes = tuple(
            Node(int(n["id"]), float(n["lat"]), float(n["lon"]), str(n.get("label", "")))
            for n in raw
        )
        depot = int(doc.get("depot_index", 0))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed instance document: {exc}") from exc
    return Instance(nodes=nodes, depot_index=depot)


def save_matrix(matrix: MultiLayerMatrix, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(matrix_to_json(matrix))
        fh.write("\n")


def load_matrix(path) -> MultiLayerMatrix:
    return matrix_from_json(_read_text(path))


def save_instance(instance: Instance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(instance_to_json(instance))
        fh.write("\n")


def load_instance(path) -> Instance:
    return instance_from_json(_read_text(path))


def _read_text(path) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _parse_json(text: str, what: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(
            f"{what} is not valid JSON: {exc.msg} at line {exc.lineno} column {exc.colno}"
        ) from exc
    if not isinstance(doc, dict):
        raise InputError(f"{what} document must be a JSON object")
    return doc


def _require_version(doc: dict, what: str) -> None:
    if doc.get("version") != 1:
        raise InputError(f"unsupported {what} format version {doc.get('version')!r}")
