"""Bundled and randomly generated problem instances."""

from __future__ import annotations

from importlib import resources

import numpy as np

from .errors import InputError
from .model import Instance, Node, instance_from_json

PARIS_CENTER = (48.8566, 2.3522)


def bundled_paris() -> Instance:
    """The bundled 31-node Paris instance (depot plus 30 clients)."""
    text = resources.files("tdvrp").joinpath("data/paris31.json").read_text("utf-8")
    return instance_from_json(text)


def random_instance(
    n_clients: int,
    seed: int = 0,
    center: tuple[float, float] = PARIS_CENTER,
    spread_deg: float = 0.12,
) -> Instance:
    """Depot at the center, clients uniform in a square around it."""
    if n_clients < 1:
        raise InputError(f"need at least one client, got {n_clients}")
    rng = np.random.default_rng(seed)
    lat0, lon0 = center
    nodes = [Node(0, lat0, lon0, "Depot")]
    for i in range(1, n_clients + 1):
        lat = lat0 + rng.uniform(-spread_deg, spread_deg)
        lon = lon0 + rng.uniform(-spread_deg, spread_deg)
        nodes.append(Node(i, round(float(lat), 6), round(float(lon), 6), f"Client {i}"))
    return Instance(nodes=tuple(nodes))
