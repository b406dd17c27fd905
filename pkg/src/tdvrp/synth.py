"""Synthetic time-dependent traffic, for offline and reproducible experiments.

Free-flow times come from great-circle distances at a constant speed. Each
layer scales them by the congestion multiplier of its peak windows and by a
per-direction jitter factor (which makes the matrix asymmetric, like one-way
roads would). Every layer is then closed under min-plus so the triangle
inequality holds exactly, matching what a routing provider returns for
driving times.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .model import Instance, MultiLayerMatrix

EARTH_RADIUS_KM = 6371.0


def haversine_km(lat1, lon1, lat2, lon2):
    """Great-circle distance in kilometres."""
    lat1, lon1, lat2, lon2 = map(np.radians, (lat1, lon1, lat2, lon2))
    a = (
        np.sin((lat2 - lat1) / 2.0) ** 2
        + np.cos(lat1) * np.cos(lat2) * np.sin((lon2 - lon1) / 2.0) ** 2
    )
    return 2.0 * EARTH_RADIUS_KM * np.arcsin(np.sqrt(a))


@dataclass(frozen=True)
class TrafficProfile:
    """Shape of the synthetic congestion.

    peak_windows are (start_layer, end_layer, multiplier) with the layer range
    half-open; overlapping windows multiply. jitter_range is the uniform range
    of a per-direction factor drawn once per ordered node pair, so (i, j) and
    (j, i) get independent values.
    """

    base_speed_kmh: float = 25.0
    peak_windows: tuple = ()
    jitter_range: tuple = (1.0, 1.0)
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "peak_windows", tuple(tuple(w) for w in self.peak_windows))
        object.__setattr__(self, "jitter_range", tuple(self.jitter_range))
        if self.base_speed_kmh <= 0:
            raise InputError(f"base speed must be positive, got {self.base_speed_kmh}")
        for start, end, mult in self.peak_windows:
            if mult < 1.0:
                raise InputError(f"peak multiplier must be >= 1, got {mult}")
            if start < 0 or end <= start:
                raise InputError(f"bad peak window [{start}, {end})")
        lo, hi = self.jitter_range
        if not (0.0 < lo <= hi):
            raise InputError(f"jitter range must satisfy 0 < lo <= hi, got ({lo}, {hi})")

    def layer_multiplier(self, layer: int) -> float:
        mult = 1.0
        for start, end, m in self.peak_windows:
            if start <= layer < end:
                mult *= m
        return mult


def min_plus_closure(d: np.ndarray) -> np.ndarray:
    """All-pairs shortest-path relaxation; never increases an entry."""
    d = d.copy()
    for k in range(d.shape[0]):
        np.minimum(d, d[:, k : k + 1] + d[k : k + 1, :], out=d)
    return d


def generate_synthetic(
    instance: Instance, n_layers: int, step_seconds: int, profile: TrafficProfile
) -> MultiLayerMatrix:
    """Build a closed multi-layer matrix from coordinates alone.

    Deterministic: the same (instance, n_layers, step_seconds, profile) always
    yields the same matrix.
    """
    if n_layers < 1:
        raise InputError(f"need at least one layer, got {n_layers}")
    lats = np.array([n.lat for n in instance.nodes])
    lons = np.array([n.lon for n in instance.nodes])
    dist_km = haversine_km(lats[:, None], lons[:, None], lats[None, :], lons[None, :])
    n = instance.n_nodes
    base = np.rint(dist_km / profile.base_speed_kmh * 3600.0).astype(np.int64)
    np.fill_diagonal(base, 0)
    off_diag = base[~np.eye(n, dtype=bool)]
    if (off_diag == 0).any():
        warnings.warn(
            "instance has coincident nodes; some off-diagonal travel times are zero",
            stacklevel=2,
        )

    rng = np.random.default_rng(profile.seed)
    jitter = rng.uniform(profile.jitter_range[0], profile.jitter_range[1], size=(n, n))
    np.fill_diagonal(jitter, 1.0)

    layers = np.empty((n_layers, n, n), dtype=np.int64)
    for s in range(n_layers):
        scaled = np.rint(base * profile.layer_multiplier(s) * jitter).astype(np.int64)
        np.fill_diagonal(scaled, 0)
        layers[s] = min_plus_closure(scaled)
    return MultiLayerMatrix(times=layers, step_seconds=step_seconds, closed=True)
