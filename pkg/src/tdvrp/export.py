"""GeoJSON export of a solved tour, for any standard map viewer.

Emits one Point per visited node (depot first) and, for a non-empty tour, a
LineString of straight segments through the visit order. Coordinates follow
the GeoJSON convention: longitude first, then latitude.
"""

from __future__ import annotations

from .errors import InputError
from .model import Instance


def route_geojson(order, departures, instance: Instance) -> dict:
    order = [int(v) for v in order]
    departures = list(departures)
    n = instance.n_nodes
    for v in order:
        if not 0 < v < n:
            raise InputError(f"route node {v} does not exist in the {n}-node instance")
    if len(departures) != len(order) + 1:
        raise InputError(
            f"expected {len(order) + 1} departures for {len(order)} visits, "
            f"got {len(departures)}"
        )

    def point(node_id, visit_order, departure):
        node = instance.nodes[node_id]
        return {
            "type": "Feature",
            "geometry": {"type": "Point", "coordinates": [node.lon, node.lat]},
            "properties": {
                "id": node.id,
                "label": node.label,
                "visit_order": visit_order,
                "departure_s": int(round(departure)),
            },
        }

    features = [point(0, 0, departures[0])]
    for pos, node_id in enumerate(order, start=1):
        features.append(point(node_id, pos, departures[pos]))

    if order:
        path = [0] + order + [0]
        line = {
            "type": "Feature",
            "geometry": {
                "type": "LineString",
                "coordinates": [
                    [instance.nodes[i].lon, instance.nodes[i].lat] for i in path
                ],
            },
            "properties": {"stops": len(order)},
        }
        features.append(line)

    return {"type": "FeatureCollection", "features": features}
