"""Export a solved tour as GeoJSON for any map viewer.

One Point per visited node (with visit order and departure time in the
properties) and one LineString through the tour. Drop the output file on
geojson.io or QGIS to see the route.
"""

import json
from pathlib import Path

from tdvrp import (
    SolverParams,
    TrafficProfile,
    bundled_paris,
    generate_synthetic,
    route_geojson,
    solve,
)

out_dir = Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)

instance = bundled_paris()
matrix = generate_synthetic(
    instance, 6, 7200,
    TrafficProfile(base_speed_kmh=22.0, peak_windows=((0, 1, 2.5),), seed=7),
)
result = solve(instance, matrix, SolverParams(seed=0))

geo = route_geojson(
    result.best_route.order, result.best_schedule.departures, instance
)
path = out_dir / "paris_tour.geojson"
path.write_text(json.dumps(geo))

points = sum(1 for f in geo["features"] if f["geometry"]["type"] == "Point")
print(f"wrote {points} points and 1 line to {path}")
print("first stops:", [f["properties"]["id"] for f in geo["features"][:4]])
