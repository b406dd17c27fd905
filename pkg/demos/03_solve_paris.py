"""Optimize the 30-client Paris tour on a layered matrix.

The search runs 30 randomized constructions, keeps the best, then does 20
delete-6-and-reinsert improvement rounds. Everything is driven by one seeded
generator, so rerunning this script reproduces the exact same tour.
"""

from tdvrp import SolverParams, TrafficProfile, bundled_paris, format_hm, generate_synthetic, solve

instance = bundled_paris()
profile = TrafficProfile(
    base_speed_kmh=22.0,
    peak_windows=((0, 1, 2.5), (3, 6, 1.9)),
    jitter_range=(0.9, 1.2),
    seed=7,
)
matrix = generate_synthetic(instance, n_layers=6, step_seconds=7200, profile=profile)

params = SolverParams(n_grasp=30, k_grasp=3, n_improve=20, l_delete=6, seed=0)
result = solve(instance, matrix, params)

order = result.best_route.order
print("tour:", " -> ".join(str(v) for v in (0, *order, 0)))
print("total driving time:", format_hm(result.best_schedule.total_cost))

construction = result.cost_trace[: params.n_grasp]
improvement = result.cost_trace[params.n_grasp :]
print(f"constructions: worst {format_hm(max(construction))}, "
      f"best {format_hm(min(construction))}")
print(f"improvement:   {format_hm(improvement[0])} -> {format_hm(improvement[-1])} "
      f"over {len(improvement)} rounds")

# departure times show where the vehicle is when congestion changes
for pos in (0, 10, 20, 30):
    node = 0 if pos == 0 else order[pos - 1]
    k = result.best_schedule.departures[pos]
    print(f"  stop {pos:>2} (node {node:>2}) departs at 8:00 + {format_hm(k)}")
