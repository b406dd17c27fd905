"""Planning a matrix download under provider quotas.

Providers cap elements per request (100) and bill per element with a daily
quota (2,500 free, 100,000 paid). The planner tiles each layer into
rectangular requests and reports how many days a full fetch needs; execution
caches every element so a multi-day fetch just resumes.
"""

from pathlib import Path

from tdvrp import (
    QuotaBudget,
    RecordedBackend,
    TrafficProfile,
    bundled_paris,
    execute_fetch,
    generate_synthetic,
    max_nodes_single_day,
    plan_fetch,
)
from tdvrp.errors import PlanSuspendedError

instance = bundled_paris()
START = 1_760_000_000  # layer-0 departure; defaults to now + 14 days if omitted

plan = plan_fetch(instance.n_nodes, 6, step_seconds=7200, start_epoch=START,
                  daily_quota=2_500)
print(f"31 nodes x 6 layers: {len(plan.requests)} requests, "
      f"{plan.total_elements} useful elements, {plan.quota_elements} billed")
print(f"days needed on the free quota: {plan.days_needed}")

# how big can a single-day problem be?
for quota in (2_500, 100_000):
    print(f"quota {quota:>7}: biggest 24-layer problem in one day = "
          f"{max_nodes_single_day(24, quota)} nodes")

# play the plan against a recorded backend, with a deliberately tiny budget
source = generate_synthetic(instance, 6, 7200, TrafficProfile(seed=1))
backend = RecordedBackend.from_matrix(instance, source, START)
cache = Path(__file__).parent / "output" / "fetch_cache.jsonl"
cache.parent.mkdir(exist_ok=True)
cache.unlink(missing_ok=True)

try:
    execute_fetch(plan, backend, instance, cache_path=cache, budget=QuotaBudget(2_500))
except PlanSuspendedError as err:
    print(f"day 1: {err}")

# "next day": fresh budget, warm cache, the fetch completes
for day in (2, 3):
    try:
        matrix = execute_fetch(plan, backend, instance, cache_path=cache,
                               budget=QuotaBudget(2_500))
        print(f"day {day}: fetch complete, {matrix.n_layers} layers assembled")
        break
    except PlanSuspendedError as err:
        print(f"day {day}: {err}")
