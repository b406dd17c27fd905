"""Travel times that depend on the departure time.

A travel-time matrix here is a stack of layers, one per time step. The cost
of an arc is read from the layer of its departure time, so the same tour can
cost more or less depending on when each leg starts.
"""

import numpy as np

from tdvrp import MultiLayerMatrix, Route, evaluate_route, travel_time

# Two nodes, two one-hour layers. Driving out takes 30 minutes all day, but
# the return leg costs 50 minutes during the first hour and only 20 after.
layers = np.array(
    [
        [[0, 1800], [3000, 0]],  # 08:00-09:00, congested return
        [[0, 1800], [1200, 0]],  # 09:00-10:00, fluid return
    ]
)
matrix = MultiLayerMatrix(times=layers, step_seconds=3600)

print("return leg leaving at minute 30:", travel_time(1, 0, 1800, matrix), "s")
print("return leg leaving at minute 60:", travel_time(1, 0, 3600, matrix), "s")

# The closed tour depot -> client -> depot departs at 08:00. It reaches the
# client at minute 30, so the return is still priced in the congested layer.
schedule = evaluate_route(Route((1,)), matrix)
print("departures:", schedule.departures)
print("total driving time:", schedule.total_cost, "s  (1800 out + 3000 back)")

# Waiting is not modelled: the only way to hit the cheap layer is to have
# something else to do first. With a second client the solver can reorder
# legs so the expensive arcs fall in cheaper layers; that is the whole point
# of keeping one matrix per time step.
