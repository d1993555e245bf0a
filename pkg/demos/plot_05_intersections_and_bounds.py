"""
Intersection turns and allowable error
======================================

Through a turn the penalty is measured from the mean turn arc in both
directions, with a fixed steep shape and a scale that shrinks as turn speed
rises. Crossing a kerb, or into an occupied neighbouring turn lane, is
infinite.

The allowable lateral error is the encroachment at which the scaled
penalty reaches a chosen threshold.
"""

import numpy as np

from ldpenalty import (BoundaryKind, allowable_error, data_path, intersection_penalty,
                       load_road_network, params_for)

net = load_road_network(data_path("fig5_road.json"))
turn = net.intersections[0]
for d in np.linspace(-3.2, 2.7, 12):
    print(f"d={d:+.2f}  P={intersection_penalty(d, turn):.4f}")

# %%
# Error budget at P_thr = 0.5 for each boundary, with and without a
# half-size adjacent gap
for v in (5, 20, 35):
    for b in BoundaryKind:
        p = params_for(v, b)
        free, tight = allowable_error(0.5, 1.0, p), allowable_error(0.5, 2.0, p)
        print(f"V={v:>2} {b.value:5}  bound={free:.3f} m  with gap factor 2: {tight:.3f} m")
