"""
Penalty layers across a straight two-lane road
==============================================

Ego in the right lane of a straight 35 m/s road, with the adjacent-lane
gap at half its maximum. Left of the ego lane (inner line) the gap factor
doubles the penalty; right of it (outer edge) only the speed/boundary
layer applies.
"""

from ldpenalty import cross_section, data_path, load_road_network
from ldpenalty.traffic_gap import GapObservation, gap_factor

net = load_road_network(data_path("fig5_road.json"))
fac1 = gap_factor(GapObservation(gap_actual=25.0, gap_max=50.0))
print("gap factor:", fac1)

rows = cross_section(net, "fig5", "right", station=100.0, gap_factor=fac1)

# %%
# Print every 0.5 m (every tenth sample at the default 0.05 m step)
print(f"{'lateral':>8} {'P_VB':>8} {'P_C':>8} {'P_LG':>8}")
for y, p_vb, p_c, p_lg in rows[::10]:
    print(f"{y:8.2f} {p_vb:8.4f} {p_c:8.4f} {p_lg:8.4f}")
