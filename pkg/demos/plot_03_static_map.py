"""
Precomputing a static penalty map
=================================

Speed, boundary kind and curvature are fixed by the map, so their penalty
can be tabulated offline. Only the gap factor is applied per time step.
"""

import tempfile
from pathlib import Path

from ldpenalty import (apply_dynamic, build_static_map, data_path, load_map, load_road_network,
                       query_static, save_map)

net = load_road_network(data_path("fig5_road.json"))
smap = build_static_map(net, "fig5", "right", station_step=10.0, lateral_step=0.05)
print("grid shape (stations, laterals):", smap.shape)
print("lateral range:", smap.lateral_range)

# %%
# Save and reload; the JSON artifact round-trips exactly
with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "fig5_right.json"
    save_map(smap, path)
    print("artifact size:", path.stat().st_size, "bytes")
    assert load_map(path) == smap

# %%
# Online lookup (nearest node) plus the dynamic gap factor
for lateral in (-4.0, -1.5, 0.2, 1.0):
    s = query_static(smap, station=420.0, lateral=lateral)
    print(f"y={lateral:5.2f}  static={s.static_penalty:.4f}  boundary={s.governing_boundary}  "
          f"with gap factor 2 -> {apply_dynamic(s, 2.0):.4f}")
