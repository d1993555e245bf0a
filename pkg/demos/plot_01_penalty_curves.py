"""
Deviation penalty curves
========================

The penalty for pushing past a lane line is a Weibull CDF of the
encroachment distance. Shape ``k`` and scale ``lam`` come from the speed
limit and from whether the line is an inner lane line or the outer edge
of the road.
"""

import numpy as np

from ldpenalty import BoundaryKind, WeibullParams, params_for, weibull_cdf

x = np.linspace(0, 3, 7)

# %%
# Varying the shape with unit scale, then the scale with k = 5
print("x       " + "  ".join(f"{v:6.2f}" for v in x))
for k in (0.5, 1, 2, 5):
    print(f"k={k:<4}  " + "  ".join(f"{v:6.3f}" for v in weibull_cdf(x, WeibullParams(k, 1.0))))
for lam in (1.0, 1.5, 2.0):
    print(f"lam={lam:<3} " + "  ".join(f"{v:6.3f}" for v in weibull_cdf(x, WeibullParams(5, lam))))

# %%
# Speed and boundary kind. Outer edges relax with speed (a shoulder is
# likely); inner lane lines tighten with speed.
for v in (5, 20, 35):
    for b in BoundaryKind:
        p = params_for(v, b)
        row = "  ".join(f"{val:6.3f}" for val in weibull_cdf(x, p))
        print(f"V={v:>2} {b.value:5}  k={p.k:4.2f} lam={p.lam:4.2f}  {row}")

# %%
# The two extreme curves, (k=0.5, lam=1) and (k=5, lam=2), cross at
# x = 2**(10/9) m; beyond that the soft curve is the lower one.
cross = 2 ** (10 / 9)
print(f"crossing at {cross:.4f} m:",
      weibull_cdf(cross, WeibullParams(0.5, 1)), weibull_cdf(cross, WeibullParams(5, 2)))
