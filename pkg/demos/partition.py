"""
How finely to split the source
==============================

A source of 16 equal-rate chunks can be sent as 16 layers, or with
neighbouring chunks merged into 8, 4, 2 or 1 layers at proportionally
higher rates. Finer splits never hurt but the gains shrink quickly.
"""

import numpy as np

from uepfading import ora
from uepfading.params import PRESETS, aggregate_pairs

R = 0.1
d = PRESETS["fig9"]
levels = []
cur, rate = d, R
while True:
    levels.append((cur, rate))
    if cur.size == 1:
        break
    cur, rate = aggregate_pairs(cur), 2 * rate

print("sigma2   " + "  ".join(f"K={c.size:<2d}" for c, _ in levels))
for sigma2 in (0.5, 1.0, 2.0, 5.0, 10.0, 20.0):
    vals = [ora.algorithm4_local((2**r - 1) / sigma2, r, c).objective for c, r in levels]
    print(f"{sigma2:6.1f}   " + "  ".join(f"{v:.3f}" for v in vals))

# merging adjacent pairs of importance weights
print(aggregate_pairs(np.array([0.5, 0.25, 0.2, 0.05])))
