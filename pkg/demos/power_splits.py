"""
Superposition power splits
==========================

K layers share the transmit power. Layer i is decoded only if layers
1..i-1 were, so the best split starves the least important layers first
as the fade gets harsher (larger theta).
"""

import numpy as np

from uepfading import pds
from uepfading.params import PRESETS

R = 0.1
d = PRESETS["fig2"]
print("importance:", d)

for theta in (0.02, 0.1, 0.3, 0.6, 0.9):
    sol = pds.algorithm1_global(theta, R, d)
    alpha = pds.mb_inverse(sol.split, R)
    print(f"theta={theta:4.2f}  layers={sol.ell}  G={sol.objective:.5f}  alpha={np.round(alpha, 4)}")

# the fast local solver lands on the same value
theta = 0.3
print("local == global:", pds.algorithm2_local(theta, R, d).objective == pds.algorithm1_global(theta, R, d).objective)

# two layers have a closed form
alpha, value = pds.solve_k2(theta, R, 0.7, 0.3)
print(f"two layers at theta={theta}: alpha={alpha:.6f}, G={value:.6f}")
