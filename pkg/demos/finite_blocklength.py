"""
Finite blocklength
==================

At blocklength n each layer or block fails with the finite-n error bound
instead of the clean outage event. The asymptotic splits, rounded to whole
channel uses for time sharing, are scored under the finite-n objectives and
the gap to the asymptotic value closes as n grows.
"""

from uepfading import fbl, ora, pds
from uepfading.params import PRESETS, ChannelParams

R, theta = 0.1, 0.2
d = PRESETS["fig2"]
n2 = pds.algorithm2_local(theta, R, d).objective
n4 = ora.algorithm4_local(theta, R, d).objective
print(f"asymptotic: power {n2:.5f}, time {n4:.5f}")

for n in (1000, 5000, 20000):
    alpha, n5 = fbl.n5(theta, R, d, n)
    w, n6 = fbl.n6(theta, R, d, n)
    print(f"n={n:5d}  power {n5:.5f} (gap {n2 - n5:.4f})  time {n6:.5f} (gap {n4 - n6:.4f})  uses={(w * n).astype(int)}")

# the panel quadrature against plain Monte Carlo
ch = ChannelParams.from_theta(R, theta)
alpha, _ = fbl.n5(theta, R, d, 1000)
for spec in (fbl.DEFAULT_QUAD, fbl.parse_quad("gl:200"), fbl.parse_quad("mc:1000000:1")):
    print(f"{str(spec):>14}: G_n = {fbl.g_n(alpha, d, 1000, ch, spec):.5f}")
