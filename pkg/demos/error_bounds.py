"""
Error-probability bounds at finite blocklength
==============================================

Two upper bounds on the block error probability of a Gaussian channel at
SNR rho: the random-coding exponent bound and the normal approximation.
The exponent bound wins well below capacity, the normal one near it.
"""

import numpy as np

from uepfading.bounds import capacity, err_bound, err_exp, err_nor

rho, n = 3.0, 10_000
C = capacity(rho)
print(f"capacity at rho={rho}: {C:.4f} bits/use")

# sweep the rate as a fraction of capacity
f = np.array([0.5, 0.8, 0.9, 0.95, 0.97, 0.98, 0.99, 1.0, 1.05])
for fi, e, q, b in zip(f, err_exp(n, f * C, rho), err_nor(n, f * C, rho), err_bound(n, f * C, rho)):
    print(f"f={fi:4.2f}  exponent={e:10.3e}  normal={q:10.3e}  min={b:10.3e}")

# below capacity the bound vanishes as n grows, above it goes to one
for n in (100, 1000, 10_000, 100_000):
    print(f"n={n:6d}  E(0.8C)={err_bound(n, 0.8 * C, rho):.3e}  E(1.2C)={err_bound(n, 1.2 * C, rho):.4f}")
