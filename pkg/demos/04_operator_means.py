"""The operator-mean catalogue: harmonic, geometric, power, Karcher.

All means are operator monotone free functions; on commuting tuples they
collapse to their scalar counterparts, and the arithmetic-geometric-harmonic
ordering holds in the Loewner order.
"""

import numpy as np

from opmono.freefun import (
    arithmetic_mean,
    geometric_mean_2,
    harmonic_mean,
    karcher_mean,
    power_mean,
)
from opmono.matcore import min_eig

rng = np.random.default_rng(4)

# Scalar sanity: the geometric mean of 4I and 9I is 6I.
print("geomean(4I, 9I) =", geometric_mean_2(4 * np.eye(2), 9 * np.eye(2))[0, 0].real, "* I")

# Commuting tuples collapse entrywise.
x = (np.diag([1.0, 2.0, 0.5]), np.diag([3.0, 0.8, 1.2]))
w = (0.4, 0.6)
k = karcher_mean(x, w)
expected = np.exp(0.4 * np.log(np.diag(x[0]).real) + 0.6 * np.log(np.diag(x[1]).real))
print("Karcher on commuting diagonals:", np.round(np.diag(k).real, 10))
print("scalar weighted geometric mean:", np.round(expected, 10))

# Power means interpolate: t = 1 is arithmetic, t -> 0 approaches Karcher.
def rand_spd(n):
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, _ = np.linalg.qr(g)
    return (q * rng.uniform(0.5, 2.0, n)) @ q.conj().T


y = tuple(rand_spd(3) for _ in range(2))
for t in (1.0, 0.5, 0.25, 0.125):
    p = power_mean(y, t, (0.5, 0.5))
    print(f"|| P_t - Karcher || at t = {t}: {np.linalg.norm(p - karcher_mean(y, (0.5, 0.5))):.4f}")

# The AGH ordering: harmonic <= Karcher <= arithmetic.
h = harmonic_mean((0.5, 0.5))(y)
g = karcher_mean(y, (0.5, 0.5))
a = arithmetic_mean((0.5, 0.5))(y)
print("Karcher - harmonic   min eig:", f"{min_eig(g - h):.4f}")
print("arithmetic - Karcher min eig:", f"{min_eig(a - g):.4f}")
