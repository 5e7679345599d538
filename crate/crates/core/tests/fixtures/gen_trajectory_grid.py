"""Reference trajectory counts in 60-digit arithmetic.

Writes trajectory_grid.json: 100 (epsilon, delta, p_max, extent, count)
rows. Inputs are emitted with repr() and evaluated from the exact binary
value of that double, so the Rust side sees identical arguments.
"""
import json
import random

from mpmath import ceil, e, log, mp, mpf, sqrt

mp.dps = 60
rng = random.Random(20240611)


def count(eps, delta, p, xi):
    eps, delta, p, xi = map(mpf, (eps, delta, p, xi))
    t = 2 * (sqrt(xi) + sqrt(p)) ** 2 / (sqrt(p + eps) - sqrt(p)) ** 2 * log(2 * e**2 / delta)
    return int(ceil(t)), t


rows = []
while len(rows) < 100:
    eps = 10 ** rng.uniform(-3, -0.3)
    delta = 10 ** rng.uniform(-6, -0.05)
    p = rng.choice([1.0, 10 ** rng.uniform(-3, 0)])
    xi = rng.choice([1.0, 10 ** rng.uniform(0, 4)])
    c, _ = count(eps, delta, p, xi)
    rows.append({"epsilon": eps, "delta": delta, "p_max": p, "extent": xi, "count": c})

with open("trajectory_grid.json", "w") as f:
    json.dump(rows, f, indent=1)
