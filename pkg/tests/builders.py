"""Shared constructions for the test-suite."""
from __future__ import annotations

import numpy as np

from crwarplab.chen import SyntheticScenario

# the distinguished plane of the equality fixture: e_0 and e_2 are both real
# parts of different complex slots, so the plane is totally real
EQ_PLANE = (0, 2)
EQ_MU1 = 0.7


def equality_h(mu1: float = EQ_MU1, n1: int = 4, n2: int = 2, normals: int = 4) -> np.ndarray:
    """Coefficients with the canonical block shape of the equality case.

    The first normal carries (mu1, -mu1) on the distinguished plane; every
    other normal a traceless 2x2 block there.  The totally real block gets a
    traceless symmetric part in every normal, mixed entries stay zero.
    """
    n = n1 + n2
    h = np.zeros((normals, n, n))
    p, q = EQ_PLANE
    h[0, p, p], h[0, q, q] = mu1, -mu1
    coeffs = [(0.0, 0.0), (0.3, -0.2), (-0.1, 0.25), (0.2, 0.1)]
    for r in range(1, normals):
        a, b = coeffs[r % len(coeffs)]
        h[r, p, p], h[r, q, q] = a, -a
        h[r, p, q] = h[r, q, p] = b
    for r in range(normals):
        d = 0.15 * (r + 1)
        h[r, n1, n1], h[r, n1 + 1, n1 + 1] = d, -d
        h[r, n1, n1 + 1] = h[r, n1 + 1, n1] = 0.05 * (r - 1)
    return h


def equality_scenario(mu1: float = EQ_MU1, c: float = 4.0) -> SyntheticScenario:
    return SyntheticScenario(4, 2, c, equality_h(mu1))


def sym_random(rng: np.random.Generator, normals: int, n: int, scale: float = 1.0) -> np.ndarray:
    h = rng.normal(size=(normals, n, n)) * scale
    return 0.5 * (h + np.swapaxes(h, 1, 2))


def fd_grad_hess(fn, x, step: float = 1e-4):
    """Central finite-difference gradient and Hessian of a scalar function."""
    x = np.asarray(x, dtype=float)
    d = x.size
    g = np.zeros(d)
    H = np.zeros((d, d))
    E = np.eye(d) * step
    f0 = fn(x)
    for i in range(d):
        g[i] = (fn(x + E[i]) - fn(x - E[i])) / (2 * step)
        H[i, i] = (fn(x + E[i]) - 2 * f0 + fn(x - E[i])) / step ** 2
        for j in range(i + 1, d):
            H[i, j] = H[j, i] = (fn(x + E[i] + E[j]) - fn(x + E[i] - E[j])
                                 - fn(x - E[i] + E[j]) + fn(x - E[i] - E[j])) / (4 * step ** 2)
    return g, H
