"""Scalar invariants and the closed-form sides of the inequalities."""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Callable

import numpy as np

from crwarplab.errors import DegenerateInput, ParityError
from crwarplab.numeric import DEFAULT_BUDGET, Frame, PlaneBudget, PlaneSpec, min_over_planes
from crwarplab.warped import WarpData


def partial_scalar(K: Callable[[PlaneSpec], float], V: Frame) -> float:
    """Sum of K over the coordinate planes of an orthonormal basis of V."""
    B = V.vectors
    if B.shape[0] < 2:
        raise DegenerateInput(f"need dimension >= 2, got {B.shape[0]}")
    return float(sum(K(PlaneSpec(B[i], B[j])) for i, j in combinations(range(B.shape[0]), 2)))


def delta_invariant(K: Callable[[PlaneSpec], float], V: Frame,
                    budget: PlaneBudget = DEFAULT_BUDGET, seed: int = 0) -> tuple[float, PlaneSpec]:
    """tau(V) - inf K over planes of V, with the minimizing plane.

    Two-dimensional V gives exactly 0.
    """
    tau = partial_scalar(K, V)
    if V.dim == 2:
        return 0.0, PlaneSpec(V.vectors[0], V.vectors[1])
    kmin, plane = min_over_planes(K, V, budget, seed)
    return tau - kmin, plane


def _check_parity(n1: int) -> None:
    if n1 < 0 or n1 % 2:
        raise ParityError(f"holomorphic dimension must be even and >= 0, got {n1}")


def tilde_tau_cr(n1: int, n2: int, c) -> tuple:
    """Ambient partial scalar curvatures on a CR tangent space:
    (whole tangent space, holomorphic part, totally real part).

    Exact ``Fraction`` arithmetic when ``c`` is an int or Fraction.
    """
    _check_parity(n1)
    if n2 < 0:
        raise DegenerateInput("n2 must be >= 0")
    n = n1 + n2
    q = Fraction(c) / 4 if isinstance(c, (int, Fraction)) else c / 4.0
    half = Fraction(1, 2) if isinstance(q, Fraction) else 0.5
    return (half * q * (n * (n - 1) + 3 * n1),
            half * q * n1 * (n1 + 2),
            half * q * n2 * (n2 - 1))


def fundamental_identity_residual(tau_M: float, H_norm_sq: float, h_norm_sq: float,
                                  n1: int, n2: int, c: float) -> float:
    """| n^2 |H|^2 - (2 tau + |h|^2 - (c/4)[n(n-1) + 3 n1]) |."""
    n = n1 + n2
    return abs(n * n * H_norm_sq - (2.0 * tau_M + h_norm_sq - c / 4.0 * (n * (n - 1) + 3 * n1)))


def coeff_identities(n1: int, n2: int) -> tuple[int, int, int, int]:
    """Integer coefficient identities behind the two c/4 terms."""
    _check_parity(n1)
    if n1 < 2 or n2 < 1:
        raise DegenerateInput(f"need n1 >= 2 and n2 >= 1, got ({n1}, {n2})")
    n = n1 + n2
    return (n * (n - 1) + 3 * n1 - n2 * (n2 - 1), n1 * (n1 + 2 * n2 + 2),
            n * (n - 1) + 3 * n1 - n1 * (n1 + 2), n2 * (n2 + 2 * n1 - 1))


def rhs_i(H_norm_sq: float, warp_term: float, n1: int, n2: int, c: float, kmin: float) -> float:
    n = n1 + n2
    return n * n / 2.0 * H_norm_sq - warp_term + n1 * (n1 + 2 * n2 + 2) / 2.0 * c / 4.0 - kmin


def rhs_ii(H_norm_sq: float, warp_term: float, n1: int, n2: int, c: float) -> float:
    n = n1 + n2
    return n * n / 2.0 * H_norm_sq - warp_term + n2 * (n2 + 2 * n1 - 1) / 2.0 * c / 4.0 - c / 4.0


def inequality_i(delta_hat_NT: float, H_norm_sq: float, warp_term: float,
                 n1: int, n2: int, c: float, kmin: float) -> tuple[float, float, float]:
    """(lhs, rhs, slack) of the holomorphic-factor inequality."""
    if n1 < 2:
        raise DegenerateInput(f"the holomorphic inequality needs n1 >= 2, got {n1}")
    r = rhs_i(H_norm_sq, warp_term, n1, n2, c, kmin)
    return delta_hat_NT, r, r - delta_hat_NT


def inequality_ii(delta_hat_Nperp: float, H_norm_sq: float, warp_term: float,
                  n1: int, n2: int, c: float, warp: WarpData | None = None,
                  delta_Nperp: float | None = None):
    """(lhs, rhs, slack, intrinsic_lhs, intrinsic_rhs) of the totally real
    factor inequality.

    The intrinsic form multiplies through by f^2 and moves the fiber
    gradient term across:  delta_N <= f^2 rhs + (C(n2, 2) - 1)|grad f|^2.
    It needs ``warp`` and the fiber's own invariant ``delta_Nperp``; both
    intrinsic entries are None otherwise.
    """
    if n2 < 2:
        raise DegenerateInput(f"the totally real inequality needs n2 >= 2, got {n2}")
    r = rhs_ii(H_norm_sq, warp_term, n1, n2, c)
    ilhs = irhs = None
    if warp is not None and delta_Nperp is not None:
        ilhs = delta_Nperp
        irhs = warp.f ** 2 * r + (comb(n2, 2) - 1) * warp.grad_norm_sq
    return delta_hat_Nperp, r, r - delta_hat_Nperp, ilhs, irhs


def corollary_bounds(n1: int, n2: int, c: float, kmin_NT: float) -> tuple[float, float]:
    """Right-hand sides of the two inequalities for minimal immersions, with
    the warp term moved to the left."""
    b_i = n1 * (n1 + 2 * n2 + 2) / 2.0 * c / 4.0 - kmin_NT
    b_ii = (n2 * (n2 + 2 * n1 - 1) - 2) / 2.0 * c / 4.0
    return b_i, b_ii


def chen_original(tau: float, H_norm_sq: float, n: int, c: float, kmin: float) -> tuple[float, float, float]:
    """delta_M = tau - inf K against n^2(n-2)/(2(n-1)) |H|^2 + (n+1)(n-2)/2 c,
    for submanifolds of a real space form of curvature c."""
    if n < 3:
        raise DegenerateInput(f"needs n >= 3, got {n}")
    lhs = tau - kmin
    rhs = n * n * (n - 2) / (2.0 * (n - 1)) * H_norm_sq + (n + 1) * (n - 2) / 2.0 * c
    return lhs, rhs, rhs - lhs


def real_form_chen(h, c: float, budget: PlaneBudget = DEFAULT_BUDGET, seed: int = 0):
    """``chen_original`` evaluated from second fundamental form coefficients
    of a submanifold of a real space form (curvature c) via the Gauss equation."""
    h = np.asarray(h, dtype=float)
    if h.ndim == 2:
        h = h[None]
    n = h.shape[1]

    def K(p: PlaneSpec) -> float:
        hu, hv = h @ p.u, h @ p.v
        return c + float(np.sum((hu @ p.u) * (hv @ p.v) - (hu @ p.v) ** 2))

    V = Frame(np.eye(n))
    tau = partial_scalar(K, V)
    kmin, _ = min_over_planes(K, V, budget, seed)
    H = np.trace(h, axis1=1, axis2=2) / n
    return chen_original(tau, float(H @ H), n, c, kmin)
