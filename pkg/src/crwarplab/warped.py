"""Warped-product data: warping function jets, Bishop-O'Neill curvature and the
leaf-wise / intrinsic Chen-invariant transfer on the fiber.

Laplacians use the geometer's sign, ``Delta = -div grad``; on flat R^k this is
``-(f_11 + ... + f_kk)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from crwarplab.dsl import Expr
from crwarplab.errors import DegenerateInput, DimensionMismatch, NonPositiveWarp, ParityError
from crwarplab.numeric.taylor import Taylor2
from crwarplab.tolerances import TOL_EXACT

LAPLACIAN_SIGN = "geometer (Delta = -div grad)"


@dataclass(frozen=True)
class WarpData:
    f: float
    grad_norm_sq: float
    laplacian_f: float
    grad_f: np.ndarray | None = None

    def __post_init__(self):
        if not self.f > 0.0:
            raise NonPositiveWarp(f"warping function must be positive, got {self.f!r}")
        if self.grad_norm_sq < -TOL_EXACT:
            raise ValueError("grad_norm_sq must be non-negative")

    @property
    def laplacian_over_f(self) -> float:
        return self.laplacian_f / self.f


@dataclass(frozen=True)
class WarpedSpec:
    n1: int
    n2: int
    f_expr: Expr | float
    holomorphic_base: bool = True

    def __post_init__(self):
        if self.holomorphic_base and self.n1 % 2:
            raise ParityError(f"holomorphic factor dimension must be even, got {self.n1}")
        if self.n1 < 1 or self.n2 < 1:
            raise DimensionMismatch("both factors need positive dimension")

    def warp_at(self, base_point, base_metric=None, christoffel=None) -> WarpData:
        return grad_laplacian(self.f_expr, base_point, base_metric, christoffel)


def christoffel_from_metric(g: np.ndarray, dg: np.ndarray) -> np.ndarray:
    """Christoffel symbols ``G[k, i, j]`` from ``g`` and ``dg[l, i, j] = d_l g_ij``."""
    ginv = np.linalg.inv(g)
    # first kind: Gamma_{l i j} = (d_i g_lj + d_j g_il - d_l g_ij) / 2
    first = 0.5 * (np.einsum("ilj->lij", dg) + np.einsum("jil->lij", dg) - dg)
    return np.einsum("kl,lij->kij", ginv, first)


def grad_laplacian(f_expr, point, base_metric=None, christoffel=None) -> WarpData:
    """Gradient, squared gradient norm and Laplacian of the warping function.

    ``base_metric`` is the metric matrix of the first factor at ``point``
    (identity if omitted); ``christoffel[k, i, j]`` its Christoffel symbols
    (zero if omitted, i.e. a metric that is constant in these coordinates).
    """
    point = np.atleast_1d(np.asarray(point, dtype=float))
    d = point.shape[0]
    if isinstance(f_expr, (int, float)):
        t = Taylor2.constant(float(f_expr), d)
    else:
        t = f_expr.jet(point)
    if not t.value > 0.0:
        raise NonPositiveWarp(f"warping function is {t.value!r} at {point.tolist()}")
    g = np.eye(d) if base_metric is None else np.asarray(base_metric, dtype=float)
    if g.shape != (d, d):
        raise DimensionMismatch(f"base metric {g.shape} does not match {d} base coordinates")
    ginv = np.linalg.inv(g)
    df = t.grad
    hess = t.hess
    if christoffel is not None:
        hess = hess - np.einsum("kij,k->ij", christoffel, df)
    grad = ginv @ df
    return WarpData(
        f=t.value,
        grad_norm_sq=float(df @ grad),
        laplacian_f=-float(np.einsum("ij,ij->", ginv, hess)),
        grad_f=grad,
    )


def bo_fiber_sectional(warp: WarpData, k_fiber: float) -> float:
    """Curvature of M on a plane tangent to the fiber, from the fiber's own curvature."""
    return (k_fiber - warp.grad_norm_sq) / warp.f ** 2


def warp_identity_residual(mixed_K, warp: WarpData, n2: int) -> float:
    """| sum of mixed sectional curvatures - n2 * Delta f / f |."""
    mixed = np.asarray(mixed_K, dtype=float)
    if mixed.ndim != 2 or mixed.shape[1] != n2:
        raise DimensionMismatch(f"mixed curvature matrix must be n1 x {n2}, got {mixed.shape}")
    return abs(float(mixed.sum()) - n2 * warp.laplacian_over_f)


def _transfer_coeff(n2: int) -> int:
    if n2 < 2:
        raise DegenerateInput(f"the fiber Chen invariant needs n2 >= 2, got {n2}")
    return comb(n2, 2) - 1


def bo_delta_transfer(delta_fiber_intrinsic: float, warp: WarpData, n2: int) -> float:
    """Leaf-wise Chen invariant of the fiber directions from the fiber's intrinsic one."""
    coeff = _transfer_coeff(n2)
    return (delta_fiber_intrinsic - coeff * warp.grad_norm_sq) / warp.f ** 2


def bo_delta_transfer_inverse(delta_hat: float, warp: WarpData, n2: int) -> float:
    """Intrinsic Chen invariant of the fiber from the leaf-wise value."""
    coeff = _transfer_coeff(n2)
    return warp.f ** 2 * delta_hat + coeff * warp.grad_norm_sq


def constant_curvature_delta(kappa: float, k: int) -> float:
    """Chen first invariant of a k-dimensional space of constant curvature kappa."""
    if k < 2:
        raise DegenerateInput("dimension must be >= 2")
    return kappa * (k * (k - 1) / 2 - 1)
