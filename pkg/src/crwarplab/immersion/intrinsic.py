"""Intrinsic curvature of the induced metric, computed from the metric alone.

This route never touches the normal bundle: the metric and its first
derivatives come from the chart's Taylor-2 jets, and the derivatives of the
Christoffel symbols from a fourth-order central difference.  It serves as an
independent oracle for the Gauss-equation curvatures.
"""
from __future__ import annotations

import numpy as np

from crwarplab.immersion.chart import ImmersionChart, jet_evaluate
from crwarplab.numeric import Frame, min_over_planes
from crwarplab.warped import christoffel_from_metric

FD_STEP = 1e-3
_STENCIL = ((-2, 1.0 / 12), (-1, -8.0 / 12), (1, 8.0 / 12), (2, -1.0 / 12))


def metric_jet(chart: ImmersionChart, point) -> tuple[np.ndarray, np.ndarray]:
    """Induced metric ``g`` and ``dg[k, i, j] = d_k g_ij`` at ``point``."""
    jet = jet_evaluate(chart, point, check_rank=False)
    J = jet.jacobian
    g = J.T @ J
    # d_k g_ij = <F_ik, F_j> + <F_i, F_jk>
    a = np.einsum("qik,qj->kij", jet.hessians, J)
    return g, a + np.swapaxes(a, 1, 2)


def riemann_coordinates(chart: ImmersionChart, point, idx=None, step: float = FD_STEP) -> np.ndarray:
    """``Rm[a, b, c, d] = <R(d_a, d_b) d_c, d_d>`` of the metric restricted to
    the coordinates ``idx`` (all coordinates when omitted), other coordinates
    held fixed."""
    p = np.asarray(point, dtype=float)
    idx = list(range(chart.n)) if idx is None else list(idx)
    k = len(idx)
    sel = np.ix_(idx, idx)

    def gamma_at(q):
        g, dg = metric_jet(chart, q)
        return christoffel_from_metric(g[sel], dg[np.ix_(idx, idx, idx)])

    G = gamma_at(p)
    dG = np.zeros((k,) + G.shape)       # dG[m, l, i, j] = d_m Gamma^l_ij
    for m, coord in enumerate(idx):
        acc = np.zeros_like(G)
        for s, w in _STENCIL:
            q = p.copy()
            q[coord] += s * step
            acc += w * gamma_at(q)
        dG[m] = acc / step
    # R^l_{i j k} with R(d_j, d_k) d_i = R^l_{ijk} d_l
    R = (np.einsum("jlki->lijk", dG) - np.einsum("klji->lijk", dG)
         + np.einsum("ljm,mki->lijk", G, G) - np.einsum("lkm,mji->lijk", G, G))
    g, _ = metric_jet(chart, p)
    gs = g[sel]
    # Rm[a, b, c, d] = <R(d_a, d_b) d_c, d_d> = R^l_{c a b} g_{l d}
    return np.einsum("lcab,ld->abcd", R, gs)


def sectional_from_riemann(Rm: np.ndarray, X, Y, g: np.ndarray) -> float:
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    num = np.einsum("abcd,a,b,c,d->", Rm, X, Y, Y, X)
    den = (X @ g @ X) * (Y @ g @ Y) - (X @ g @ Y) ** 2
    return float(num / den)


def intrinsic_sectional_matrix(chart: ImmersionChart, point, coord_map: np.ndarray) -> np.ndarray:
    """K(e_i ^ e_j) of the induced metric for the orthonormal frame whose
    coordinate coefficients are the rows of ``coord_map``."""
    Rm = riemann_coordinates(chart, point)
    Rf = np.einsum("ia,jb,kc,ld,abcd->ijkl", coord_map, coord_map, coord_map, coord_map, Rm)
    n = coord_map.shape[0]
    K = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i != j:
                K[i, j] = Rf[i, j, j, i]
    return K


def factor_sectional_extrema(chart: ImmersionChart, point, idx) -> tuple[float, float, float]:
    """Scalar curvature, minimum and maximum sectional curvature of the metric
    induced on the coordinate slice ``idx`` (exact spectrum for dimension <= 3,
    Grassmannian search beyond).

    Returns ``(tau, kmin, kmax)``; all zero for one-dimensional slices.
    """
    idx = list(idx)
    k = len(idx)
    if k < 2:
        return 0.0, 0.0, 0.0
    Rm = riemann_coordinates(chart, point, idx)
    g, _ = metric_jet(chart, point)
    gs = g[np.ix_(idx, idx)]
    # orthonormal basis for gs
    L = np.linalg.cholesky(gs)
    E = np.linalg.inv(L.T)            # columns orthonormal w.r.t. gs
    Rf = np.einsum("ai,bj,ck,dl,abcd->ijkl", E, E, E, E, Rm)
    tau = sum(Rf[i, j, j, i] for i in range(k) for j in range(i + 1, k))
    if k == 2:
        K = Rf[0, 1, 1, 0]
        return float(tau), float(K), float(K)
    # sectional curvature on planes = curvature operator on unit decomposable bivectors;
    # for k == 3 every unit bivector is decomposable, so the operator spectrum is exact
    pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]
    Q = np.array([[Rf[i, j, l, p_] for (p_, l) in pairs] for (i, j) in pairs])
    Q = 0.5 * (Q + Q.T)
    ev = np.linalg.eigvalsh(Q)
    if k == 3:
        return float(tau), float(ev[0]), float(ev[-1])
    frame = Frame(np.eye(k))
    lo, _ = min_over_planes(lambda p: np.einsum("abcd,a,b,c,d->", Rf, p.u, p.v, p.v, p.u), frame)
    hi, _ = min_over_planes(lambda p: -np.einsum("abcd,a,b,c,d->", Rf, p.u, p.v, p.v, p.u), frame)
    return float(tau), float(lo), float(-hi)
