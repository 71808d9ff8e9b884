"""CR-adapted orthonormal frames along an immersion into flat C^m."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from crwarplab.ambient import apply_J
from crwarplab.errors import CRViolation
from crwarplab.immersion.chart import ImmersionChart, Jet, jet_evaluate
from crwarplab.numeric.frames import Frame, gram_schmidt, orthonormal_complement
from crwarplab.tolerances import TOL_FRAME


@dataclass
class AdaptedFrameReport:
    frame: Frame                 # tangent D_T, tangent D_perp, normal (J D_perp then nu)
    jdperp_basis: np.ndarray     # rows
    nu_basis: np.ndarray         # rows
    residuals: dict[str, float]
    coord_map: np.ndarray        # e_i = sum_k coord_map[i, k] * dF/du_k
    jet: Jet
    point: np.ndarray
    warped_compatible: bool      # D_T is exactly the base (first factor) directions
    notes: list[str] = field(default_factory=list)

    @property
    def n_T(self) -> int:
        return self.frame.split[0]

    @property
    def n_perp(self) -> int:
        return self.frame.split[1]

    @property
    def n(self) -> int:
        return self.frame.split[0] + self.frame.split[1]

    @property
    def tangent(self) -> np.ndarray:
        return self.frame.vectors[: self.n]

    @property
    def normal(self) -> np.ndarray:
        return self.frame.vectors[self.n:]


def _orth_rows(rows: np.ndarray) -> np.ndarray:
    return gram_schmidt(rows).vectors if len(rows) else rows


def _paired_basis(cols: np.ndarray, T: np.ndarray) -> np.ndarray:
    """(v, Jv) pairs spanning the J-invariant span of ``cols``.

    ``T`` holds an orthonormal basis of the tangent space; ``J v`` is projected
    onto it so that every frame vector is exactly tangent.
    """
    basis: list[np.ndarray] = []
    for w in cols:
        for _ in range(2):
            for b in basis:
                w = w - (b @ w) * b
        nw = np.linalg.norm(w)
        if nw < 1e-8 * max(1.0, np.linalg.norm(cols, axis=1).max()):
            continue
        v = w / nw
        jv = T.T @ (T @ apply_J(v))
        for _ in range(2):
            for b in basis + [v]:
                jv = jv - (b @ jv) * b
        jv = jv / np.linalg.norm(jv)
        basis.extend([v, jv])
    return np.array(basis).reshape(-1, cols.shape[1])


def adapt_frame(chart: ImmersionChart, point, tol: float = TOL_FRAME) -> AdaptedFrameReport:
    p = np.asarray(point, dtype=float)
    jet = jet_evaluate(chart, p)
    cols = jet.jacobian.T                      # (n, 2m) coordinate vectors
    n, N = cols.shape
    T = gram_schmidt(cols).vectors             # tangent, base directions first

    # P_ij = <t_i, J t_j>; eigenvalues of P^T P are 1 on D_T and 0 on D_perp
    P = T @ apply_J(T).T
    lam, vec = np.linalg.eigh(P.T @ P)
    hol = lam > 0.5
    n_T = int(hol.sum())
    if n_T % 2:
        raise CRViolation(f"J-invariant part has odd dimension {n_T}; not a CR submanifold")
    DT_span = (vec[:, hol].T @ T) if n_T else np.zeros((0, N))
    DT_span = _orth_rows(DT_span)

    base = cols[: chart.base_dim]
    notes = []
    warped_compatible = False
    if n_T == chart.base_dim and n_T > 0:
        # does the holomorphic distribution coincide with the base directions?
        resid = np.linalg.norm(base - (base @ DT_span.T) @ DT_span, axis=1).max()
        warped_compatible = bool(resid < tol * max(1.0, np.linalg.norm(base, axis=1).max()))
    if warped_compatible:
        DT = _paired_basis(base, T)
    elif n_T:
        DT = _paired_basis(DT_span, T)
        notes.append("holomorphic distribution differs from the base factor")
    else:
        DT = np.zeros((0, N))
        if chart.base_dim:
            notes.append("no holomorphic directions; warped base is not the holomorphic factor")

    if warped_compatible or n_T == 0:
        rest = cols[chart.base_dim:] if warped_compatible else cols
    else:
        rest = T
    perp: list[np.ndarray] = []
    for w in rest:
        for _ in range(2):
            for b in list(DT) + perp:
                w = w - (b @ w) * b
        nw = np.linalg.norm(w)
        if nw > 1e-8:
            perp.append(w / nw)
    Dperp = np.array(perp).reshape(-1, N)
    if DT.shape[0] + Dperp.shape[0] != n:
        raise CRViolation("could not split the tangent space into D_T and D_perp")
    tangent = np.vstack([DT, Dperp])

    # normal bundle: J D_perp first, then its J-invariant complement nu
    jd = apply_J(Dperp) if len(Dperp) else np.zeros((0, N))
    jd = jd - (jd @ tangent.T) @ tangent
    jd = _orth_rows(jd) if len(jd) else jd
    nu = orthonormal_complement(np.vstack([tangent, jd]), N)
    frame = Frame(np.vstack([tangent, jd, nu]), split=(DT.shape[0], Dperp.shape[0], N - n))

    TT = tangent
    res = {
        "DT_J_closure": _max_norm(apply_J(DT) - (apply_J(DT) @ DT.T) @ DT) if len(DT) else 0.0,
        "Dperp_J_normal": _max_norm(apply_J(Dperp) @ TT.T) if len(Dperp) else 0.0,
        "DT_pairing": _max_norm(apply_J(DT[0::2]) - DT[1::2]) if len(DT) else 0.0,
        "nu_J_invariance": _max_norm(apply_J(nu) - (apply_J(nu) @ nu.T) @ nu) if len(nu) else 0.0,
        "normal_split": float(np.max(np.abs(frame.vectors @ frame.vectors.T - np.eye(N)))),
        "JDperp_alignment": _max_norm(apply_J(Dperp) - jd) if len(Dperp) else 0.0,
    }
    bad = {k: v for k, v in res.items() if v >= tol}
    if bad:
        raise CRViolation(f"CR structure residuals exceed {tol:g}: "
                          + ", ".join(f"{k}={v:.3e}" for k, v in sorted(bad.items())))

    # coefficients of the tangent frame in the coordinate basis
    coord_map = np.linalg.lstsq(jet.jacobian, tangent.T, rcond=None)[0].T
    return AdaptedFrameReport(frame, jd, nu, res, coord_map, jet, p, warped_compatible, notes)


def _max_norm(rows: np.ndarray) -> float:
    rows = np.atleast_2d(rows)
    if rows.size == 0:
        return 0.0
    return float(np.max(np.linalg.norm(rows, axis=1)))


def cr_residuals(chart: ImmersionChart, point) -> dict[str, float]:
    """J-closure diagnostics without raising: how far the tangent space is from CR."""
    jet = jet_evaluate(chart, point)
    T = gram_schmidt(jet.jacobian.T).vectors
    P = T @ apply_J(T).T
    lam = np.linalg.eigvalsh(P.T @ P)
    return {"cr_defect": float(np.max(np.minimum(lam, 1.0 - lam)))}
