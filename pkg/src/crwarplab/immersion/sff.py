"""Second fundamental form, mean curvature, shape operators and the Gauss
equation, all expressed in an adapted orthonormal frame."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from crwarplab.ambient import AmbientModel, csf_curvature, csf_sectional
from crwarplab.errors import DimensionMismatch
from crwarplab.immersion.adapt import AdaptedFrameReport
from crwarplab.immersion.chart import ImmersionChart
from crwarplab.numeric.frames import Frame, PlaneSpec


@dataclass(frozen=True)
class SecondFundamentalForm:
    """Coefficients ``h[r, i, j] = <h(e_i, e_j), e_{n+1+r}>``.

    ``n_T`` and ``n_perp`` give the block structure of the tangent indices
    (holomorphic first).  ``frame`` optionally carries the ambient frame the
    coefficients refer to; synthetic data may omit it.
    """

    h: np.ndarray
    n_T: int
    n_perp: int
    frame: Frame | None = None

    def __post_init__(self):
        h = np.asarray(self.h, dtype=float)
        if h.ndim == 2:
            h = h[None]
        if h.ndim != 3 or h.shape[1] != h.shape[2]:
            raise DimensionMismatch(f"h must have shape (normals, n, n), got {h.shape}")
        if h.shape[1] != self.n_T + self.n_perp:
            raise DimensionMismatch(f"h has {h.shape[1]} tangent indices, blocks give "
                                    f"{self.n_T}+{self.n_perp}")
        h = 0.5 * (h + np.swapaxes(h, 1, 2))
        object.__setattr__(self, "h", h)

    @property
    def n(self) -> int:
        return self.h.shape[1]

    @property
    def codim(self) -> int:
        return self.h.shape[0]

    @property
    def T(self) -> slice:
        return slice(0, self.n_T)

    @property
    def P(self) -> slice:
        return slice(self.n_T, self.n)

    @property
    def norm_sq(self) -> float:
        return float(np.sum(self.h ** 2))

    def rotated(self, tangent_rot: np.ndarray | None = None,
                normal_rot: np.ndarray | None = None) -> "SecondFundamentalForm":
        """Coefficients in a rotated frame.

        Rows of ``tangent_rot`` are the new tangent vectors in old frame
        coordinates; rows of ``normal_rot`` likewise for the normals.
        """
        h = self.h
        if tangent_rot is not None:
            h = np.einsum("ia,rab,jb->rij", tangent_rot, h, tangent_rot)
        if normal_rot is not None:
            h = np.einsum("sr,rij->sij", normal_rot, h)
        frame = None
        if self.frame is not None:
            V = self.frame.vectors.copy()
            n = self.n
            if tangent_rot is not None:
                V[:n] = tangent_rot @ V[:n]
            if normal_rot is not None:
                V[n:] = normal_rot @ V[n:]
            frame = Frame(V, split=None)
        return SecondFundamentalForm(h, self.n_T, self.n_perp, frame)


def second_fundamental_form(chart: ImmersionChart, point, frame: AdaptedFrameReport) -> SecondFundamentalForm:
    C = frame.coord_map
    normals = frame.normal
    # S[r, k, l] = <d_k d_l F, e_r>
    S = np.einsum("rq,qkl->rkl", normals, frame.jet.hessians)
    h = np.einsum("ik,rkl,jl->rij", C, S, C)
    return SecondFundamentalForm(h, frame.n_T, frame.n_perp, frame.frame)


def tangential_hessian(frame: AdaptedFrameReport) -> np.ndarray:
    """``G[a, k, l] = <d_k d_l F, e_a>`` for tangent frame vectors ``e_a``."""
    return np.einsum("aq,qkl->akl", frame.tangent, frame.jet.hessians)


def mean_curvature(sff: SecondFundamentalForm) -> tuple[np.ndarray, float]:
    H = np.trace(sff.h, axis1=1, axis2=2) / sff.n
    return H, float(H @ H)


def shape_operator(sff: SecondFundamentalForm, xi_index: int) -> np.ndarray:
    if not 0 <= xi_index < sff.codim:
        raise IndexError(f"normal index {xi_index} out of range (codim {sff.codim})")
    return sff.h[xi_index].copy()


def gauss_sectional(sff: SecondFundamentalForm, pi: PlaneSpec, ambient_K: float) -> float:
    """K^M(pi) = K~(pi) + sum_r [h_r(u,u) h_r(v,v) - h_r(u,v)^2] for a plane
    given in tangent-frame coordinates."""
    u, v = pi.u, pi.v
    if u.shape[0] != sff.n:
        raise DimensionMismatch(f"plane lives in R^{u.shape[0]}, tangent space is R^{sff.n}")
    Au = sff.h @ u
    Av = sff.h @ v
    return float(ambient_K + np.sum((Au @ u) * (Av @ v) - (Au @ v) ** 2))


def ambient_sectional_oracle(tangent: np.ndarray, model: AmbientModel):
    """K~ on planes given in tangent-frame coordinates, through the ambient frame."""
    E = np.asarray(tangent, dtype=float)

    def K(pi: PlaneSpec) -> float:
        return csf_sectional(PlaneSpec(E.T @ pi.u, E.T @ pi.v), model)

    return K


def sectional_oracle(sff: SecondFundamentalForm, tangent: np.ndarray, model: AmbientModel):
    """K^M on planes given in tangent-frame coordinates (Gauss equation)."""
    Kt = ambient_sectional_oracle(tangent, model)

    def K(pi: PlaneSpec) -> float:
        return gauss_sectional(sff, pi, Kt(pi))

    return K


def gauss_sectional_matrix(sff: SecondFundamentalForm, tangent: np.ndarray,
                           model: AmbientModel) -> np.ndarray:
    """K^M(e_i ^ e_j) for all frame pairs (diagonal left at zero)."""
    n = sff.n
    h = sff.h
    diag = np.einsum("rii->ri", h)
    K = np.einsum("ri,rj->ij", diag, diag) - np.einsum("rij,rij->ij", h, h)
    JE = np.asarray(tangent) @ model.J.T
    t = JE @ np.asarray(tangent).T          # t[i, j] = <J e_i, e_j>
    K = K + model.c / 4.0 * (1.0 + 3.0 * t * t)
    K[np.arange(n), np.arange(n)] = 0.0
    return K


def ricci_form(sff: SecondFundamentalForm, tangent: np.ndarray, model: AmbientModel) -> np.ndarray:
    """Ricci tensor of M in the tangent frame: Ric(e_i, e_j) = sum_k R(e_k, e_i, e_j, e_k)
    by the Gauss equation."""
    E = np.asarray(tangent)
    n = sff.n
    h = sff.h
    trace = np.trace(h, axis1=1, axis2=2)
    ric = np.einsum("r,rij->ij", trace, h) - np.einsum("rik,rkj->ij", h, h)
    if model.c != 0.0:
        amb = np.zeros((n, n))
        for i in range(n):
            for j in range(n):
                amb[i, j] = sum(csf_curvature(E[k], E[i], E[j], E[k], model) for k in range(n))
        ric = ric + amb
    return 0.5 * (ric + ric.T)
