"""The complex space form of constant holomorphic sectional curvature ``c``.

Points of the model tangent space are real vectors of length ``2m`` in the
interleaved order ``(x_1, y_1, ..., x_m, y_m)``; the complex structure acts by
``J(x_k, y_k) = (-y_k, x_k)`` on each complex slot.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from crwarplab.errors import DimensionMismatch
from crwarplab.numeric.frames import Frame, PlaneSpec
from crwarplab.tolerances import TOL_FRAME

J_INVARIANT = "J-invariant"
TOTALLY_REAL = "totally-real"
GENERIC = "generic"


def standard_J(m: int) -> np.ndarray:
    J = np.zeros((2 * m, 2 * m))
    for k in range(m):
        J[2 * k + 1, 2 * k] = 1.0
        J[2 * k, 2 * k + 1] = -1.0
    return J


def apply_J(x: np.ndarray) -> np.ndarray:
    """Standard complex structure on a vector (or on the rows of a matrix)."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    out[..., 0::2] = -x[..., 1::2]
    out[..., 1::2] = x[..., 0::2]
    return out


@dataclass(frozen=True)
class AmbientModel:
    c: float
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("complex dimension must be positive")

    @property
    def real_dim(self) -> int:
        return 2 * self.m

    @property
    def J(self) -> np.ndarray:
        return standard_J(self.m)

    def check(self, *vectors) -> None:
        for x in vectors:
            if np.shape(x)[-1] != 2 * self.m:
                raise DimensionMismatch(f"expected vectors of length {2 * self.m}, got {np.shape(x)[-1]}")

    @property
    def kmin(self) -> float:
        return min(self.c / 4.0, self.c)

    @property
    def kmax(self) -> float:
        return max(self.c / 4.0, self.c)


def csf_curvature(X, Y, Z, W, model: AmbientModel) -> float:
    """Curvature tensor R(X, Y, Z, W) of the complex space form."""
    model.check(X, Y, Z, W)
    X, Y, Z, W = (np.asarray(v, dtype=float) for v in (X, Y, Z, W))
    JX, JY, JZ = apply_J(X), apply_J(Y), apply_J(Z)
    val = (
        (X @ W) * (Y @ Z)
        - (X @ Z) * (Y @ W)
        + (JX @ W) * (JY @ Z)
        - (JX @ Z) * (JY @ W)
        + 2.0 * (X @ JY) * (JZ @ W)
    )
    return model.c / 4.0 * float(val)


def csf_sectional(pi: PlaneSpec, model: AmbientModel) -> float:
    """Sectional curvature (c/4)(1 + 3 <Ju, v>^2) of an orthonormal plane."""
    model.check(pi.u, pi.v)
    t = float(apply_J(pi.u) @ pi.v)
    return model.c / 4.0 * (1.0 + 3.0 * t * t)


@dataclass(frozen=True)
class SubspaceClass:
    tag: str
    closure_residual: float   # max |proj_{V^perp}(J v)| over the basis
    orthogonality_residual: float  # max |proj_V(J v)| over the basis

    @property
    def evidence(self) -> dict[str, float]:
        return {"J_closure": self.closure_residual, "J_orthogonality": self.orthogonality_residual}


def classify_subspace(V: Frame, model: AmbientModel, tol: float = TOL_FRAME) -> SubspaceClass:
    model.check(V.vectors)
    B = V.vectors
    JB = apply_J(B)
    inside = JB @ B.T @ B
    closure = float(np.max(np.linalg.norm(JB - inside, axis=1)))
    ortho = float(np.max(np.linalg.norm(inside, axis=1)))
    if closure < tol:
        tag = J_INVARIANT
    elif ortho < tol:
        tag = TOTALLY_REAL
    else:
        tag = GENERIC
    return SubspaceClass(tag, closure, ortho)


def kmin_closed_form(V: Frame, model: AmbientModel) -> float | None:
    """Closed-form infimum of the ambient sectional curvature over 2-planes of V.

    Returns ``None`` for generic subspaces, where only sampling applies.  A
    2-dimensional J-invariant subspace is a single holomorphic plane, whose
    curvature is ``c``.
    """
    if V.dim < 2:
        raise DimensionMismatch("subspace must have dimension >= 2")
    cls = classify_subspace(V, model)
    if cls.tag == J_INVARIANT:
        return model.c if V.dim == 2 else model.kmin
    if cls.tag == TOTALLY_REAL:
        return model.c / 4.0
    return None
