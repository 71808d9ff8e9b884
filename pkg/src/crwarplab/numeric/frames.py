from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from crwarplab.errors import DegenerateInput, DimensionMismatch
from crwarplab.tolerances import TOL_EXACT, TOL_FRAME

GRAM_DET_MIN = 1e-14


@dataclass(frozen=True)
class Frame:
    """Ordered list of vectors stored as the rows of ``vectors``.

    ``split`` optionally records block lengths ``(n_T, n_perp, n_normal)`` for
    adapted frames: the holomorphic tangent block, the totally real tangent
    block and the normal block, in that order.
    """

    vectors: np.ndarray
    split: tuple[int, ...] | None = None
    orthonormal: bool = True

    def __post_init__(self):
        v = np.atleast_2d(np.asarray(self.vectors, dtype=float))
        object.__setattr__(self, "vectors", v)
        if self.split is not None:
            if sum(self.split) != v.shape[0]:
                raise DimensionMismatch(f"split {self.split} does not partition {v.shape[0]} vectors")
            if len(self.split) == 3 and self.split[0] % 2:
                raise DimensionMismatch("holomorphic block length must be even")
        if self.orthonormal:
            dev = np.max(np.abs(v @ v.T - np.eye(v.shape[0]))) if v.size else 0.0
            if dev >= TOL_FRAME:
                raise DegenerateInput(f"frame flagged orthonormal but Gram deviates by {dev:.3e}")

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    @property
    def ambient_dim(self) -> int:
        return self.vectors.shape[1]

    def block(self, index: int) -> "Frame":
        if self.split is None:
            raise ValueError("frame has no block split")
        start = sum(self.split[:index])
        return Frame(self.vectors[start:start + self.split[index]], orthonormal=self.orthonormal)

    def project(self, x: np.ndarray) -> np.ndarray:
        """Orthogonal projection onto the span (frame must be orthonormal)."""
        return self.vectors.T @ (self.vectors @ x)

    def coords(self, x: np.ndarray) -> np.ndarray:
        return self.vectors @ x


@dataclass(frozen=True)
class PlaneSpec:
    """A 2-plane spanned by the orthonormal pair ``(u, v)``."""

    u: np.ndarray
    v: np.ndarray
    parent: Frame | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float)
        v = np.asarray(self.v, dtype=float)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        if u.shape != v.shape:
            raise DimensionMismatch("plane vectors differ in length")
        err = max(abs(u @ u - 1.0), abs(v @ v - 1.0), abs(u @ v))
        if err >= TOL_EXACT:
            raise DegenerateInput(f"plane vectors not orthonormal (error {err:.3e})")
        if self.parent is not None:
            for w in (u, v):
                if np.linalg.norm(w - self.parent.project(w)) >= TOL_FRAME:
                    raise DegenerateInput("plane does not lie in its parent subspace")

    @classmethod
    def from_pair(cls, a, b, parent: Frame | None = None) -> "PlaneSpec":
        """Orthonormalize an arbitrary independent pair."""
        f = gram_schmidt([a, b])
        return cls(f.vectors[0], f.vectors[1], parent)


def gram_schmidt(vectors, inner=None) -> Frame:
    """Orthonormalize ``vectors`` with respect to the bilinear form ``inner``.

    ``inner`` is a symmetric positive-definite matrix (Euclidean when omitted).
    The direction of each input vector is preserved relative to its
    predecessors.  Two passes of modified Gram-Schmidt are used.
    """
    V = np.atleast_2d(np.asarray(vectors, dtype=float))
    k, N = V.shape
    G = np.eye(N) if inner is None else np.asarray(inner, dtype=float)
    if G.shape != (N, N):
        raise DimensionMismatch(f"inner product is {G.shape}, vectors have length {N}")
    gram = V @ G @ V.T
    scale = np.sqrt(np.clip(np.diag(gram), 0.0, None))
    if np.any(scale == 0.0):
        raise DegenerateInput("zero vector in Gram-Schmidt input")
    det = np.linalg.det(gram / np.outer(scale, scale))
    if not det > GRAM_DET_MIN:
        raise DegenerateInput(f"vectors are (numerically) dependent: normalized Gram determinant {det:.3e}")
    out = np.zeros_like(V)
    for i in range(k):
        w = V[i].copy()
        for _ in range(2):
            for j in range(i):
                w -= (out[j] @ G @ w) * out[j]
        out[i] = w / np.sqrt(w @ G @ w)
    flag = inner is None
    return Frame(out, orthonormal=flag)


def orthonormal_complement(frame_vectors: np.ndarray, n: int | None = None) -> np.ndarray:
    """Rows spanning the Euclidean orthogonal complement of the given rows."""
    A = np.atleast_2d(frame_vectors)
    N = A.shape[1] if n is None else n
    if A.size == 0:
        return np.eye(N)
    k = A.shape[0]
    u, _, _ = np.linalg.svd(A.T, full_matrices=True)
    comp = u[:, k:].T
    # reorthogonalize against the input for full working precision
    comp = comp - (comp @ A.T) @ A
    q, _ = np.linalg.qr(comp.T)
    return q.T


def random_rotation(k: int, rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((k, k)))
    return q * np.sign(np.diag(r))
