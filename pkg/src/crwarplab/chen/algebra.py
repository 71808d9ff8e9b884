"""Pointwise algebra on second fundamental form coefficients.

Indexing is zero based throughout: tangent indices ``0 .. n-1`` with the
holomorphic block first (``0 .. n1-1``), normal index ``0`` is the
distinguished normal (parallel to H when H != 0), ``1 ..`` the rest.  The
distinguished plane always occupies tangent slots ``0, 1`` of its block;
callers permute indices to get there (see :func:`move_plane_first`).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from crwarplab.errors import DegenerateInput, DimensionMismatch
from crwarplab.tolerances import TOL_EXACT


def _as_h(h) -> np.ndarray:
    h = np.asarray(getattr(h, "h", h), dtype=float)
    if h.ndim == 2:
        h = h[None]
    if h.ndim != 3 or h.shape[1] != h.shape[2]:
        raise DimensionMismatch(f"coefficients must have shape (normals, n, n), got {h.shape}")
    return h


# --------------------------------------------------------------------- lemma 1

@dataclass(frozen=True)
class Lemma1Result:
    constraint_residual: float
    slack: float
    equality: bool
    equality_defect: float


def lemma1_beta(alphas) -> float:
    """The unique beta for which ``alphas`` satisfy the lemma's constraint."""
    a = np.asarray(alphas, dtype=float)
    n = a.shape[0]
    if n < 2:
        raise DegenerateInput("need at least two alphas")
    return float(a.sum() ** 2 / (n - 1) - a @ a)


def lemma1_check(alphas, beta: float, tol: float = TOL_EXACT) -> Lemma1Result:
    """Constraint residual, slack ``2 a1 a2 - beta`` and equality flag.

    Equality means ``a1 + a2 = a3 = ... = an``; for ``n = 2`` it is automatic.
    Both the residual and the equality test are relative to the size of the
    data so that scaled instances behave alike.
    """
    a = np.asarray(alphas, dtype=float)
    n = a.shape[0]
    if n < 2:
        raise DegenerateInput("need at least two alphas")
    s = float(a.sum())
    resid = s * s - (n - 1) * (float(a @ a) + beta)
    slack = 2.0 * a[0] * a[1] - beta
    target = a[0] + a[1]
    defect = float(np.max(np.abs(a[2:] - target))) if n > 2 else 0.0
    scale = max(1.0, float(np.max(np.abs(a))))
    return Lemma1Result(abs(float(resid)), float(slack), defect <= tol * scale, defect)


# ----------------------------------------------------------------- lemmas 2, 3

def _offdiag_sq(block: np.ndarray) -> float:
    return float(np.sum(block ** 2) - np.sum(np.diagonal(block) ** 2))


def _sq(x: np.ndarray, axes: int):
    """Sum of squares over the trailing ``axes`` axes (keeps any batch axis)."""
    return np.sum(x ** 2, axis=tuple(range(-axes, 0)))


def _off(x: np.ndarray):
    """Sum of squared off-diagonal entries of the trailing square matrices."""
    return _sq(x, 2) - np.sum(np.diagonal(x, axis1=-2, axis2=-1) ** 2, axis=-1)


def _batch(h) -> np.ndarray:
    h = np.asarray(getattr(h, "h", h), dtype=float)
    if h.ndim == 2:
        h = h[None]
    if h.ndim < 3 or h.shape[-1] != h.shape[-2]:
        raise DimensionMismatch(f"coefficients must have shape (..., normals, n, n), got {h.shape}")
    return h


def lemma2_sides(h):
    """Both sides of the rearrangement that isolates the plane ``{0, 1}``.

    Accepts a leading batch axis, in which case both sides are arrays.
    """
    h = _batch(h)
    n = h.shape[-1]
    if n < 3:
        raise DimensionMismatch("the rearrangement needs n >= 3")
    h0, hr = h[..., 0, :, :], h[..., 1:, :, :]
    rest = slice(2, n)
    lhs = (0.5 * _off(h0)
           + 0.5 * _sq(hr, 3)
           + np.sum(hr[..., 0, 0] * hr[..., 1, 1], axis=-1)
           - np.sum(h[..., 0, 1] ** 2, axis=-1))
    rhs = (0.5 * _off(h0[..., rest, rest])
           + 0.5 * _sq(hr[..., rest, rest], 3)
           + 0.5 * np.sum((hr[..., 0, 0] + hr[..., 1, 1]) ** 2, axis=-1)
           + _sq(h[..., 0, rest], 2) + _sq(h[..., 1, rest], 2))
    return lhs, rhs


def lemma3_sides(h, n1: int):
    """Both sides of the rearrangement splitting ``{2 .. n-1}`` at ``n1``."""
    h = _batch(h)
    n = h.shape[-1]
    if n < 3 or not 2 <= n1 <= n:
        raise DimensionMismatch(f"need n >= 3 and 2 <= n1 <= n, got n={n}, n1={n1}")
    h0, hr = h[..., 0, :, :], h[..., 1:, :, :]
    rest = slice(2, n)
    a_ = slice(2, n1)
    A_ = slice(n1, n)
    lhs = (0.5 * _off(h0[..., rest, rest])
           + 0.5 * _sq(hr[..., rest, rest], 3)
           + _sq(h[..., 0, rest], 2) + _sq(h[..., 1, rest], 2))
    rhs = (0.5 * _off(h0[..., a_, a_])
           + 0.5 * _off(h0[..., A_, A_])
           + 0.5 * _sq(hr[..., a_, a_], 3)
           + 0.5 * _sq(hr[..., A_, A_], 3)
           + _sq(h[..., 0, a_], 2) + _sq(h[..., 1, a_], 2)
           + _sq(h[..., a_, A_], 3))
    # couplings of the plane to the other block
    rhs = rhs + _sq(h[..., 0, A_], 2) + _sq(h[..., 1, A_], 2)
    return lhs, rhs


def lemma_identity_residual(kind: str, h, n1: int | None = None) -> float:
    if kind == "lemma2":
        lhs, rhs = lemma2_sides(h)
    elif kind == "lemma3":
        if n1 is None:
            n1 = getattr(h, "n_T", None)
        if n1 is None:
            raise DimensionMismatch("lemma3 needs the block split n1")
        lhs, rhs = lemma3_sides(h, n1)
    else:
        raise ValueError(f"unknown lemma kind {kind!r}")
    res = np.abs(np.asarray(lhs) - np.asarray(rhs))
    return float(res) if res.ndim == 0 else res


# ------------------------------------------------------------ block geometry

def blocks(n1: int, n: int, version: str) -> tuple[slice, slice]:
    """(distinguished block, other block) for an inequality version."""
    if version == "i":
        return slice(0, n1), slice(n1, n)
    if version == "ii":
        return slice(n1, n), slice(0, n1)
    raise ValueError(f"version must be 'i' or 'ii', got {version!r}")


def move_plane_first(h: np.ndarray, n1: int, pi_star, version: str) -> tuple[np.ndarray, np.ndarray]:
    """Permute tangent indices so the plane indices ``pi_star`` occupy the
    first two slots of the distinguished block.  Returns the permuted
    coefficients and the permutation."""
    h = _as_h(h)
    n = h.shape[1]
    P, _ = blocks(n1, n, version)
    idx = list(range(P.start, P.stop))
    i, j = (int(k) for k in pi_star)
    if i == j or i not in idx or j not in idx:
        raise IndexError(f"plane indices {pi_star} must be two distinct slots of block "
                         f"[{P.start}, {P.stop})")
    rest = [k for k in idx if k not in (i, j)]
    order = list(range(0, P.start)) + [i, j] + rest + list(range(P.stop, n))
    perm = np.array(order)
    return h[:, perm][:, :, perm], perm


# ---------------------------------------------------------------- Theta, Upsilon

def theta_groups(h, n1: int, version: str = "i") -> dict[str, float]:
    """The non-negative groups of the remainder for the plane in slots
    ``{P0, P0+1}`` of the distinguished block.

    Version ``ii`` mirrors version ``i`` by exchanging the blocks.  The key
    ``mixed_r0_rest`` holds the coupling between the rest of the distinguished
    block and the other block along the distinguished normal; it belongs to
    the exact remainder although it is easy to lose in the bookkeeping.
    """
    h = _as_h(h)
    n = h.shape[1]
    P, Q = blocks(n1, n, version)
    k = P.stop - P.start
    if k < 2:
        raise DegenerateInput(f"the distinguished block needs dimension >= 2, got {k}")
    p0, p1 = P.start, P.start + 1
    rest = slice(P.start + 2, P.stop)
    others = [j for j in range(n) if j not in (p0, p1)]
    h0, hr = h[0], h[1:]
    SP0 = float(np.trace(h0[P, P]))
    SQ = np.einsum("rii->r", h[:, Q, Q])
    return {
        "trace_distinguished": SP0 ** 2 / (2.0 * (k - 1)),
        "trace_other": 0.5 * float(SQ @ SQ),
        "plane_trace": 0.5 * float(np.sum((hr[:, p0, p0] + hr[:, p1, p1]) ** 2)),
        "plane_coupling": float(np.sum(h[:, p0, others] ** 2 + h[:, p1, others] ** 2)),
        "rest_offdiag_r0": 0.5 * _offdiag_sq(h0[rest, rest]),
        "rest_block": 0.5 * float(np.sum(hr[:, rest, rest] ** 2)),
        "mixed_rest": float(np.sum(hr[:, rest, Q] ** 2)),
        "mixed_r0_rest": float(np.sum(h0[rest, Q] ** 2)),
    }


DISPLAYED_GROUPS = ("trace_distinguished", "trace_other", "plane_trace", "plane_coupling",
                    "rest_offdiag_r0", "rest_block", "mixed_rest")


def theta(h, n1: int, pi_star=(0, 1), version: str = "i", complete: bool = True) -> float:
    """Remainder Theta(h) for the plane with tangent indices ``pi_star``.

    With ``complete=False`` only the seven standard groups are
    summed (this drops ``mixed_r0_rest`` and is then not the exact remainder
    once the distinguished block has dimension >= 4).
    """
    hp, _ = move_plane_first(h, n1, pi_star, version)
    g = theta_groups(hp, n1, version)
    keys = g if complete else DISPLAYED_GROUPS
    return float(sum(g[k] for k in keys))


def exact_remainder(h, n1: int, version: str = "i") -> dict[str, float]:
    """Gauge-free form of the inequality slack for the plane in the first two
    slots of the distinguished block, by normal direction summed:

        1/2 (h00 + h11)^2 + sum_{j in P-rest} (h0j^2 + h1j^2)
        + 1/2 |h_{rest,rest}|^2 + |h_PQ|^2 + 1/2 (tr_Q h)^2

    This equals ``rhs - (tau_P - K(plane))`` minus the ambient term
    ``K~(plane) - K~_min``, without the pair-splitting bound.
    """
    h = _as_h(h)
    n = h.shape[1]
    P, Q = blocks(n1, n, version)
    p0, p1 = P.start, P.start + 1
    rest = slice(P.start + 2, P.stop)
    SQ = np.einsum("rii->r", h[:, Q, Q])
    parts = {
        "plane_trace": 0.5 * float(np.sum((h[:, p0, p0] + h[:, p1, p1]) ** 2)),
        "plane_coupling": float(np.sum(h[:, p0, rest] ** 2 + h[:, p1, rest] ** 2)),
        "rest_block": 0.5 * float(np.sum(h[:, rest, rest] ** 2)),
        "mixed": float(np.sum(h[:, P, Q] ** 2)),
        "trace_other": 0.5 * float(SQ @ SQ),
    }
    parts["total"] = float(sum(parts.values()))
    return parts


def upsilon(h, tau_M: float, n1: int, c: float, version: str = "i") -> float:
    """Auxiliary quadratic: 2 tau - (k-2)/(k-1) S_P^2 - S_Q^2 - 2 S_P S_Q
    - (c/4)[n(n-1) + 3 n1] along the distinguished normal, ``k = dim P``."""
    h = _as_h(h)
    n = h.shape[1]
    P, Q = blocks(n1, n, version)
    k = P.stop - P.start
    if k < 2:
        raise DegenerateInput(f"the distinguished block needs dimension >= 2, got {k}")
    SP = float(np.trace(h[0, P, P]))
    SQ = float(np.trace(h[0, Q, Q]))
    return (2.0 * tau_M - (k - 2) / (k - 1) * SP ** 2 - SQ ** 2 - 2.0 * SP * SQ
            - c / 4.0 * (n * (n - 1) + 3 * n1))


def upsilon1(h, tau_M: float, n1: int, n2: int, c: float) -> float:
    h = _as_h(h)
    if h.shape[1] != n1 + n2:
        raise DimensionMismatch(f"h has {h.shape[1]} tangent indices, blocks give {n1}+{n2}")
    if n1 < 2:
        raise DegenerateInput(f"needs n1 >= 2, got {n1}")
    return upsilon(h, tau_M, n1, c, "i")


def upsilon_closure_residual(h, ups: float, n1: int, version: str = "i") -> float:
    """| S_P^2 - (k-1)(Upsilon + |h|^2) | along the distinguished normal."""
    h = _as_h(h)
    P, _ = blocks(n1, h.shape[1], version)
    k = P.stop - P.start
    SP = float(np.trace(h[0, P, P]))
    return abs(SP ** 2 - (k - 1) * (ups + float(np.sum(h ** 2))))


def lemma1_from_upsilon(h, ups: float, n1: int, version: str = "i") -> Lemma1Result:
    """The pair-splitting bound (lemma1_check) applied to the diagonal of the
    distinguished block along the distinguished normal, beta taken from Upsilon."""
    h = _as_h(h)
    n = h.shape[1]
    P, Q = blocks(n1, n, version)
    h0 = h[0]
    alphas = np.diagonal(h0)[P]
    beta = (ups + float(np.sum(np.diagonal(h0)[Q] ** 2)) + _offdiag_sq(h0)
            + float(np.sum(h[1:] ** 2)))
    return lemma1_check(alphas, beta)
