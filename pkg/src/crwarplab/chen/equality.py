"""Classification of the equality case: canonical block shape of h."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from crwarplab.chen.algebra import _as_h, blocks, move_plane_first
from crwarplab.errors import GaugeError
from crwarplab.numeric.frames import orthonormal_complement
from crwarplab.tolerances import DEFAULT, Tolerances

GAUGE_ITERATIONS = 500


@dataclass
class EqualityClassification:
    is_equality: bool
    mixed_tg: bool
    dt_minimal: bool
    dperp_minimal: bool
    lemma1_equality: bool
    mu1: float
    violations: list[tuple[str, float]] = field(default_factory=list)
    version: str = "i"
    gauge: str = "H"
    gauge_score: float = 0.0
    gauge_iterations: int = 0

    def as_dict(self) -> dict:
        return {
            "is_equality": self.is_equality, "mixed_tg": self.mixed_tg,
            "dt_minimal": self.dt_minimal, "dperp_minimal": self.dperp_minimal,
            "lemma1_equality": self.lemma1_equality, "mu1": self.mu1,
            "violations": [[k, v] for k, v in self.violations],
            "version": self.version, "gauge": self.gauge,
            "gauge_score": self.gauge_score, "gauge_iterations": self.gauge_iterations,
        }


def _norm_over_r(x: np.ndarray) -> float:
    return float(np.sqrt(np.sum(x * x)))


def _conditions(h: np.ndarray, n1: int, version: str) -> dict[str, float]:
    """Violation magnitudes for h whose plane sits first in its block."""
    n = h.shape[1]
    P, Q = blocks(n1, n, version)
    p0, p1 = P.start, P.start + 1
    rest = list(range(P.start + 2, P.stop))
    label = "D_T" if version == "i" else "D_perp"
    out: dict[str, float] = {}
    mixed = h[:, :n1, n1:]
    out["mixed block"] = float(np.max(np.linalg.norm(mixed, axis=0))) if mixed.size else 0.0
    out["pi* trace"] = _norm_over_r(h[:, p0, p0] + h[:, p1, p1])
    if rest:
        cpl = np.sqrt(h[:, p0, rest] ** 2 + h[:, p1, rest] ** 2)
        out["pi* coupling"] = float(np.max(np.linalg.norm(cpl, axis=0)))
        out[f"{label} remainder"] = float(np.max(np.linalg.norm(h[:, rest][:, :, rest], axis=0)))
        alphas = np.diagonal(h[0])[P]
        out["lemma1"] = float(np.max(np.abs(alphas[2:] - alphas[0] - alphas[1])))
    else:
        out["pi* coupling"] = 0.0
        out[f"{label} remainder"] = 0.0
        out["lemma1"] = 0.0
    out["D_T trace"] = _norm_over_r(np.einsum("rii->r", h[:, :n1, :n1]))
    out["D_perp trace"] = _norm_over_r(np.einsum("rii->r", h[:, n1:, n1:]))
    return out


def _score(h, n1, version) -> float:
    return float(sum(v * v for v in _conditions(h, n1, version).values()))


def _rotate_pair(h: np.ndarray, s: int, angle: float) -> np.ndarray:
    c, t = np.cos(angle), np.sin(angle)
    out = h.copy()
    out[0] = c * h[0] + t * h[s]
    out[s] = -t * h[0] + c * h[s]
    return out


def normal_gauge(h: np.ndarray, n1: int, version: str, tol: float) -> tuple[np.ndarray, str, float, int]:
    """Rotate the normal frame so the distinguished normal is parallel to H,
    or, when H vanishes, search pairwise rotations for the frame in which the
    canonical form is best satisfied (starting from the given frame)."""
    R = h.shape[0]
    if R == 0:
        raise GaugeError("no normal directions: the distinguished normal cannot be chosen")
    n = h.shape[1]
    H = np.einsum("rii->r", h) / n
    nh = float(np.linalg.norm(H))
    if nh >= tol:
        e = H / nh
        rot = np.vstack([e, orthonormal_complement(e[None], R)])
        return np.einsum("sr,rij->sij", rot, h), "H", _score(h, n1, version), 0
    score = _score(h, n1, version)
    it = 0
    while it < GAUGE_ITERATIONS and score > tol * tol and R > 1:
        improved = False
        for s in range(1, R):
            res = minimize_scalar(lambda a: _score(_rotate_pair(h, s, a), n1, version),
                                  bounds=(-np.pi / 2, np.pi / 2), method="bounded",
                                  options={"xatol": 1e-12})
            it += 1
            if res.fun < score - 1e-15:
                h = _rotate_pair(h, s, res.x)
                score = float(res.fun)
                improved = True
            if it >= GAUGE_ITERATIONS:
                break
        if not improved:
            break
    return h, "search", score, it


def equality_classify(h, pi_star=(0, 1), version: str = "i", n1: int | None = None,
                      kmin_gap: float | None = None, tol: Tolerances = DEFAULT) -> EqualityClassification:
    """Check the canonical equality shape of ``h`` for the plane ``pi_star``.

    ``kmin_gap`` is K~(pi*) - K~_min when known; a gap above ``tol.opt`` is
    reported as the violation ``E1`` (the ambient infimum is not attained at
    the minimizing plane).
    """
    if n1 is None:
        n1 = getattr(h, "n_T", None)
        if n1 is None:
            raise ValueError("block split n1 required for raw coefficient arrays")
    arr = _as_h(h)
    hp, _ = move_plane_first(arr, n1, pi_star, version)
    hg, gauge, gscore, iters = normal_gauge(hp, n1, version, tol.identity)
    cond = _conditions(hg, n1, version)
    if kmin_gap is not None:
        cond["E1"] = max(0.0, float(kmin_gap)) if kmin_gap > tol.opt else 0.0
    bad = sorted(((k, v) for k, v in cond.items() if v > tol.identity), key=lambda kv: (-kv[1], kv[0]))
    P, _ = blocks(n1, arr.shape[1], version)
    return EqualityClassification(
        is_equality=not bad,
        mixed_tg=cond["mixed block"] <= tol.identity,
        dt_minimal=cond["D_T trace"] <= tol.identity,
        dperp_minimal=cond["D_perp trace"] <= tol.identity,
        lemma1_equality=cond["lemma1"] <= tol.identity,
        mu1=float(hg[0, P.start, P.start]),
        violations=bad, version=version, gauge=gauge,
        gauge_score=gscore, gauge_iterations=iters,
    )
