"""Pointwise evaluation of every invariant into one report record.

Two front ends feed the same evaluator: an immersion chart (frame, h and
warp data computed from jets) and a synthetic scenario (h given directly in
a canonical adapted frame of C^m).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from crwarplab.ambient import J_INVARIANT, AmbientModel, classify_subspace, csf_sectional, kmin_closed_form
from crwarplab.chen import algebra
from crwarplab.chen.equality import equality_classify
from crwarplab.chen.invariants import (
    corollary_bounds,
    delta_invariant,
    fundamental_identity_residual,
    inequality_i,
    inequality_ii,
    rhs_i,
)
from crwarplab.errors import DimensionMismatch, ParityError
from crwarplab.immersion.adapt import adapt_frame
from crwarplab.immersion.chart import ImmersionChart
from crwarplab.immersion.intrinsic import (
    factor_sectional_extrema,
    intrinsic_sectional_matrix,
    metric_jet,
)
from crwarplab.immersion.sff import (
    SecondFundamentalForm,
    gauss_sectional_matrix,
    mean_curvature,
    ricci_form,
    second_fundamental_form,
    sectional_oracle,
)
from crwarplab.numeric import DEFAULT_BUDGET, Frame, PlaneBudget, PlaneSpec, min_over_planes
from crwarplab.numeric.frames import gram_schmidt, orthonormal_complement
from crwarplab.tolerances import DEFAULT, Tolerances
from crwarplab.warped import (
    WarpData,
    bo_delta_transfer,
    bo_fiber_sectional,
    christoffel_from_metric,
    constant_curvature_delta,
    grad_laplacian,
)

VERSION_TAGS = {
    "i": "holomorphic factor: delta^(T N_T) <= n^2/2 |H|^2 - n2 Lap f/f + n1(n1+2n2+2)/2 c/4 - K~min(T N_T)",
    "ii": "totally real factor: delta^(T N_perp) <= n^2/2 |H|^2 - n2 Lap f/f + n2(n2+2n1-1)/2 c/4 - c/4",
    "theta_ii": "mirrored (blocks exchanged)",
}


@dataclass
class PointData:
    """Everything the evaluator needs at one point."""

    sff: SecondFundamentalForm
    tangent: np.ndarray                  # (n, 2m) ambient coordinates of the tangent frame
    model: AmbientModel
    warp: WarpData | None = None
    mixed_sum: float | None = None       # from a base/fiber frame when it differs from the CR one
    delta_NT: float | None = None        # intrinsic factor invariants when known
    delta_Nperp: float | None = None
    fiber_curvature: float | None = None
    applicable: bool = True
    synthetic: bool = False
    notes: list[str] = field(default_factory=list)
    extra: dict = field(default_factory=dict)


@dataclass
class InvariantReport:
    n1: int
    n2: int
    n: int
    c: float
    tau_M: float
    tau_NT: float | None
    tau_Nperp: float | None
    delta_hat_NT: float | None
    delta_hat_Nperp: float | None
    delta_NT_intrinsic: float | None
    delta_Nperp_intrinsic: float | None
    H_norm_sq: float
    h_norm_sq: float
    warp_term: float | None
    kmin_NT: float | None
    kmin_Nperp: float | None
    lhs_i: float | None
    rhs_i: float | None
    slack_i: float | None
    lhs_ii: float | None
    rhs_ii: float | None
    slack_ii: float | None
    theta: float | None
    upsilon1: float | None
    details: dict = field(default_factory=dict)
    status: str = "pass"
    failures: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        out = {k: getattr(self, k) for k in self.__dataclass_fields__ if k != "details"}
        out.update(self.details)
        return _plain(out)


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, (np.floating, float)):
        v = float(x)
        return v if np.isfinite(v) else repr(v)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


# ------------------------------------------------------------------ helpers

def _block_rotation(n: int, block: slice, plane: PlaneSpec) -> np.ndarray:
    """Tangent rotation whose first two rows inside ``block`` span ``plane``."""
    R = np.eye(n)
    k = block.stop - block.start
    u, v = plane.u[block], plane.v[block]
    rows = np.vstack([u, v])
    if k > 2:
        rows = np.vstack([rows, orthonormal_complement(rows, k)])
    R[block, block] = rows
    return R


def _h_gauge(h: np.ndarray, tol: float) -> np.ndarray:
    """Normal rotation making the first normal parallel to H (identity when H ~ 0)."""
    R = h.shape[0]
    H = np.einsum("rii->r", h) / h.shape[1]
    nh = float(np.linalg.norm(H))
    if R == 0 or nh < tol:
        return h
    rot = np.vstack([H / nh, orthonormal_complement((H / nh)[None], R)])
    return np.einsum("sr,rij->sij", rot, h)


def _kmin(V_ambient: np.ndarray, model: AmbientModel, seed: int, budget: PlaneBudget):
    """(sharp kmin, uniform kmin, provenance, class tag)."""
    V = Frame(V_ambient)
    cls = classify_subspace(V, model)
    val = kmin_closed_form(V, model)
    if val is not None:
        uniform = model.kmin if cls.tag == J_INVARIANT else val
        return val, uniform, "closed-form", cls.tag
    val, _ = min_over_planes(lambda p: csf_sectional(p, model), V, budget, seed)
    return val, val, "sampled", cls.tag


def _side(version: str, data: PointData, K, Kt, budget, seed, tol: Tolerances,
          tau_M: float, kmin: float) -> dict:
    """Leaf-wise invariant, its minimizing plane, the replayed slack chain and
    the equality classification for one factor."""
    sff = data.sff
    n, n1 = sff.n, sff.n_T
    P, _ = algebra.blocks(n1, n, version)
    Vb = Frame(np.eye(n)[P])
    delta_hat, plane = delta_invariant(K, Vb, budget, seed)
    kplane = Kt(plane)
    rot = _block_rotation(n, P, plane)
    h_rot = sff.rotated(rot).h
    hg = _h_gauge(h_rot, tol.identity)
    groups = algebra.theta_groups(hg, n1, version)
    th = float(sum(groups.values()))
    th_disp = float(sum(groups[k] for k in algebra.DISPLAYED_GROUPS))
    ups = algebra.upsilon(hg, tau_M, n1, data.model.c, version)
    closure = algebra.upsilon_closure_residual(hg, ups, n1, version)
    l1 = algebra.lemma1_from_upsilon(hg, ups, n1, version)
    exact = algebra.exact_remainder(hg, n1, version)
    eq = equality_classify(hg, (P.start, P.start + 1), version, n1=n1,
                           kmin_gap=kplane - kmin, tol=tol)
    return {
        "delta_hat": delta_hat,
        "pi_star": [plane.u.tolist(), plane.v.tolist()],
        "K_pi_star": K(plane),
        "ambient_K_pi_star": kplane,
        "kmin_gap": kplane - kmin,
        "theta": th,
        "theta_displayed": th_disp,
        "theta_groups": groups,
        "upsilon": ups,
        "upsilon_closure_residual": closure,
        "lemma1_slack": 0.5 * l1.slack,
        "lemma1_constraint_residual": l1.constraint_residual,
        "lemma1_equality": l1.equality,
        "exact_remainder": exact["total"],
        "equality": eq.as_dict(),
        "_eq": eq,
    }


# ---------------------------------------------------------------- evaluator

def evaluate_point(data: PointData, budget: PlaneBudget = DEFAULT_BUDGET, seed: int = 0,
                   tol: Tolerances = DEFAULT) -> InvariantReport:
    sff = data.sff
    model = data.model
    c = model.c
    n1, n2, n = sff.n_T, sff.n_perp, sff.n
    T, Pp = sff.T, sff.P

    Kmat = gauss_sectional_matrix(sff, data.tangent, model)
    iu = np.triu_indices(n, 1)
    tau_M = float(Kmat[iu].sum())
    tau_NT = float(np.triu(Kmat[T, T], 1).sum()) if n1 >= 2 else None
    tau_Nperp = float(np.triu(Kmat[Pp, Pp], 1).sum()) if n2 >= 2 else None
    _, H2 = mean_curvature(sff)
    h2 = sff.norm_sq

    mixed = data.mixed_sum if data.mixed_sum is not None else float(Kmat[T, Pp].sum())
    d: dict = {"notes": list(data.notes), "mixed_sum": mixed, "applicable": data.applicable}
    d.update(data.extra)
    if data.warp is not None:
        warp_term = n2 * data.warp.laplacian_over_f
        d["warp_source"] = "warping function"
        d["warp_identity_residual"] = abs(mixed - warp_term)
        d["f"] = data.warp.f
        d["grad_norm_sq"] = data.warp.grad_norm_sq
        d["laplacian_over_f"] = data.warp.laplacian_over_f
    else:
        warp_term = mixed
        d["warp_source"] = "mixed sectional curvatures"
        d["warp_identity_residual"] = None
    realizable = True
    if data.synthetic and (d["warp_identity_residual"] or 0.0) > tol.identity:
        realizable = False
        d["notes"].append("supplied warp data disagree with the mixed curvatures: "
                          "slack checks are advisory")
    d["realizable"] = realizable
    d["fundamental_residual"] = fundamental_identity_residual(tau_M, H2, h2, n1, n2, c)
    d["laplacian_sign"] = "geometer (Delta = -div grad)"
    d["tags"] = dict(VERSION_TAGS)

    K = sectional_oracle(sff, data.tangent, model)
    E = np.asarray(data.tangent)

    def Kt(p: PlaneSpec) -> float:
        return csf_sectional(PlaneSpec(E.T @ p.u, E.T @ p.v), model)

    rep = InvariantReport(n1, n2, n, c, tau_M, tau_NT, tau_Nperp, None, None, None, None,
                          H2, h2, warp_term, None, None, None, None, None, None, None, None,
                          None, None, d)
    if not data.applicable:
        rep.failures = _failures(rep, tol)
        rep.status = "fail" if rep.failures else "n/a"
        return rep

    # ---- version (i)
    if n1 >= 2:
        kmin, kuni, prov, tag = _kmin(E[T], model, seed, budget)
        rep.kmin_NT = kmin
        d["kmin_NT_provenance"] = prov
        d["kmin_NT_uniform"] = kuni
        d["NT_class"] = tag
        s = _side("i", data, K, Kt, budget, seed, tol, tau_M, kmin)
        eq = s.pop("_eq")
        rep.delta_hat_NT = s["delta_hat"]
        rep.lhs_i, rep.rhs_i, rep.slack_i = inequality_i(s["delta_hat"], H2, warp_term, n1, n2, c, kmin)
        d["rhs_i_uniform"] = rhs_i(H2, warp_term, n1, n2, c, kuni)
        d["slack_i_uniform"] = d["rhs_i_uniform"] - rep.lhs_i
        rep.theta = s["theta"]
        rep.upsilon1 = s["upsilon"]
        s["chain_residual"] = rep.slack_i - (s["theta"] + s["lemma1_slack"] + s["kmin_gap"])
        d["side_i"] = s
        d["equality_i"] = eq.is_equality
        if data.delta_NT is not None:
            rep.delta_NT_intrinsic = data.delta_NT
            d["delta_NT_provenance"] = "intrinsic"
            d["delta_NT_agreement"] = abs(data.delta_NT - rep.delta_hat_NT)
        else:
            rep.delta_NT_intrinsic = rep.delta_hat_NT
            d["delta_NT_provenance"] = "leaf-wise (holomorphic factor is totally geodesic)"
    else:
        d["notes"].append("holomorphic inequality needs n1 >= 2")

    # ---- version (ii)
    if n2 >= 2:
        kmin2, _, prov2, tag2 = _kmin(E[Pp], model, seed, budget)
        rep.kmin_Nperp = kmin2
        d["kmin_Nperp_provenance"] = prov2
        d["Nperp_class"] = tag2
        s = _side("ii", data, K, Kt, budget, seed, tol, tau_M, c / 4.0)
        eq = s.pop("_eq")
        rep.delta_hat_Nperp = s["delta_hat"]
        dN = data.delta_Nperp
        if dN is None and data.warp is not None and data.fiber_curvature is not None:
            dN = constant_curvature_delta(data.fiber_curvature, n2)
        lhs, r, sl, ilhs, irhs = inequality_ii(s["delta_hat"], H2, warp_term, n1, n2, c, data.warp, dN)
        rep.lhs_ii, rep.rhs_ii, rep.slack_ii = lhs, r, sl
        rep.delta_Nperp_intrinsic = dN
        s["chain_residual"] = sl - (s["theta"] + s["lemma1_slack"] + s["kmin_gap"])
        d["theta_prime"] = s["theta"]
        d["upsilon2"] = s["upsilon"]
        d["side_ii"] = s
        d["equality_ii"] = eq.is_equality
        d["lhs_ii_intrinsic"] = ilhs
        d["rhs_ii_intrinsic"] = irhs
        if ilhs is not None:
            d["slack_ii_intrinsic"] = irhs - ilhs
            d["transfer_residual"] = abs((irhs - ilhs) - data.warp.f ** 2 * sl)
            d["delta_hat_Nperp_transfer"] = bo_delta_transfer(dN, data.warp, n2)
        if data.warp is not None and data.fiber_curvature is not None:
            d["fiber_plane_K_gauss"] = float(Kmat[n1, n1 + 1])
            d["fiber_plane_K_bo"] = bo_fiber_sectional(data.warp, data.fiber_curvature)
    else:
        d["notes"].append("totally real inequality needs n2 >= 2")

    d["corollary"] = corollary_minimal_check(rep, data)
    rep.failures = _failures(rep, tol)
    rep.status = _status(rep, tol)
    return rep


def corollary_minimal_check(rep: InvariantReport, data: PointData | None = None) -> dict:
    """Minimal-immersion conditions: each value must be <= 0 (up to tolerance)."""
    out: dict = {"minimal": rep.H_norm_sq < DEFAULT.identity}
    if not out["minimal"]:
        out["warning"] = "not minimal at this point; values shown for reference only"
    W = rep.warp_term
    kmin = rep.kmin_NT if rep.kmin_NT is not None else 0.0
    b_i, b_ii = corollary_bounds(rep.n1, rep.n2, rep.c, kmin)
    out["cond_i"] = out["corollary_i_sum"] = None
    if rep.delta_NT_intrinsic is not None and W is not None:
        out["corollary_i_sum"] = rep.delta_NT_intrinsic + W
        out["cond_i"] = out["corollary_i_sum"] - b_i
    out["cond_ii"] = out["corollary_ii_sum"] = out["cond_ii_intrinsic"] = None
    if rep.delta_hat_Nperp is not None and W is not None:
        out["corollary_ii_sum"] = rep.delta_hat_Nperp + W
        out["cond_ii"] = out["corollary_ii_sum"] - b_ii
    warp = data.warp if data is not None else None
    if rep.delta_Nperp_intrinsic is not None and warp is not None:
        f2 = warp.f ** 2
        out["cond_ii_intrinsic"] = (rep.delta_Nperp_intrinsic + f2 * W
                                    - (f2 * b_ii + (comb(rep.n2, 2) - 1) * warp.grad_norm_sq))
    out["ricci_max_eig"] = None
    if data is not None and data.model.c == 0.0:
        ric = ricci_form(data.sff, data.tangent, data.model)
        out["ricci_max_eig"] = float(np.linalg.eigvalsh(ric)[-1])
    return out


def _failures(rep: InvariantReport, tol: Tolerances) -> list[str]:
    d = rep.details
    bad = []
    if d["fundamental_residual"] > tol.identity:
        bad.append("fundamental identity")
    wr = d.get("warp_identity_residual")
    if wr is not None and wr > tol.identity and d["realizable"]:
        bad.append("warp identity")
    for v in ("i", "ii"):
        s = d.get(f"side_{v}")
        if s is None:
            continue
        if s["theta"] < -tol.exact:
            bad.append(f"theta_{v}")
        if not d["realizable"]:
            continue
        slack = rep.slack_i if v == "i" else rep.slack_ii
        if slack < -tol.identity:
            bad.append(f"slack_{v}")
        if abs(s["chain_residual"]) > tol.identity * max(1.0, abs(slack)):
            bad.append(f"slack chain {v}")
    tr = d.get("transfer_residual")
    if tr is not None and tr > tol.identity:
        bad.append("intrinsic transfer")
    return bad


def _status(rep: InvariantReport, tol: Tolerances) -> str:
    if rep.failures:
        return "fail"
    slacks = [s for s in (rep.slack_i, rep.slack_ii) if s is not None]
    if any(s < 0 for s in slacks):
        return "boundary"
    return "pass"


# ------------------------------------------------------------ chart front end

def _frame_h(jet, rows: np.ndarray, normals: np.ndarray) -> np.ndarray:
    C = np.linalg.lstsq(jet.jacobian, rows.T, rcond=None)[0].T
    S = np.einsum("rq,qkl->rkl", normals, jet.hessians)
    return np.einsum("ik,rkl,jl->rij", C, S, C)


def chart_point_data(chart: ImmersionChart, point, tol: Tolerances = DEFAULT,
                     cr_warped: bool = True) -> PointData:
    p = np.asarray(point, dtype=float)
    fr = adapt_frame(chart, p, tol.frame)
    sff = second_fundamental_form(chart, p, fr)
    model = chart.ambient
    b, k2 = chart.base_dim, chart.fiber_dim
    notes = list(fr.notes)
    applicable = bool(cr_warped and fr.warped_compatible and fr.n_T == b)
    if not applicable:
        notes.append("not a CR-warped product at this point: inequalities not applicable")

    # warping function on the base, with the base metric's own connection
    warp = None
    if chart.warp is not None:
        g, dg = metric_jet(chart, p)
        bi = list(range(b))
        gb = g[np.ix_(bi, bi)]
        Gb = christoffel_from_metric(gb, dg[np.ix_(bi, bi, bi)])
        warp = grad_laplacian(chart.warp, p[:b], gb, Gb)

    # mixed curvatures in a base/fiber orthonormal frame (independent of the CR split)
    jet = fr.jet
    bf = gram_schmidt(jet.jacobian.T).vectors
    hbf = _frame_h(jet, bf, fr.normal)
    Kbf = gauss_sectional_matrix(SecondFundamentalForm(hbf, b, k2), bf, model)
    mixed = float(Kbf[:b, b:].sum())

    # intrinsic factor invariants from the metric alone
    extra: dict = {"point": p.tolist(), "frame_residuals": fr.residuals,
                   "cr_split": list(fr.frame.split)}
    dNT = dNp = None
    if b >= 2:
        tb, kb, _ = factor_sectional_extrema(chart, p, range(b))
        dNT = tb - kb
    if k2 >= 2 and warp is not None:
        tf, kf, _ = factor_sectional_extrema(chart, p, range(b, b + k2))
        dNp = warp.f ** 2 * (tf - kf)
        if chart.fiber_curvature is not None:
            extra["delta_Nperp_closed_form"] = constant_curvature_delta(chart.fiber_curvature, k2)
    Ki = intrinsic_sectional_matrix(chart, p, fr.coord_map)
    Kg = gauss_sectional_matrix(sff, fr.tangent, model)
    extra["gauss_vs_intrinsic"] = float(np.max(np.abs(Ki - Kg)))
    return PointData(sff, fr.tangent, model, warp, mixed, dNT, dNp, chart.fiber_curvature,
                     applicable, False, notes, extra)


def evaluate_chart(chart: ImmersionChart, point, budget: PlaneBudget = DEFAULT_BUDGET,
                   seed: int = 0, tol: Tolerances = DEFAULT, cr_warped: bool = True) -> InvariantReport:
    return evaluate_point(chart_point_data(chart, point, tol, cr_warped), budget, seed, tol)


# -------------------------------------------------------- synthetic front end

@dataclass
class SyntheticScenario:
    """h given in the canonical adapted frame of C^m: the holomorphic block
    occupies complex slots ``0 .. n1/2-1`` (x and y parts), the totally real
    block the x parts of the next ``n2`` slots, and the normals are J of the
    totally real block followed by the remaining directions."""

    n1: int
    n2: int
    c: float
    h: np.ndarray
    warp: WarpData | None = None
    delta_NT: float | None = None
    delta_Nperp: float | None = None
    fiber_curvature: float | None = None

    def __post_init__(self):
        if self.n1 % 2 or self.n1 < 0:
            raise ParityError(f"holomorphic dimension must be even, got {self.n1}")
        h = np.asarray(self.h, dtype=float)
        if h.ndim == 2:
            h = h[None]
        n = self.n1 + self.n2
        if h.ndim != 3 or h.shape[1:] != (n, n):
            raise DimensionMismatch(f"h must have shape (normals, {n}, {n}), got {h.shape}")
        if h.shape[0] < self.n2 or (n + h.shape[0]) % 2:
            raise DimensionMismatch(f"{h.shape[0]} normals cannot hold J of a {self.n2}-dim "
                                    f"totally real block inside C^m")
        if not np.allclose(h, np.swapaxes(h, 1, 2), atol=1e-12, rtol=0):
            raise DimensionMismatch("h must be symmetric in its tangent indices")
        self.h = h

    @property
    def m(self) -> int:
        return (self.n1 + self.n2 + self.h.shape[0]) // 2

    def tangent(self) -> np.ndarray:
        E = np.zeros((self.n1 + self.n2, 2 * self.m))
        for k in range(self.n1):
            E[k, k] = 1.0
        for j in range(self.n2):
            E[self.n1 + j, self.n1 + 2 * j] = 1.0
        return E


def synthetic_point_data(s: SyntheticScenario) -> PointData:
    sff = SecondFundamentalForm(s.h, s.n1, s.n2)
    return PointData(sff, s.tangent(), AmbientModel(s.c, s.m), s.warp, None, s.delta_NT,
                     s.delta_Nperp, s.fiber_curvature, True, True,
                     ["synthetic: pointwise algebra only, realizability not checked"])


def evaluate_synthetic(s: SyntheticScenario, budget: PlaneBudget = DEFAULT_BUDGET, seed: int = 0,
                       tol: Tolerances = DEFAULT) -> InvariantReport:
    return evaluate_point(synthetic_point_data(s), budget, seed, tol)

