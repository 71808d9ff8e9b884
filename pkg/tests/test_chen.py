import math
from fractions import Fraction

import numpy as np
import pytest

from builders import EQ_MU1, EQ_PLANE, equality_h, equality_scenario, sym_random
from crwarplab.ambient import AmbientModel
from crwarplab.chen import (
    SyntheticScenario,
    chen_original,
    coeff_identities,
    corollary_minimal_check,
    delta_invariant,
    equality_classify,
    evaluate_chart,
    evaluate_synthetic,
    fundamental_identity_residual,
    inequality_i,
    inequality_ii,
    lemma1_beta,
    lemma1_check,
    lemma_identity_residual,
    partial_scalar,
    real_form_chen,
    theta,
    theta_groups,
    tilde_tau_cr,
    upsilon1,
)
from crwarplab.chen.algebra import upsilon_closure_residual
from crwarplab.chen.report import synthetic_point_data
from crwarplab.errors import DegenerateInput, DimensionMismatch, GaugeError, ParityError
from crwarplab.immersion import gallery
from crwarplab.immersion.sff import ambient_sectional_oracle
from crwarplab.numeric import Frame, PlaneBudget
from crwarplab.numeric.frames import random_rotation
from crwarplab.warped import WarpData

FAST = PlaneBudget(samples=1024, refine_steps=100)


def minimal_gauge(h):
    """Make every normal but the first traceless, so e_{n+1} is parallel to H."""
    h = h.copy()
    n = h.shape[1]
    for r in range(1, h.shape[0]):
        h[r] -= np.trace(h[r]) / n * np.eye(n)
    return h


def tau_from_identity(h, n1, n2, c):
    n = n1 + n2
    H = np.einsum("rii->r", h) / n
    return 0.5 * (n * n * H @ H - np.sum(h ** 2) + c / 4 * (n * (n - 1) + 3 * n1))


# ---------------------------------------------------------------- partial scalar, delta

def test_partial_scalar_trivial_oracles():
    V = Frame(np.eye(5)[:4])
    assert partial_scalar(lambda p: 0.0, V) == 0.0
    assert partial_scalar(lambda p: 1.5, V) == 1.5 * 6
    with pytest.raises(DegenerateInput):
        partial_scalar(lambda p: 0.0, Frame(np.eye(3)[:1]))


def test_partial_scalar_of_the_ambient_on_a_cr_tangent_space():
    s = SyntheticScenario(2, 1, 4.0, np.zeros((1, 3, 3)))
    K = ambient_sectional_oracle(s.tangent(), AmbientModel(4.0, s.m))
    tau = partial_scalar(K, Frame(np.eye(3)))
    assert tau == pytest.approx(6.0, abs=1e-14)
    assert tau == float(tilde_tau_cr(2, 1, 4)[0])


def test_partial_scalar_basis_independence():
    s = SyntheticScenario(4, 2, -3.0, sym_random(np.random.default_rng(0), 2, 6))
    data = synthetic_point_data(s)
    from crwarplab.immersion.sff import sectional_oracle
    K = sectional_oracle(data.sff, data.tangent, data.model)
    rng = np.random.default_rng(1)
    base = partial_scalar(K, Frame(np.eye(6)))
    for _ in range(5):
        assert abs(partial_scalar(K, Frame(random_rotation(6, rng))) - base) < 1e-10


def test_delta_invariant():
    assert delta_invariant(lambda p: 3.0, Frame(np.eye(4)[:2]))[0] == 0.0
    d, _ = delta_invariant(lambda p: 0.7, Frame(np.eye(4)[:3]), FAST)
    assert d == pytest.approx(2 * 0.7)


def test_tilde_tau_cr():
    assert tilde_tau_cr(2, 1, 4) == (Fraction(6), Fraction(4), Fraction(0))
    assert tilde_tau_cr(4, 3, 0) == (0, 0, 0)
    total, nt, nperp = tilde_tau_cr(2, 2, 4)
    assert (nt, nperp) == (4, 1)
    assert isinstance(tilde_tau_cr(2, 2, 1.3)[0], float)
    with pytest.raises(ParityError):
        tilde_tau_cr(3, 1, 4)


# ---------------------------------------------------------------- identities and inequalities

def test_fundamental_identity_residual():
    assert fundamental_identity_residual(0.0, 0.0, 0.0, 2, 2, 0.0) == 0.0
    rng = np.random.default_rng(2)
    for _ in range(20):
        h = sym_random(rng, 3, 5)
        tau = tau_from_identity(h, 4, 1, 2.0)
        H = np.einsum("rii->r", h) / 5
        assert fundamental_identity_residual(tau, H @ H, np.sum(h ** 2), 4, 1, 2.0) < 1e-12


@pytest.mark.parametrize("pair,expected", [((2, 2), (16, 16, 10, 10)), ((4, 3), (48, 48, 30, 30)),
                                           ((2, 1), (12, 12, 4, 4))])
def test_coefficient_identities(pair, expected):
    assert coeff_identities(*pair) == expected


def test_coefficient_identity_errors():
    with pytest.raises(ParityError):
        coeff_identities(3, 2)
    with pytest.raises(DegenerateInput):
        coeff_identities(2, 0)


def test_inequality_arithmetic():
    assert inequality_i(0.0, 0.0, 0.0, 2, 2, 4.0, 1.0) == (0.0, 7.0, 7.0)
    lhs, rhs, slack, il, ir = inequality_ii(0.0, 0.0, 0.0, 2, 2, 4.0)
    assert (lhs, rhs, slack, il, ir) == (0.0, 4.0, 4.0, None, None)
    w = WarpData(2.0, 0.5, 0.0)
    _, r, _, il, ir = inequality_ii(0.1, 0.0, 0.0, 2, 3, 0.0, w, 1.0)
    assert ir == pytest.approx(4 * r + 2 * 0.5)
    with pytest.raises(DegenerateInput):
        inequality_i(0.0, 0.0, 0.0, 0, 2, 1.0, 0.0)
    with pytest.raises(DegenerateInput):
        inequality_ii(0.0, 0.0, 0.0, 2, 1, 1.0)


def test_synthetic_flat_data_sharp_and_uniform_kmin():
    # h = 0 and a constant warp: a single holomorphic plane has K~ = c
    s = SyntheticScenario(2, 2, 4.0, np.zeros((2, 4, 4)), WarpData(1.0, 0.0, 0.0))
    rep = evaluate_synthetic(s)
    assert rep.lhs_i == 0.0 and rep.lhs_ii == 0.0
    assert rep.rhs_i == pytest.approx(4.0)
    assert rep.details["rhs_i_uniform"] == pytest.approx(7.0)
    assert rep.rhs_ii == pytest.approx(4.0)


def test_classical_inequality():
    rho = 1.3
    lhs, rhs, slack = chen_original(3 / rho ** 2, 1 / rho ** 2, 3, 0.0, 1 / rho ** 2)
    assert lhs == pytest.approx(2 / rho ** 2) and rhs == pytest.approx(2.25 / rho ** 2)
    assert chen_original(0.0, 0.0, 3, 0.0, 0.0) == (0.0, 0.0, 0.0)
    with pytest.raises(DegenerateInput):
        chen_original(0.0, 0.0, 2, 0.0, 0.0)
    # sphere via its shape operator in a real space form
    h = np.eye(3)[None] / rho
    lhs, rhs, slack = real_form_chen(h, 0.0, FAST)
    assert slack == pytest.approx(0.25 / rho ** 2, abs=1e-12)
    assert real_form_chen(np.zeros((1, 3, 3)), 0.0, FAST) == (0.0, 0.0, 0.0)


# ---------------------------------------------------------------- lemmas

def test_lemma1_examples():
    r = lemma1_check([1, 1, 2], 2)
    assert r.slack == 0 and r.equality and r.constraint_residual == 0
    r = lemma1_check([1, 1, 1], 1.5)
    assert r.slack == 0.5 and not r.equality
    a = [0.3, -1.7]
    r = lemma1_check(a, lemma1_beta(a))
    assert abs(r.slack) < 1e-15 and r.equality
    assert lemma1_beta([1, 1, 2]) == 2.0


def test_lemma_identities_on_structured_input():
    assert lemma_identity_residual("lemma2", np.zeros((2, 5, 5))) == 0.0
    assert lemma_identity_residual("lemma3", np.zeros((2, 5, 5)), 3) == 0.0
    rng = np.random.default_rng(3)
    for _ in range(50):
        v, w = rng.normal(size=3), rng.normal(size=6)
        h = np.einsum("r,i,j->rij", v, w, w)
        assert lemma_identity_residual("lemma2", h) < 1e-12
        assert lemma_identity_residual("lemma3", h, 4) < 1e-12


def test_lemma_identities_random_and_batched():
    rng = np.random.default_rng(4)
    hs = np.array([sym_random(rng, 3, 6) for _ in range(1000)])
    res2 = lemma_identity_residual("lemma2", hs)
    res3 = lemma_identity_residual("lemma3", hs, 2)
    assert res2.shape == (1000,) and np.max(res2) < 1e-12 and np.max(res3) < 1e-12
    assert lemma_identity_residual("lemma2", hs[7]) == res2[7]


def test_lemma_identity_errors():
    with pytest.raises(DimensionMismatch):
        lemma_identity_residual("lemma2", np.zeros((1, 2, 2)))
    with pytest.raises(DimensionMismatch):
        lemma_identity_residual("lemma3", np.zeros((1, 4, 4)), 5)
    with pytest.raises(ValueError):
        lemma_identity_residual("lemma4", np.zeros((1, 4, 4)))


# ---------------------------------------------------------------- theta, upsilon

def test_theta_basic():
    assert theta(np.zeros((2, 5, 5)), 2) == 0.0
    assert theta(equality_h(), 4, EQ_PLANE) == 0.0
    assert theta(equality_h(), 4, (4, 5), version="ii") == 0.0
    with pytest.raises(IndexError):
        theta(np.zeros((1, 4, 4)), 2, (0, 2))


def test_theta_complete_versus_displayed_groups():
    rng = np.random.default_rng(5)
    h = sym_random(rng, 2, 6)
    g = theta_groups(h, 4)
    assert all(v >= 0 for v in g.values())
    assert theta(h, 4, complete=False) == pytest.approx(theta(h, 4) - g["mixed_r0_rest"])
    # the extra group is empty when the distinguished block is a single plane
    assert theta_groups(h, 2)["mixed_r0_rest"] == 0.0


def test_upsilon_closure():
    c, n1, n2 = 4.0, 4, 2
    tau0 = c / 8 * ((n1 + n2) * (n1 + n2 - 1) + 3 * n1)
    assert upsilon1(np.zeros((2, 6, 6)), tau0, n1, n2, c) == pytest.approx(0.0, abs=1e-14)
    rng = np.random.default_rng(6)
    for _ in range(100):
        h = minimal_gauge(sym_random(rng, 3, 6))
        tau = tau_from_identity(h, n1, n2, c)
        ups = upsilon1(h, tau, n1, n2, c)
        assert upsilon_closure_residual(h, ups, n1) < 1e-12 * max(1.0, np.sum(h ** 2))
    with pytest.raises(DegenerateInput):
        upsilon1(np.zeros((1, 3, 3)), 0.0, 0, 3, 1.0)


# ---------------------------------------------------------------- equality classification

def test_equality_zero():
    e = equality_classify(np.zeros((2, 4, 4)), (0, 1), "i", n1=2)
    assert e.is_equality and e.mu1 == 0.0 and e.violations == []


def test_equality_fixture():
    e = equality_classify(equality_h(), EQ_PLANE, "i", n1=4)
    assert e.is_equality
    assert abs(e.mu1 - EQ_MU1) < 1e-12
    assert e.mixed_tg and e.dt_minimal and e.dperp_minimal and e.lemma1_equality


def test_equality_perturbed_mixed_entry():
    h = equality_h()
    h[1, 1, 4] = h[1, 4, 1] = 1e-3
    e = equality_classify(h, EQ_PLANE, "i", n1=4)
    assert not e.is_equality and not e.mixed_tg
    name, mag = e.violations[0]
    assert name == "mixed block" and mag == pytest.approx(1e-3)


def test_equality_needs_a_normal():
    with pytest.raises(GaugeError):
        equality_classify(np.zeros((0, 4, 4)), (0, 1), "i", n1=2)


def test_equality_search_gauge_is_frame_independent():
    rng = np.random.default_rng(7)
    R = random_rotation(4, rng)
    h = np.einsum("sr,rij->sij", R, equality_h())
    e = equality_classify(h, EQ_PLANE, "i", n1=4)
    assert e.is_equality and e.gauge == "search"


def test_chen_c2_is_not_an_equality_point():
    e = gallery.get("chen_c2")
    rep = evaluate_chart(e.chart, e.point(r=1.0, theta=math.pi / 2, t=0.0))
    eq = rep.details["side_i"]["equality"]
    assert not eq["is_equality"]
    assert eq["violations"][0][0] == "mixed block"
    assert eq["violations"][0][1] == pytest.approx(1.0, abs=1e-12)


# ---------------------------------------------------------------- reports

def test_gallery_inequality_values():
    c2 = gallery.get("chen_c2")
    rep = evaluate_chart(c2.chart, c2.point(r=1.0))
    assert rep.lhs_i == pytest.approx(0.0, abs=1e-12)
    assert rep.rhs_i == pytest.approx(1.0, abs=1e-8)
    c3 = gallery.get("chen_c3")
    rep = evaluate_chart(c3.chart, c3.point(r=1.0))
    assert rep.lhs_ii == pytest.approx(0.0, abs=1e-8)
    assert rep.rhs_ii == pytest.approx(2.0, abs=1e-8)
    assert rep.delta_hat_Nperp == pytest.approx(0.0, abs=1e-8)
    assert rep.delta_Nperp_intrinsic == pytest.approx(0.0, abs=1e-8)
    pr = gallery.get("product")
    rep = evaluate_chart(pr.chart, pr.point())
    assert (rep.slack_i, rep.slack_ii) == (0.0, 0.0)
    assert rep.details["equality_i"] and rep.details["equality_ii"]


def test_corollaries():
    c2 = gallery.get("chen_c2")
    cor = evaluate_chart(c2.chart, c2.point(r=1.0)).details["corollary"]
    assert cor["cond_i"] == pytest.approx(-1.0, abs=1e-8) and cor["minimal"]
    c3 = gallery.get("chen_c3")
    cor = evaluate_chart(c3.chart, c3.point(r=1.0)).details["corollary"]
    assert cor["corollary_ii_sum"] == pytest.approx(-2.0, abs=1e-8)
    pr = gallery.get("product")
    rep = evaluate_chart(pr.chart, pr.point())
    cor = corollary_minimal_check(rep)
    assert cor["cond_i"] == 0.0 and cor["cond_ii"] == 0.0


def test_cone_is_reported_not_applicable():
    e = gallery.get("cone")
    rep = evaluate_chart(e.chart, e.point(), cr_warped=e.cr_warped)
    assert rep.status == "n/a" and rep.slack_i is None
    assert rep.details["warp_identity_residual"] < 1e-10


@pytest.mark.parametrize("seed", range(6))
def test_random_synthetic_slack_chain(seed):
    rng = np.random.default_rng(seed)
    n1, n2 = [(2, 2), (4, 2), (4, 3), (2, 3), (6, 2), (4, 4)][seed]
    normals = n2 + (n1 + n2 + n2) % 2 + 2 * int(rng.integers(0, 2))
    c = float(rng.choice([-4.0, 0.0, 2.0, 4.0]))
    s = SyntheticScenario(n1, n2, c, sym_random(rng, normals, n1 + n2, 0.7))
    rep = evaluate_synthetic(s, FAST, seed=seed)
    assert rep.status == "pass", rep.failures
    for v, slack in (("i", rep.slack_i), ("ii", rep.slack_ii)):
        side = rep.details[f"side_{v}"]
        assert slack >= side["theta"] - 1e-8
        assert abs(side["chain_residual"]) < 1e-8 * max(1.0, abs(slack))
        assert abs(slack - (side["exact_remainder"] + side["kmin_gap"])) < 1e-8 * max(1.0, abs(slack))
        assert side["upsilon_closure_residual"] < 1e-10 * max(1.0, rep.h_norm_sq)


def test_synthetic_equality_implies_small_slack_and_minimality():
    rep = evaluate_synthetic(equality_scenario(), FAST)
    assert rep.details["equality_i"] and rep.details["equality_ii"]
    assert abs(rep.slack_i) < 1e-7 and abs(rep.slack_ii) < 1e-7
    assert rep.H_norm_sq < 1e-8


def test_synthetic_validation():
    with pytest.raises(ParityError):
        SyntheticScenario(3, 2, 1.0, np.zeros((3, 5, 5)))
    with pytest.raises(DimensionMismatch):
        SyntheticScenario(2, 2, 1.0, np.zeros((1, 4, 4)))
    h = np.zeros((2, 4, 4))
    h[0, 0, 1] = 1.0
    with pytest.raises(DimensionMismatch):
        SyntheticScenario(2, 2, 1.0, h)
