"""Property tests for the invariants the library promises on arbitrary input."""
import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from builders import equality_h
from crwarplab.ambient import AmbientModel, csf_curvature, csf_sectional, kmin_closed_form
from crwarplab.chen import (
    SyntheticScenario,
    equality_classify,
    evaluate_synthetic,
    lemma1_beta,
    lemma1_check,
    lemma_identity_residual,
    theta,
    theta_groups,
)
from crwarplab.numeric import Frame, PlaneBudget, PlaneSpec, min_over_planes
from crwarplab.warped import WarpData, bo_delta_transfer, bo_delta_transfer_inverse, bo_fiber_sectional

FAST = PlaneBudget(samples=512, refine_steps=60)
PROFILES = [(2, 1), (2, 2), (4, 2), (4, 3)]

finite = st.floats(-5, 5, allow_nan=False, allow_infinity=False)
curv_c = st.floats(-8, 8, allow_nan=False).filter(lambda c: abs(c) > 1e-3)


@st.composite
def sff(draw, n=None, normals=None, scale=3.0):
    n = n or draw(st.integers(2, 7))
    normals = normals if normals is not None else draw(st.integers(1, 4))
    a = draw(arrays(np.float64, (normals, n, n), elements=st.floats(-scale, scale, allow_nan=False)))
    return 0.5 * (a + np.swapaxes(a, 1, 2))


def seeds():
    return st.integers(0, 2 ** 32 - 1)


# ---------------------------------------------------------------- ambient

@settings(max_examples=200, deadline=None)
@given(curv_c, st.integers(2, 4), seeds())
def test_sectional_curvature_bounds(c, m, seed):
    rng = np.random.default_rng(seed)
    p = PlaneSpec.from_pair(*rng.normal(size=(2, 2 * m)))
    k = csf_sectional(p, AmbientModel(c, m))
    assert min(c / 4, c) - 1e-12 <= k <= max(c / 4, c) + 1e-12


@settings(max_examples=200, deadline=None)
@given(curv_c, seeds())
def test_curvature_symmetries(c, seed):
    m = AmbientModel(c, 3)
    X, Y, Z, W = np.random.default_rng(seed).normal(size=(4, 6))
    R = csf_curvature(X, Y, Z, W, m)
    scale = max(1.0, abs(c)) * 1e-12 * 50
    assert abs(R + csf_curvature(Y, X, Z, W, m)) < scale
    assert abs(R - csf_curvature(Z, W, X, Y, m)) < scale


@settings(max_examples=25, deadline=None)
@given(curv_c, st.sampled_from([(0, 1, 2, 3), (0, 2, 4), (0, 1), (0, 2, 4, 5)]), seeds())
def test_closed_form_kmin_matches_sampling(c, idx, seed):
    m = AmbientModel(c, 3)
    V = Frame(np.eye(6)[list(idx)])
    closed = kmin_closed_form(V, m)
    if closed is None:
        return
    val, _ = min_over_planes(lambda p: csf_sectional(p, m), V, seed=seed % 1000)
    assert abs(val - closed) < 1e-6 * max(1.0, abs(c))


@settings(max_examples=100, deadline=None)
@given(seeds())
def test_two_dimensional_minimum_is_the_plane_itself(seed):
    rng = np.random.default_rng(seed)
    V = Frame(np.linalg.qr(rng.normal(size=(5, 2)))[0].T)
    A = rng.normal(size=(5, 5))
    fn = lambda p: float(p.u @ A @ p.v + p.v @ A @ p.v)
    val, _ = min_over_planes(fn, V, FAST, seed=0)
    assert val == fn(PlaneSpec(V.vectors[0], V.vectors[1]))


# ---------------------------------------------------------------- warped

@settings(max_examples=300, deadline=None)
@given(finite)
def test_unit_warp_leaves_fiber_curvature_alone(k):
    assert bo_fiber_sectional(WarpData(1.0, 0.0, 0.0), k) == k


@settings(max_examples=300, deadline=None)
@given(st.floats(0.05, 20), st.floats(0, 10), finite, finite, st.integers(2, 8))
def test_transfer_round_trip(f, g2, lap, d, n2):
    w = WarpData(f, g2, lap)
    back = bo_delta_transfer_inverse(bo_delta_transfer(d, w, n2), w, n2)
    assert abs(back - d) < 1e-12 * max(1.0, abs(d), g2 * n2 * n2)


# ---------------------------------------------------------------- algebra

@settings(max_examples=300, deadline=None)
@given(st.lists(finite, min_size=2, max_size=9))
def test_lemma1_slack_is_nonnegative(alphas):
    r = lemma1_check(alphas, lemma1_beta(alphas))
    assert r.slack >= -1e-12 * max(1.0, max(abs(a) for a in alphas)) ** 2


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(PROFILES).flatmap(
    lambda p: st.tuples(st.just(p[0]), sff(n=p[0] + p[1]))))
def test_lemma_identities(args):
    n1, h = args
    scale = max(1.0, float(np.sum(h ** 2)))
    assert lemma_identity_residual("lemma2", h) < 1e-12 * scale
    assert lemma_identity_residual("lemma3", h, n1) < 1e-12 * scale


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(PROFILES).flatmap(
    lambda p: st.tuples(st.just(p), sff(n=p[0] + p[1]))))
def test_theta_is_nonnegative(args):
    (n1, n2), h = args
    assert theta(h, n1) >= 0.0
    if n2 >= 2:
        assert theta(h, n1, (n1, n1 + 1), version="ii") >= 0.0
    assert all(v >= 0.0 for v in theta_groups(h, n1).values())


# ---------------------------------------------------------------- inequalities on synthetic data

@st.composite
def synthetic_case(draw):
    n1, n2 = draw(st.sampled_from([(2, 1), (2, 2), (4, 2)]))
    normals = n2 + (n1 + 2 * n2) % 2 + 2 * draw(st.integers(0, 1))
    c = draw(st.sampled_from([-4.0, 0.0, 1.0, 4.0]))
    h = draw(sff(n=n1 + n2, normals=normals, scale=1.5))
    return SyntheticScenario(n1, n2, c, h)


@settings(max_examples=30, deadline=None)
@given(synthetic_case(), st.integers(0, 100))
def test_slack_chain_replays(case, seed):
    rep = evaluate_synthetic(case, FAST, seed=seed)
    assert rep.status in ("pass", "boundary"), rep.failures
    scale = max(1.0, rep.h_norm_sq)
    for v, slack in (("i", rep.slack_i), ("ii", rep.slack_ii)):
        if slack is None:
            continue
        side = rep.details[f"side_{v}"]
        assert slack >= side["theta"] - 1e-7 * scale
        assert abs(side["chain_residual"]) < 1e-7 * scale


@settings(max_examples=40, deadline=None)
@given(st.floats(-3, 3).filter(lambda x: abs(x) > 1e-3), st.floats(0.2, 3),
       st.sampled_from([0.0, 1.0, 4.0]))
def test_equality_implies_tight_and_minimal(mu1, scale, c):
    # the fixture plane is totally real, which minimizes K~ only when c >= 0
    h = equality_h(mu1) * scale
    e = equality_classify(h, (0, 2), "i", n1=4)
    assert e.is_equality
    assert e.mixed_tg and e.dt_minimal and e.dperp_minimal
    rep = evaluate_synthetic(SyntheticScenario(4, 2, c, h), FAST)
    assert rep.details["equality_i"]
    assert abs(rep.slack_i) < 1e-7 and rep.H_norm_sq < 1e-8
