import math

import numpy as np
import pytest

from crwarplab.ambient import (
    GENERIC,
    J_INVARIANT,
    TOTALLY_REAL,
    AmbientModel,
    apply_J,
    classify_subspace,
    csf_curvature,
    csf_sectional,
    kmin_closed_form,
    standard_J,
)
from crwarplab.dsl import Expr
from crwarplab.errors import DegenerateInput, DimensionMismatch, NonPositiveWarp, ParityError
from crwarplab.numeric import Frame, PlaneSpec, gram_schmidt, min_over_planes
from crwarplab.warped import (
    WarpData,
    WarpedSpec,
    bo_delta_transfer,
    bo_delta_transfer_inverse,
    bo_fiber_sectional,
    christoffel_from_metric,
    constant_curvature_delta,
    grad_laplacian,
    warp_identity_residual,
)

E = np.eye(4)


# ---------------------------------------------------------------- ambient

def test_standard_j_is_a_complex_structure():
    J = standard_J(3)
    assert np.array_equal(J @ J, -np.eye(6))
    assert np.array_equal(J.T @ J, np.eye(6))
    x = np.arange(6.0)
    assert np.array_equal(apply_J(x), J @ x)
    assert apply_J(E[0]).tolist() == E[1].tolist()


def test_curvature_antisymmetric_slots_vanish():
    m = AmbientModel(4.0, 2)
    rng = np.random.default_rng(0)
    X, Y, Z = rng.normal(size=(3, 4))
    assert abs(csf_curvature(X, Y, X, X, m)) < 1e-12
    assert abs(csf_curvature(X, X, Y, Z, m)) < 1e-12


def test_curvature_totally_real_pair_c4():
    m = AmbientModel(4.0, 2)
    assert csf_curvature(E[0], E[2], E[2], E[0], m) == pytest.approx(1.0, abs=1e-15)


def test_first_bianchi_and_symmetries():
    m = AmbientModel(-3.0, 3)
    rng = np.random.default_rng(1)
    for _ in range(20):
        X, Y, Z, W = rng.normal(size=(4, 6))
        cyc = csf_curvature(X, Y, Z, W, m) + csf_curvature(Y, Z, X, W, m) + csf_curvature(Z, X, Y, W, m)
        assert abs(cyc) < 1e-12
        assert abs(csf_curvature(X, Y, Z, W, m) + csf_curvature(Y, X, Z, W, m)) < 1e-12
        assert abs(csf_curvature(X, Y, Z, W, m) - csf_curvature(Z, W, X, Y, m)) < 1e-12


def test_curvature_dimension_check():
    with pytest.raises(DimensionMismatch):
        csf_curvature(np.ones(3), np.ones(3), np.ones(3), np.ones(3), AmbientModel(1.0, 2))


def test_sectional_examples():
    assert csf_sectional(PlaneSpec(E[0], E[1]), AmbientModel(4.0, 2)) == 4.0
    assert csf_sectional(PlaneSpec(E[0], E[2]), AmbientModel(-8.0, 2)) == -2.0
    rng = np.random.default_rng(2)
    p = PlaneSpec.from_pair(*rng.normal(size=(2, 4)))
    assert csf_sectional(p, AmbientModel(0.0, 2)) == 0.0


@pytest.mark.parametrize("c", [4.0, -4.0, 1.5])
def test_sectional_within_bounds_and_matches_tensor(c):
    m = AmbientModel(c, 3)
    rng = np.random.default_rng(3)
    lo, hi = min(c / 4, c), max(c / 4, c)
    for _ in range(200):
        p = PlaneSpec.from_pair(*rng.normal(size=(2, 6)))
        k = csf_sectional(p, m)
        assert lo - 1e-12 <= k <= hi + 1e-12
        assert abs(k - csf_curvature(p.u, p.v, p.v, p.u, m)) < 1e-12


def test_classify_subspace():
    m = AmbientModel(1.0, 2)
    assert classify_subspace(Frame(E[[0, 1]]), m).tag == J_INVARIANT
    assert classify_subspace(Frame(E[[0, 2]]), m).tag == TOTALLY_REAL
    g = classify_subspace(Frame(np.array([E[0], (E[1] + E[2]) / math.sqrt(2)])), m)
    assert g.tag == GENERIC
    assert g.closure_residual > 1e-10 and g.orthogonality_residual > 1e-10
    assert set(g.evidence) == {"J_closure", "J_orthogonality"}


def test_kmin_closed_form_examples():
    V4 = Frame(np.eye(6)[:4])
    assert kmin_closed_form(V4, AmbientModel(4.0, 3)) == 1.0
    assert kmin_closed_form(Frame(np.eye(6)[[0, 2, 4]]), AmbientModel(-8.0, 3)) == -2.0
    assert kmin_closed_form(V4, AmbientModel(-4.0, 3)) == -4.0
    # a single holomorphic plane only has curvature c
    assert kmin_closed_form(Frame(E[[0, 1]]), AmbientModel(4.0, 2)) == 4.0
    generic = Frame(np.array([E[0], (E[1] + E[2]) / math.sqrt(2), E[3]]))
    assert kmin_closed_form(generic, AmbientModel(4.0, 2)) is None


@pytest.mark.parametrize("c", [4.0, -4.0])
def test_kmin_closed_form_agrees_with_sampling(c):
    m = AmbientModel(c, 4)
    rng = np.random.default_rng(4)
    R = np.linalg.qr(rng.normal(size=(4, 4)))[0]
    # a J-invariant 4-space spanned by rotated complex slots
    base = np.zeros((4, 8))
    for k in range(2):
        v = np.zeros(8)
        v[0::2] = R[k]
        base[2 * k], base[2 * k + 1] = v, apply_J(v)
    V = gram_schmidt(base)
    val, _ = min_over_planes(lambda p: csf_sectional(p, m), V, seed=0)
    assert abs(val - kmin_closed_form(V, m)) < 1e-6
    T = Frame(np.eye(8)[[0, 2, 4]])
    val, _ = min_over_planes(lambda p: csf_sectional(p, m), T, seed=0)
    assert abs(val - kmin_closed_form(T, m)) < 1e-6


# ---------------------------------------------------------------- warped

def test_grad_laplacian_constant():
    w = grad_laplacian(5.0, [0.3, 0.1])
    assert (w.f, w.grad_norm_sq, w.laplacian_f) == (5.0, 0.0, 0.0)


def test_grad_laplacian_radius_in_the_plane():
    w = grad_laplacian(Expr("sqrt(x^2 + y^2)", ("x", "y")), [2.0, 0.0])
    # finite-difference oracle on -(f_xx + f_yy)
    h = 1e-4
    f = lambda x, y: math.hypot(x, y)
    fd = -((f(2 + h, 0) - 2 * f(2, 0) + f(2 - h, 0)) + (f(2, h) - 2 * f(2, 0) + f(2, -h))) / h ** 2
    assert w.laplacian_f == pytest.approx(-0.5, abs=1e-14)
    assert abs(w.laplacian_f - fd) < 1e-6
    assert w.grad_norm_sq == pytest.approx(1.0)


def test_grad_laplacian_cosh():
    w = grad_laplacian(Expr("cosh(t)", ("t",)), [1.0])
    assert w.laplacian_f == pytest.approx(-math.cosh(1.0), rel=1e-15)


def test_grad_laplacian_curved_base_uses_the_connection():
    # polar coordinates on the flat plane, f = r^2 = x^2 + y^2 has Laplacian -4
    r, th = 1.7, 0.4
    g = np.diag([1.0, r * r])
    dg = np.zeros((2, 2, 2))
    dg[0, 1, 1] = 2 * r
    G = christoffel_from_metric(g, dg)
    w = grad_laplacian(Expr("r^2", ("r", "th")), [r, th], g, G)
    assert w.laplacian_f == pytest.approx(-4.0, abs=1e-13)
    assert w.grad_norm_sq == pytest.approx(4 * r * r)


def test_gradient_is_metric_dual_of_differential():
    g = np.array([[2.0, 0.3], [0.3, 1.0]])
    e = Expr("x*y + x^2 + 3", ("x", "y"))
    w = grad_laplacian(e, [0.5, -1.0], g)
    t = e.jet([0.5, -1.0])
    X = np.array([0.7, -0.2])
    assert abs(w.grad_f @ g @ X - t.grad @ X) < 1e-14


def test_nonpositive_warp():
    with pytest.raises(NonPositiveWarp):
        grad_laplacian(Expr("x - 1", ("x",)), [0.5])
    with pytest.raises(NonPositiveWarp):
        WarpData(0.0, 0.0, 0.0)


def test_warped_spec_parity():
    with pytest.raises(ParityError):
        WarpedSpec(3, 1, 1.0)
    spec = WarpedSpec(2, 1, Expr("exp(x)", ("x", "y")))
    assert spec.warp_at([0.0, 0.0]).f == 1.0


def test_bo_fiber_sectional_examples():
    assert bo_fiber_sectional(WarpData(1.0, 0.0, 0.0), 0.37) == 0.37
    assert bo_fiber_sectional(WarpData(2.0, 1.0, 0.0), 1.0) == pytest.approx(0.0)
    t = 0.8
    assert bo_fiber_sectional(WarpData(math.exp(t), math.exp(2 * t), 0.0), 0.0) == pytest.approx(-1.0)


def _surface_curvature(G, t, h=1e-4):
    """Gaussian curvature of dt^2 + G(t) dx^2 via K = -(sqrt G)'' / sqrt G."""
    s = lambda u: math.sqrt(G(u))
    return -(s(t + h) - 2 * s(t) + s(t - h)) / h ** 2 / s(t)


@pytest.mark.parametrize("t", [-1.0, 0.0, 0.6, 1.3])
def test_hyperbolic_plane_warp_identity(t):
    warp = grad_laplacian(Expr("cosh(t)", ("t",)), [t])
    mixed = _surface_curvature(lambda u: math.cosh(u) ** 2, t)
    assert abs(mixed + 1.0) < 1e-6          # finite-difference oracle
    assert abs(warp.laplacian_over_f + 1.0) < 1e-10
    assert warp_identity_residual([[-1.0]], warp, 1) < 1e-10


def test_warp_identity_shapes():
    w = WarpData(2.0, 0.0, 0.0)
    assert warp_identity_residual(np.zeros((2, 3)), w, 3) == 0.0
    with pytest.raises(DimensionMismatch):
        warp_identity_residual(np.zeros((2, 3)), w, 2)


def test_delta_transfer_examples_and_round_trip():
    one = WarpData(1.0, 0.0, 0.0)
    assert bo_delta_transfer(0.9, one, 3) == 0.9
    assert bo_delta_transfer(1.2, WarpData(2.0, 5.0, 0.0), 2) == pytest.approx(0.3)
    w = WarpData(2.0, 1.0, 0.0)
    assert bo_delta_transfer(constant_curvature_delta(1.0, 3), w, 3) == pytest.approx(0.0, abs=1e-15)
    rng = np.random.default_rng(7)
    for _ in range(50):
        w = WarpData(rng.uniform(0.1, 3), rng.uniform(0, 2), rng.normal())
        d = rng.normal()
        n2 = int(rng.integers(2, 7))
        assert abs(bo_delta_transfer_inverse(bo_delta_transfer(d, w, n2), w, n2) - d) < 1e-12
    with pytest.raises(DegenerateInput):
        bo_delta_transfer(1.0, one, 1)


def test_constant_curvature_delta():
    assert constant_curvature_delta(1.0, 3) == 2.0
    assert constant_curvature_delta(0.5, 2) == 0.0
