import numpy as np
import pytest

from tcpmip.instances import gen_random
from tcpmip.model import TcpInstance
from tcpmip.solver import solve
from tcpmip.spectral import (
    Method,
    grid_error_bound,
    grid_oracle,
    lambda_max,
    lambda_min,
    min_z_eigenvalue,
    solution_norm_bound,
    zeig_check,
)
from tcpmip.tensor import Tensor, apply_m1, form, symmetrize

EYE42 = Tensor.diagonal(4, [1.0, 1.0])
MAT = Tensor(np.diag([2.0, 3.0]))
R2 = 1 / np.sqrt(2)


def rand_sym(order, dim, seed):
    rng = np.random.default_rng(seed)
    return symmetrize(Tensor(rng.uniform(-1, 1, (dim,) * order)))


# -- zeig_check ---------------------------------------------------------------


def test_zeig_matrix():
    assert zeig_check(MAT, 2.0, [1.0, 0.0], 1e-12)
    assert not zeig_check(MAT, 3.0, [1.0, 0.0], 1e-12)


def test_zeig_identity_tensor():
    assert zeig_check(EYE42, 0.5, [R2, R2], 1e-12)


def test_zeig_zero_vector():
    assert not zeig_check(EYE42, 0.0, [0.0, 0.0], 1e-6)
    assert not zeig_check(MAT, 0.0, [0.0, 0.0], 1e-6)


def test_zeig_rejects_dimension_mismatch():
    with pytest.raises(ValueError):
        zeig_check(MAT, 2.0, [1.0, 0.0, 0.0], 1e-6)


# -- extremes -----------------------------------------------------------------


def test_lambda_min_identity():
    est = lambda_min(EYE42)
    assert est.method is Method.PROJECTED_GRADIENT
    assert est.converged
    assert abs(est.lam - 0.5) <= 1e-6
    np.testing.assert_allclose(np.abs(est.x), [R2, R2], atol=1e-6)
    assert abs(np.linalg.norm(est.x) - 1) <= 1e-10


def test_matrix_extremes():
    assert abs(lambda_min(MAT).lam - 2) <= 1e-9
    assert abs(lambda_max(MAT).lam - 3) <= 1e-9


@pytest.mark.parametrize("seed", range(10))
def test_converged_estimates_are_eigenpairs(seed):
    A = rand_sym(4, 3, seed)
    for est in (lambda_min(A), lambda_max(A)):
        if est.converged:
            assert zeig_check(A, est.lam, est.x, 1e-6)
            assert abs(form(A, est.x) - est.lam) <= 1e-9


@pytest.mark.parametrize("seed", range(20))
def test_odd_order_antisymmetry(seed):
    A = rand_sym(3, 1 + seed % 3, seed)
    assert abs(lambda_min(A).lam + lambda_max(A).lam) <= 1e-6


def test_deterministic():
    A = rand_sym(4, 3, 3)
    a, b = lambda_min(A), lambda_min(A)
    assert a.lam == b.lam
    np.testing.assert_array_equal(a.x, b.x)


def test_gradient_matches_finite_differences():
    A = rand_sym(4, 3, 1)
    rng = np.random.default_rng(0)
    for _ in range(20):
        x = rng.standard_normal(3)
        h = 1e-6
        fd = np.array([(form(A, x + h * e) - form(A, x - h * e)) / (2 * h) for e in np.eye(3)])
        np.testing.assert_allclose(4 * apply_m1(A, x), fd, rtol=1e-6, atol=1e-8)


def test_non_symmetric_rejected():
    A = Tensor.from_coo(3, 2, [((1, 1, 2), 1.0)])
    with pytest.raises(ValueError):
        lambda_min(A)
    with pytest.raises(ValueError):
        grid_oracle(A, 100)
    with pytest.raises(ValueError):
        solution_norm_bound(TcpInstance(A, [-1, -1]))


# -- grid oracle --------------------------------------------------------------


def test_grid_identity():
    lo, hi = grid_oracle(EYE42, 10_000)
    assert 0.4999 <= lo.lam <= 0.5001
    assert abs(hi.lam - 1.0) <= 1e-9
    assert lo.method is Method.GRID_ORACLE


def test_grid_matrix():
    lo, hi = grid_oracle(MAT, 10_000)
    assert abs(lo.lam - 2) <= 1e-3
    assert abs(hi.lam - 3) <= 1e-3


def test_grid_three_dims():
    lo, _ = grid_oracle(Tensor.diagonal(4, [1.0, 1.0, 1.0]), 300)
    assert abs(lo.lam - 1 / 3) <= 1e-2


def test_grid_rejects_large_dim():
    with pytest.raises(ValueError):
        grid_oracle(Tensor.diagonal(4, np.ones(4)), 10)


@pytest.mark.parametrize("seed", range(10))
def test_oracle_bracket(seed):
    n = 2 + seed % 2
    A = rand_sym(4, n, seed)
    res = 2000 if n == 2 else 200
    g = grid_oracle(A, res)[0].lam
    opt = lambda_min(A).lam
    assert opt >= g - 2 * grid_error_bound(A, res)
    assert opt <= g + 1e-6


def test_grid_error_bound_covers_truth():
    A = rand_sym(4, 2, 5)
    exact = lambda_min(A).lam
    for res in (16, 64, 256):
        assert grid_oracle(A, res)[0].lam - exact <= grid_error_bound(A, res)


# -- solution norm bound ------------------------------------------------------


def test_bound_identity_is_tight():
    inst = TcpInstance(EYE42, [-1.0, -1.0])
    b = solution_norm_bound(inst)
    assert abs(b - np.sqrt(2)) <= 1e-6
    (x,) = solve(inst).xs
    assert abs(np.linalg.norm(x) - b) <= 1e-6


def test_bound_matrix_lcp():
    inst = TcpInstance(MAT, [-2.0, -3.0])
    assert abs(solution_norm_bound(inst) - np.sqrt(13) / 2) <= 1e-6


def test_bound_zero_q():
    assert solution_norm_bound(TcpInstance(EYE42, [0.0, 0.0])) == 0.0


def test_bound_refused_when_not_definite():
    A = Tensor.diagonal(4, [1.0, -1.0])
    with pytest.raises(ValueError):
        solution_norm_bound(TcpInstance(A, [-1.0, -1.0]))


def test_min_z_eigenvalue_not_above_either_route():
    A = rand_sym(4, 2, 2)
    v = min_z_eigenvalue(A)
    assert v <= lambda_min(A).lam
    assert v <= grid_oracle(A, 4096)[0].lam


def test_containment_symmetric_pd():
    for seed in range(50):
        inst = gen_random(4, 2, 1.0, seed, "symmetric_pd")
        R = solution_norm_bound(inst)
        for x in solve(inst).xs:
            assert np.linalg.norm(x) <= R + 1e-6, seed
