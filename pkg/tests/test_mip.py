import math

import numpy as np
import pytest

from tcpmip.instances import gen_random
from tcpmip.mip import (
    CertVariant,
    FeasCertificate,
    MipPoint,
    alpha_upper_bound,
    build_mip,
    certificate_from_solution,
    check_certificate,
    check_mip_feasible,
    recover_solution,
)
from tcpmip.model import TcpInstance, verify
from tcpmip.solver import SolverConfig, best_mip_point, mip_point_of, solve
from tcpmip.tensor import Tensor

SQRT6 = np.sqrt(6.0)


def test_build_mip_example1(ex1):
    model = build_mip(ex1)
    assert model.alpha_range == (0.0, math.inf)
    rows = model.describe()
    assert rows[0] == "0 <= +1*y1*y1 -1*y2*y2 +2*alpha^2 <= 1 - z1"
    assert rows[1] == "0 <= -2*y1*y1 +1*y2*y2 +2*alpha^2 <= 1 - z2"
    assert rows[2] == "0 <= y1 <= z1 , 0 <= y2 <= z2"
    # constraint values agree with the displayed polynomials
    y, a = np.array([0.3, 0.7]), 0.45
    expected = [y[0] ** 2 - y[1] ** 2 + 2 * a**2, -2 * y[0] ** 2 + y[1] ** 2 + 2 * a**2]
    np.testing.assert_allclose(model.constraint_values(a, y), expected, rtol=1e-12, atol=1e-15)


def test_build_mip_with_range(ex1):
    model = build_mip(ex1, 0.2)
    assert model.alpha_range == (0.0, 0.2)
    assert model.describe()[-1] == "0 <= alpha <= 0.2"
    assert not check_mip_feasible(model, MipPoint(0.3, [0.0, 0.0], [0, 0]), 1e-9)


def test_build_mip_scalar():
    inst = TcpInstance(Tensor.diagonal(3, [1.0]), [-1.0])
    rows = build_mip(inst).describe()
    assert rows[0] == "0 <= +1*y1*y1 -1*alpha^2 <= 1 - z1"
    assert rows[1] == "0 <= y1 <= z1"


@pytest.mark.parametrize("alpha_hi", [0.0, -1.0])
def test_build_mip_rejects_bad_range(ex1, alpha_hi):
    with pytest.raises(ValueError):
        build_mip(ex1, alpha_hi)


def test_check_mip_feasible_table_points(ex1, ex3):
    m1 = build_mip(ex1)
    assert check_mip_feasible(m1, MipPoint(0.7071068, [0, 0], [0, 0]), 1e-7)
    assert check_mip_feasible(m1, MipPoint(0.2, [0.4, 0.4898979], [1, 1]), 1e-6)
    for inst in (ex1, ex3):
        assert check_mip_feasible(build_mip(inst), MipPoint(0.0, [0, 0], [0, 0]), 0.0)
        assert check_mip_feasible(build_mip(inst), MipPoint(0.0, [0, 0], [1, 1]), 0.0)
    # alpha just over 1/sqrt(2) breaks 2 alpha^2 <= 1
    assert not check_mip_feasible(m1, MipPoint(0.71, [0, 0], [0, 0]), 1e-9)


def test_zero_alpha_point_with_positive_y_infeasible(ex2):
    # row 2 reads -y1^2 - 3 alpha^2 >= 0, so y1 = 0.5 gives -0.25
    p = MipPoint(0.0, [0.5, 0.0], [1, 0])
    assert not check_mip_feasible(build_mip(ex2), p, 1e-7)
    assert build_mip(ex2).constraint_values(0.0, [0.5, 0.0])[1] == pytest.approx(-0.25)


def test_perturbed_y_only_feasible_up_to_tolerance(ex3):
    # y1 (y1 - y2)^2 is tiny but nonzero off the exact root y1 = y2
    p = MipPoint(0.8, [0.8001623, 0.8], [1, 1])
    model = build_mip(ex3, 0.8)
    assert check_mip_feasible(model, p, 1e-7)
    assert not check_mip_feasible(model, p, 1e-9)


def test_mip_point_rejects_nonbinary_z():
    with pytest.raises(ValueError):
        MipPoint(0.1, [0.0], [0.5])


def test_recover_solution():
    np.testing.assert_allclose(recover_solution(MipPoint(0.2, [0.4, 0.4898979], [1, 1])), [2.0, 2.4494895])
    np.testing.assert_array_equal(recover_solution(MipPoint(1.0, [1.0, 1.0], [1, 1])), [1.0, 1.0])
    np.testing.assert_array_equal(recover_solution(MipPoint(0.5, [0.0, 0.0], [0, 0])), [0.0, 0.0])
    with pytest.raises(ValueError):
        recover_solution(MipPoint(0.0, [0.5, 0.0], [1, 0]))


def test_alpha_upper_bound(ex1, ex2):
    assert alpha_upper_bound(ex1) == pytest.approx(np.sqrt(2.0), rel=1e-15)
    assert alpha_upper_bound(ex2) == pytest.approx(1.0, rel=1e-15)
    lcp = TcpInstance(Tensor(np.eye(1)), [-1.0])
    assert alpha_upper_bound(lcp) == 2.0
    with pytest.raises(ValueError):
        alpha_upper_bound(TcpInstance(ex1.A, [0.0, 0.0]))


def test_alpha_bound_on_solver_points():
    count = 0
    for seed in range(120):
        inst = gen_random(3 + seed % 3, 1 + seed % 3, 1.0, seed, "general")
        if np.all(inst.q >= 0):
            continue
        bound = alpha_upper_bound(inst)
        xs = solve(inst, SolverConfig(seed=seed)).xs
        for x in xs:
            for a in (math.inf, 0.6, 0.4, 0.2, 0.1):
                p = mip_point_of(inst, x, a)
                assert check_mip_feasible(build_mip(inst, a), p, 1e-7)
                assert p.alpha <= bound + 1e-9
                count += 1
    assert count >= 100


def test_certificate_examples(ex1, ex3):
    c = FeasCertificate(6.0, [2.0, SQRT6], [6.0, 6.0], CertVariant.EXACT)
    assert check_certificate(ex1, c, 1e-12)
    c = FeasCertificate(1.0, [0.0, 0.0], [0.0, 0.0], CertVariant.EXACT)
    assert not check_certificate(ex1, c, 1e-12)  # q = (2, 2) exceeds tau e - u = e
    c = FeasCertificate(1.0, [0.0, 1.0], [0.0, 1.0], CertVariant.EXACT)
    assert check_certificate(ex3, c, 1e-12)
    # u off the two-point set: relaxed accepts, exact refuses
    c = FeasCertificate(6.0, [2.0, SQRT6], [6.0, 6.0], CertVariant.RELAXED)
    assert check_certificate(ex1, c, 1e-12)
    c7 = FeasCertificate(2.0, [0.0, 0.0], [0.0, 0.0], CertVariant.RELAXED)
    assert check_certificate(ex1, c7, 0.0)
    half = FeasCertificate(3.0, [0.0, 0.0], [0.0, 0.5], CertVariant.RELAXED)
    assert check_certificate(ex1, half, 0.0)
    assert not check_certificate(ex1, FeasCertificate(3.0, [0.0, 0.0], [0.0, 0.5], CertVariant.EXACT), 0.0)
    assert not check_certificate(ex1, FeasCertificate(0.5, [0.0, 0.0], [0.0, 0.0]), 0.0)


def test_certificate_from_solution_examples(ex1, ex3):
    c = certificate_from_solution(ex3, [0.0, 1.0])
    assert c.tau == pytest.approx(8.0, rel=1e-15)
    np.testing.assert_allclose(c.u, [0.0, 8.0])

    c = certificate_from_solution(ex1, [0.0, 0.0])
    # q = (2, 2) needs tau >= 2 for q <= tau e
    assert c.tau == pytest.approx(2.0, rel=1e-12)
    np.testing.assert_array_equal(c.u, [0.0, 0.0])

    ok = TcpInstance(ex1.A, [0.5, 1.0])
    c = certificate_from_solution(ok, [0.0, 0.0])
    assert c.tau == 1.0 and np.all(c.u == 0)

    c = certificate_from_solution(ex1, [2.0, SQRT6])
    assert c.tau >= 6.0
    np.testing.assert_array_equal(c.u, [c.tau, c.tau])
    assert check_certificate(ex1, c, 1e-8)

    with pytest.raises(ValueError):
        certificate_from_solution(ex1, [1.0, 1.0])


def test_certificate_variants_relation():
    rng = np.random.default_rng(5)
    inst = TcpInstance(Tensor.diagonal(3, [1.0, 2.0]), [-1.0, 0.5])
    for _ in range(300):
        tau = 1 + rng.random() * 3
        x = rng.uniform(0, 1.5, 2)
        u = rng.choice([0.0, tau], 2) if rng.random() < 0.5 else rng.uniform(0, tau, 2)
        relaxed = check_certificate(inst, FeasCertificate(tau, x, u, CertVariant.RELAXED), 1e-12)
        exact = check_certificate(inst, FeasCertificate(tau, x, u, CertVariant.EXACT), 1e-12)
        if exact:
            assert relaxed
        if relaxed and np.all((u == 0) | (u == tau)):
            assert exact


def test_certificate_round_trip_random():
    n_checked = 0
    for seed in range(60):
        inst = gen_random(3 + seed % 3, 1 + seed % 3, 1.0, seed, "general")
        for x in solve(inst, SolverConfig(seed=seed)).xs:
            c = certificate_from_solution(inst, x)
            assert check_certificate(inst, c, 1e-8)
            assert check_certificate(inst, c, 1e-10)
            assert verify(inst, c.x, 1e-8)
            n_checked += 1
    assert n_checked >= 40


def test_best_mip_point_ties_prefer_larger_support(ex3):
    xs = [np.array([0.0, 1.0]), np.array([1.0, 1.0])]
    p = best_mip_point(ex3, xs, math.inf)
    assert p.alpha == 1.0
    np.testing.assert_array_equal(p.z, [1, 1])
    empty = best_mip_point(ex3, [], 0.5)
    assert empty.alpha == 0.0 and not empty.z.any()
