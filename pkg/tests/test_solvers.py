import itertools

import numpy as np
import pytest

from conevi.basis import orthonormalize
from conevi.cones import orthant
from conevi.generate import generate_instance
from conevi.operators import AffineOperator, NotStronglyMonotone, iteration_bound
from conevi.solvers import (
    SolveConfig,
    bound_report,
    certify,
    project_intersection,
    solve_bertsekas,
    solve_exact,
    solve_galerkin,
)


def lcp_bruteforce(M, q):
    """Oracle: solve LCP(Mx+q, orthant) by enumerating active sets."""
    M = np.asarray(M, float)
    q = np.asarray(q, float)
    n = M.shape[0]
    for active in itertools.product([False, True], repeat=n):
        act = np.array(active)
        x = np.zeros(n)
        if act.any():
            try:
                x[act] = np.linalg.solve(M[np.ix_(act, act)], -q[act])
            except np.linalg.LinAlgError:
                continue
        s = M @ x + q
        if np.all(x >= -1e-12) and np.all(s >= -1e-10):
            return x
    raise AssertionError("enumeration found no solution")


def basis_from_columns(*cols):
    return orthonormalize(np.column_stack([np.asarray(c, float) for c in cols]))


class TestSolveExact:
    def test_identity_operator_projects_minus_q(self):
        op = AffineOperator(np.eye(2), [-1.0, 1.0])
        rep = solve_exact(op, orthant(2))
        assert rep.converged
        np.testing.assert_allclose(rep.x, [1.0, 0.0], atol=1e-10)

    def test_gamma_zero_converges_immediately(self):
        q = np.array([1.5, -3.0, 0.25])
        op = AffineOperator(2.0 * np.eye(3), q)
        rep = solve_exact(op, orthant(3), SolveConfig(x0=np.array([5.0, 5.0, 5.0])))
        assert rep.converged and rep.iterations <= 2
        np.testing.assert_allclose(rep.x, np.maximum(-q / 2.0, 0.0), atol=1e-10)

    def test_matches_active_set_enumeration(self):
        M = np.array([[2.0, 1.0], [0.0, 2.0]])
        q = np.array([-2.0, -2.0])
        oracle = lcp_bruteforce(M, q)
        np.testing.assert_allclose(oracle, [0.5, 1.0], atol=1e-12)
        op = AffineOperator(M, q)
        rep = solve_exact(op, orthant(2))
        np.testing.assert_allclose(rep.x, oracle, atol=1e-8)
        resid = rep.x - orthant(2).project(rep.x - rep.alpha * op(rep.x))
        assert np.linalg.norm(resid) <= 1e-10

    def test_not_strongly_monotone_refused_without_override(self):
        op = AffineOperator([[0.0, -1.0], [1.0, 0.0]], [0.0, 0.0])
        with pytest.raises(NotStronglyMonotone):
            solve_exact(op, orthant(2))

    def test_nonconvergence_reported_not_raised(self):
        op = AffineOperator(np.diag([1.0, 2.0]), [-1.0, -1.0])
        rep = solve_exact(op, orthant(2), SolveConfig(max_iter=2, tol=1e-14))
        assert not rep.converged
        assert rep.iterations == 2

    def test_iterates_stay_feasible(self):
        op, _ = generate_instance(20, 4, 1.0, 2.0, seed=1)
        rep = solve_exact(op, orthant(20), SolveConfig(trace=True))
        for it in rep.iterates:
            assert np.all(it >= 0.0)

    def test_nonlinear_operator_with_declared_params(self):
        # F(x) = 2x + 0.5 sin(x) + q has derivative in [1.5, 2.5]
        from conevi.operators import CallableOperator

        q = np.array([-3.0, 1.0, -0.5])
        op = CallableOperator(lambda x: 2.0 * x + 0.5 * np.sin(x) + q,
                              dim=3, beta=1.5, lipschitz=2.5)
        cone = orthant(3)
        rep = solve_exact(op, cone)
        assert rep.converged
        resid = rep.x - cone.project(rep.x - rep.alpha * op(rep.x))
        assert np.linalg.norm(resid) <= 1e-10

    def test_two_step_rearrangement_gives_same_x_sequence(self):
        # oracle: x <- P_C(z), z <- x - alpha F(x) reproduces the one-step
        # projection iteration exactly when started from the same point
        op, _ = generate_instance(15, 3, 1.0, 2.0, seed=2)
        cone = orthant(15)
        rep = solve_exact(op, cone, SolveConfig(trace=True, max_iter=60, tol=1e-300))
        z = np.zeros(15)
        for logged in rep.iterates:
            x = cone.project(z)
            np.testing.assert_allclose(x, logged, atol=1e-14)
            z = x - rep.alpha * op(x)


class TestProjectIntersection:
    def test_point_already_inside(self):
        cone = orthant(2)
        b = basis_from_columns([1.0, 1.0])
        z = np.array([2.0, 2.0])
        np.testing.assert_allclose(project_intersection(cone, b, z), z, atol=1e-12)

    def test_diagonal_ray(self):
        # hand calculus: min over t>=0 of ||(t,t)-(2,0)||^2 is stationary at t=1
        got = project_intersection(orthant(2), basis_from_columns([1.0, 1.0]), [2.0, 0.0])
        np.testing.assert_allclose(got, [1.0, 1.0], atol=1e-9)

    def test_intersection_is_origin_only(self):
        got = project_intersection(orthant(2), basis_from_columns([1.0, -1.0]), [0.0, -3.0])
        np.testing.assert_allclose(got, [0.0, 0.0], atol=1e-9)

    def test_result_feasible_and_near_span(self):
        rng = np.random.default_rng(31)
        cone = orthant(10)
        b = orthonormalize(rng.standard_normal((10, 3)))
        z = rng.standard_normal(10) * 2.0
        y = project_intersection(cone, b, z)
        assert np.all(y >= 0.0)
        assert b.representation_error(y) <= 1e-9


class TestSolveBertsekas:
    def test_identity_basis_matches_exact(self):
        op, _ = generate_instance(12, 3, 1.0, 2.0, seed=3)
        cone = orthant(12)
        x_star = solve_exact(op, cone).x
        rep = solve_bertsekas(op, cone, orthonormalize(np.eye(12)))
        np.testing.assert_allclose(rep.x, x_star, rtol=1e-8, atol=1e-10)

    def test_solution_in_span_collapses_bound(self):
        op, _ = generate_instance(12, 3, 1.0, 2.0, seed=4)
        cone = orthant(12)
        x_star = solve_exact(op, cone).x
        cols = [x_star + 1e-16, np.ones(12)]  # span contains x_star
        b = basis_from_columns(*cols)
        rep = solve_bertsekas(op, cone, b, x_ref=x_star)
        np.testing.assert_allclose(rep.x, x_star, rtol=1e-7, atol=1e-8)
        assert rep.apriori_bound <= 1e-8

    def test_axis_ray_fixed_point(self):
        # on the ray {(t,0)}: project (2,2) onto it -> (2,0); hand oracle
        op = AffineOperator(np.eye(2), [-2.0, -2.0])
        rep = solve_bertsekas(op, orthant(2), basis_from_columns([1.0, 0.0]))
        assert rep.converged
        np.testing.assert_allclose(rep.x, [2.0, 0.0], atol=1e-9)

    def test_iterates_stay_feasible(self):
        op, basis = generate_instance(12, 4, 1.0, 2.0, seed=5)
        cfg = SolveConfig(trace=True)
        rep = solve_bertsekas(op, orthant(12), basis, cfg)
        for it in rep.iterates:
            assert np.all(it >= 0.0)
        # the solution also sits in span(Phi) within the Dykstra tolerance
        assert basis.representation_error(rep.x) <= 10 * cfg.dykstra_tol * (1 + np.linalg.norm(rep.x))


class TestSolveGalerkin:
    def test_identity_basis_matches_exact(self):
        op, _ = generate_instance(12, 3, 1.0, 2.0, seed=6)
        cone = orthant(12)
        rep_e = solve_exact(op, cone)
        rep_g = solve_galerkin(op, cone, orthonormalize(np.eye(12)))
        np.testing.assert_allclose(rep_g.x, rep_e.x, rtol=1e-8, atol=1e-10)
        z_star = rep_e.x - rep_e.alpha * op(rep_e.x)
        np.testing.assert_allclose(rep_g.z, z_star, rtol=1e-8, atol=1e-8)

    def test_gamma_zero_single_pass_fixed_point(self):
        rng = np.random.default_rng(7)
        q = rng.standard_normal(6)
        op = AffineOperator(2.0 * np.eye(6), q)
        b = orthonormalize(rng.standard_normal((6, 2)))
        cone = orthant(6)
        rep = solve_galerkin(op, cone, b)
        assert rep.converged and rep.iterations <= 2
        x = cone.project(rep.z)
        np.testing.assert_allclose(
            rep.z, b.project_span(x - rep.alpha * op(x)), atol=1e-10)

    def test_axis_ray_closed_form(self):
        # alpha = beta/L^2 = 1 for M = I; one step gives z = P_span(-q) = (2,0)
        op = AffineOperator(np.eye(2), [-2.0, -2.0])
        rep = solve_galerkin(op, orthant(2), basis_from_columns([1.0, 0.0]))
        assert rep.converged
        np.testing.assert_allclose(rep.z, [2.0, 0.0], atol=1e-9)
        np.testing.assert_allclose(rep.x, [2.0, 0.0], atol=1e-9)

    def test_x_is_projection_of_z(self):
        op, basis = generate_instance(20, 5, 1.0, 2.0, seed=8)
        cone = orthant(20)
        rep = solve_galerkin(op, cone, basis)
        np.testing.assert_array_equal(rep.x, cone.project(rep.z))

    def test_iterates_stay_feasible(self):
        op, basis = generate_instance(20, 5, 1.0, 2.0, seed=9)
        rep = solve_galerkin(op, orthant(20), basis, SolveConfig(trace=True))
        for it in rep.iterates:
            assert np.all(it >= 0.0)


class TestCertify:
    def test_exact_solution_identity_basis_zero_residual(self):
        op = AffineOperator(np.eye(2), [-1.0, 1.0])
        cone = orthant(2)
        rep = solve_exact(op, cone)
        x = rep.x
        z = x - rep.alpha * op(x)
        cert = certify(op, cone, orthonormalize(np.eye(2)), x, z, rep.alpha)
        assert np.linalg.norm(cert.epsilon) <= 1e-9
        assert cert.null_space_violation <= 1e-9
        assert cert.normal_cone_ok
        assert cert.valid

    def test_converged_galerkin_certificate_valid(self):
        for seed in range(5):
            op, basis = generate_instance(25, 6, 1.0, 2.0, seed=seed)
            rep = solve_galerkin(op, orthant(25), basis)
            assert rep.converged
            cert = rep.certificate
            assert cert.null_space_violation <= 1e-8 * (1 + np.linalg.norm(cert.epsilon))
            assert cert.normal_cone_ok

    def test_perturbed_solution_fails_normal_cone(self):
        op, basis = generate_instance(25, 6, 1.0, 2.0, seed=10)
        cone = orthant(25)
        rep = solve_galerkin(op, cone, basis)
        x_bad = rep.x.copy()
        x_bad[0] += 0.1
        cert = certify(op, cone, basis, x_bad, rep.z, rep.alpha)
        assert not cert.normal_cone_ok


class TestContractionBehavior:
    def test_distances_contract_and_bound_holds(self):
        for seed in range(5):
            op, basis = generate_instance(30, 6, 1.0, 2.0, seed=seed)
            cone = orthant(30)
            cfg = SolveConfig(trace=True, tol=1e-12)
            for rep in (
                solve_exact(op, cone, cfg),
                solve_bertsekas(op, cone, basis, cfg),
                solve_galerkin(op, cone, basis, cfg),
            ):
                assert rep.converged
                d = rep.distances_to_final()
                for t in range(len(d) - 1):
                    assert d[t + 1] <= rep.gamma * d[t] + 1e-10

    def test_iteration_count_within_certified_bound(self):
        eps = 1e-8
        for seed in range(5):
            op, _ = generate_instance(30, 6, 1.0, 2.0, seed=seed)
            rep = solve_exact(op, orthant(30), SolveConfig(trace=True, tol=1e-13))
            d = rep.distances_to_final()
            if d[0] == 0.0:
                continue
            reached = int(np.argmax(d <= eps * d[0]))
            assert reached <= iteration_bound(rep.gamma, eps)


class TestBoundReport:
    def test_solution_in_span_all_small(self):
        op, _ = generate_instance(12, 3, 1.0, 2.0, seed=11)
        cone = orthant(12)
        x_star = solve_exact(op, cone).x
        rep = solve_exact(op, cone)
        z_star = x_star - rep.alpha * op(x_star)
        b = basis_from_columns(x_star, z_star, np.ones(12))
        comp = bound_report(op, cone, b)
        assert comp.bound_new <= 1e-7
        assert comp.err_new_x <= 1e-7 and comp.err_new_z <= 1e-7
        assert comp.new_ok
        if not comp.bertsekas_skipped:
            assert comp.bound_bertsekas <= 1e-7 and comp.err_bertsekas <= 1e-7

    def test_identity_basis_everything_collapses(self):
        op, _ = generate_instance(12, 3, 1.0, 2.0, seed=12)
        comp = bound_report(op, orthant(12), orthonormalize(np.eye(12)))
        for val in (comp.bound_new, comp.err_new_x, comp.err_new_z,
                    comp.bound_bertsekas, comp.err_bertsekas):
            assert val <= 1e-7
        assert comp.new_ok and comp.bertsekas_ok

    def test_random_instance_bounds_hold(self):
        op, basis = generate_instance(40, 8, 1.0, 2.0, seed=7)
        comp = bound_report(op, orthant(40), basis)
        assert comp.new_ok
        assert comp.bertsekas_skipped or comp.bertsekas_ok
