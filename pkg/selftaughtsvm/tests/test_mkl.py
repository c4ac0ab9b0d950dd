#!/usr/bin/env python3
# -*- coding: utf-8 -*-

# test_mkl.py is part of self-taught-svm which learns SVM classifiers
# from labeled target data and unlabeled source data
#
# Copyright 2026 The self-taught-svm developers
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU Affero General Public License as
# published by the Free Software Foundation, either version 3 of the
# License, or (at your option) any later version.
#
# This program is distributed in the hope that it will be useful, but
# WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the GNU
# Affero General Public License for more details.
#
# You should have received a copy of the GNU Affero General Public
# License along with this program.  If not, see
# <http://www.gnu.org/licenses/>.

# pylint: disable=invalid-name

import numpy as np
import pytest

from selftaughtsvm import dataset, kernels, mkl
from selftaughtsvm.adaptation import LabelVector
from selftaughtsvm.config import TrainConfig
from selftaughtsvm.dataset import Role
from selftaughtsvm.errors import DimMismatchError
from selftaughtsvm.kernels import KernelConfig, KernelKind


@pytest.fixture
def stacked_problem(separable_target, separable_source):
    '''
    Separable target and source with the source labelled by its clouds
    '''
    stacked = dataset.stack(separable_target, separable_source)
    source_labels = np.repeat([0.0, 1.0], 20)
    y = LabelVector.from_blocks(separable_target.labels, source_labels)
    return stacked, y


class TestProjectSimplex:

    @pytest.mark.parametrize(
        'v,expected',
        [
            ([2.0, 0.0], [1.0, 0.0]),
            # already on the simplex
            ([0.2, 0.3, 0.5], [0.2, 0.3, 0.5]),
            ([-1.0, -1.0], [0.5, 0.5]),
            ([0.1, 0.9, 5.0], [0.0, 0.0, 1.0]),
        ])
    def test_cases(self, v, expected):
        np.testing.assert_allclose(mkl.project_simplex(v), expected, atol=1e-12)

    def test_random_points_land_on_simplex(self, rng):
        for _ in range(50):
            d = mkl.project_simplex(rng.normal(scale=3.0, size=rng.integers(1, 10)))
            assert np.all(d >= 0)
            assert d.sum() == pytest.approx(1.0, abs=1e-12)

    def test_nearest_point(self, rng):
        v = rng.normal(size=5)
        d = mkl.project_simplex(v)
        for _ in range(100):
            other = rng.dirichlet(np.ones(5))
            assert np.linalg.norm(v - d) <= np.linalg.norm(v - other) + 1e-12


class TestSimplexStep:

    def test_two_kernels(self):
        np.testing.assert_allclose(
            mkl.simplex_step([0.5, 0.5], [0.4, -0.4], 1.0), [0.1, 0.9], atol=1e-12)

    def test_constant_direction_does_not_move(self, rng):
        d = rng.dirichlet(np.ones(6))
        np.testing.assert_allclose(mkl.simplex_step(d, np.full(6, 3.0), 1.0), d,
                                   atol=1e-12)


class TestGradAndHessian:

    def test_regulariser_only(self, rng):
        d = rng.dirichlet(np.ones(4))
        gradient, hessian = mkl.grad_and_hessian(
            d, np.zeros(4), np.zeros(4), np.zeros(3), [1, 0, 1],
            np.ones((4, 3, 3)), 1.0, 0.01)
        np.testing.assert_allclose(gradient, 0.02 * d)
        np.testing.assert_allclose(hessian, 0.02 * np.eye(4))

    def test_dual_part_is_nonpositive(self, rng, random_psd):
        matrices = np.stack([random_psd(6) for _ in range(3)])
        alpha = rng.uniform(0, 1, 6)
        gradient, _ = mkl.grad_and_hessian(
            np.full(3, 1 / 3), np.zeros(3), np.zeros(3), alpha,
            [1, 0, 1, 0, 1, 0], matrices, 2.0, 0.0)
        assert np.all(gradient <= 1e-12)

    def test_matches_finite_differences(self, rng, random_psd):
        step = 1e-4
        for _ in range(20):
            M = int(rng.integers(2, 5))
            n = int(rng.integers(4, 9))
            y = rng.permutation(np.concatenate([[0, 1], rng.integers(0, 2, n - 2)]))
            problem = mkl.InnerProblem(
                np.stack([random_psd(n) for _ in range(M)]),
                np.where(y > 0, 1.0, -1.0), rng.uniform(0, 1, M),
                rng.uniform(0, 1, M), C=float(rng.uniform(0.5, 5.0)),
                theta=float(rng.uniform(0.5, 2.0)), epsilon=1e-3,
                solver_tol=1e-10)
            d = 0.5 * rng.dirichlet(np.ones(M)) + 0.5 / M

            def h(point):
                return problem.h_value(point, problem.solve(point))

            gradient, _ = mkl.grad_and_hessian(
                d, problem.p_plus, problem.p_minus, problem.solve(d),
                problem.risk_labels, problem.risk_matrices, problem.theta,
                problem.epsilon)
            numeric = np.array([(h(d + step * e) - h(d - step * e)) / (2 * step)
                                for e in np.eye(M)])
            np.testing.assert_allclose(gradient, numeric, rtol=1e-3, atol=1e-4)

    def test_weight_count_mismatch(self):
        with pytest.raises(DimMismatchError):
            mkl.grad_and_hessian(np.full(3, 1 / 3), np.zeros(3), np.zeros(3),
                                 np.zeros(2), [1, 0], np.ones((4, 2, 2)), 1.0, 0.1)


class TestRunInnerLoop:

    def test_single_kernel(self, stacked_problem):
        stacked, y = stacked_problem
        config = KernelConfig(((KernelKind.GAUSSIAN, (2.0,)),), 2)
        bank = kernels.build_bank(stacked, config)
        state = mkl.run_inner_loop(y, bank, TrainConfig())
        assert state.d.values.tolist() == [1.0]
        assert state.iteration == 0 and state.converged

    def test_history_decreases_on_simplex(self, stacked_problem):
        stacked, y = stacked_problem
        bank = kernels.build_bank(stacked, KernelConfig.default(2))
        state = mkl.run_inner_loop(y, bank, TrainConfig(max_inner=15))
        values = [h for _, h in state.history]
        assert all(after < before for before, after in zip(values, values[1:]))
        for d, _ in state.history:
            assert np.all(d >= 0)
            assert d.sum() == pytest.approx(1.0, abs=1e-9)
        assert state.h_value == values[-1]

    def test_solution_belongs_to_final_weights(self, stacked_problem):
        stacked, y = stacked_problem
        bank = kernels.build_bank(stacked, kernels.kernel_config_for_count(8, 2))
        config = TrainConfig(kernel_count=8, max_inner=10)
        state = mkl.run_inner_loop(y, bank, config)
        problem = mkl.make_problem(y, bank, config)
        again = problem.solve(state.d.values)
        assert state.h_value == pytest.approx(problem.h_value(state.d.values, again),
                                              rel=1e-4)

    def test_target_only_risk(self, stacked_problem):
        stacked, y = stacked_problem
        bank = kernels.build_bank(stacked, kernels.kernel_config_for_count(4, 2))
        state = mkl.run_inner_loop(y, bank, TrainConfig(kernel_count=4),
                                   risk_rows=bank.target_rows)
        assert state.solution.alpha.size == stacked.n_target

    def test_identical_domains_minimise_svm_term(self, separable_target):
        source = separable_target.with_role(Role.SOURCE)
        stacked = dataset.stack(separable_target, source)
        y = LabelVector.from_blocks(separable_target.labels, separable_target.labels)
        bank = kernels.build_bank(stacked, KernelConfig(
            ((KernelKind.GAUSSIAN, (2.0,)), (KernelKind.INV_DIST, (3.0,))), 2))
        config = TrainConfig(max_inner=200, solver_tol=1e-9)
        state = mkl.run_inner_loop(y, bank, config)
        np.testing.assert_allclose(state.p_plus, 0.0, atol=1e-12)
        np.testing.assert_allclose(state.p_minus, 0.0, atol=1e-12)

        # what is left is theta * J(d) + epsilon * |d|^2 over the segment
        problem = mkl.make_problem(y, bank, config)
        grid = [np.array([t, 1.0 - t]) for t in np.linspace(0.0, 1.0, 1001)]
        best = min(problem.h_value(d, problem.solve(d)) for d in grid)
        assert state.h_value <= best + 1e-6 * max(1.0, abs(best))
