#!/usr/bin/env python3
# -*- coding: utf-8 -*-

# test_refine.py is part of self-taught-svm which learns SVM classifiers
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

import itertools

import numpy as np
import pytest

from selftaughtsvm import adaptation, kernels, refine
from selftaughtsvm.adaptation import LabelVector
from selftaughtsvm.config import PenaltyScope
from selftaughtsvm.errors import DataFormatError, DimMismatchError
from selftaughtsvm.kernels import KernelConfig, KernelKind
from selftaughtsvm.svm import DualSolution, solve_dual


def fixed_alpha(alpha, y):
    '''
    A DualSolution carrying ``alpha`` and nothing the refiner reads
    '''
    return DualSolution(alpha=np.asarray(alpha, dtype=np.float64), bias=0.0,
                        objective=0.0, signed_labels=y.signed(), C=10.0)


def make_problem(K, y, alpha, lam=1.0, **options):
    return refine.RefinementProblem(
        K, fixed_alpha(alpha, y), lam, refine.reference_labels(y),
        adaptation.class_counts(y, hardened=True), **options)


def random_instance(rng, random_psd):
    nt = int(rng.integers(2, 6))
    ns = int(rng.integers(2, 9))
    target = rng.permutation(np.concatenate([[0, 1], rng.integers(0, 2, nt - 2)]))
    source = rng.permutation(np.concatenate([[0, 1], rng.integers(0, 2, ns - 2)]))
    y = LabelVector.from_blocks(target, source)
    K = random_psd(nt + ns)
    alpha = rng.uniform(0.0, 2.0, nt + ns)
    return K, y, alpha


def enumeration_minimum(prob, y):
    best = np.inf
    for source in itertools.product((0.0, 1.0), repeat=y.n_source):
        best = min(best, refine.objective_L(y.with_source(np.array(source)), prob))
    return best


@pytest.fixture
def duplicated_points():
    '''
    Six target points far apart on a line and a source block repeating
    them, under Gaussian kernels only
    '''
    features = np.arange(6.0)[:, None] * 10.0
    config = KernelConfig.only([KernelKind.GAUSSIAN], 1)
    bank = kernels.build_bank(np.vstack([features, features]), config)
    K = kernels.combine(bank, kernels.KernelWeights.uniform(4))
    truth = np.array([0.0, 1.0, 1.0, 0.0, 1.0, 0.0])
    return K, truth


class TestRefinementProblem:

    def test_reference_labels(self, four_point_labels):
        assert refine.reference_labels(four_point_labels).values.tolist() == \
            [1.0, 0.0, 0.0, 0.0]

    def test_reference_source_must_be_zero(self, four_point_labels):
        with pytest.raises(DataFormatError):
            refine.RefinementProblem(
                np.eye(4), fixed_alpha(np.zeros(4), four_point_labels), 1.0,
                four_point_labels, adaptation.class_counts(four_point_labels))

    def test_shape_mismatch(self, four_point_labels):
        with pytest.raises(DimMismatchError):
            make_problem(np.eye(5), four_point_labels, np.zeros(4))


class TestObjective:

    def test_at_building_labels(self, rng, random_psd):
        y = LabelVector.from_blocks([1, 0, 1, 0], [1, 1, 0, 0, 1])
        K = random_psd(9)
        solution = solve_dual(K, y, 10.0, theta=2.0)
        counts = adaptation.class_counts(y)
        prob = refine.RefinementProblem(K, solution, 1.0, refine.reference_labels(y),
                                        counts, theta=2.0)
        vectors = adaptation.scaling_vectors(y, counts)
        assert refine.objective_L(y, prob) == pytest.approx(
            adaptation.adaptation_term(K, vectors) + solution.objective, rel=1e-12)

    def test_target_perturbation_costs_lambda(self, four_point_labels):
        prob = make_problem(np.zeros((4, 4)), four_point_labels, np.zeros(4),
                            lam=3.0, clamp_target=False)
        moved = four_point_labels.values.copy()
        moved[0] -= 0.25
        assert refine.objective_L(moved, prob) - refine.objective_L(
            four_point_labels, prob) == pytest.approx(3.0 * 0.25**2)

    @pytest.mark.parametrize('scope', list(PenaltyScope))
    def test_gradient_matches_finite_differences(self, rng, random_psd, scope):
        K, y, alpha = random_instance(rng, random_psd)
        prob = make_problem(K, y, alpha, lam=0.7, theta=1.5, penalty_scope=scope,
                            clamp_target=False)
        point = rng.uniform(0.1, 0.9, y.n_samples)
        step = 1e-6
        numeric = np.array([
            (refine.objective_L(point + step * e, prob)
             - refine.objective_L(point - step * e, prob)) / (2 * step)
            for e in np.eye(y.n_samples)])
        np.testing.assert_allclose(refine.objective_gradient(point, prob), numeric,
                                   rtol=1e-5, atol=1e-6)


class TestRefineLabels:

    def test_enumeration_bounds(self, rng, random_psd):
        for _ in range(50):
            K, y, alpha = random_instance(rng, random_psd)
            prob = make_problem(K, y, alpha)
            result = refine.refine_labels(prob, y)
            value = refine.objective_L(result.labels, prob)
            assert value >= enumeration_minimum(prob, y) - 1e-9
            assert value <= refine.objective_L(y, prob) + 1e-9
            assert result.labels.is_hard
            np.testing.assert_array_equal(result.labels.target, y.target)
            assert np.all((result.relaxed >= 0.0) & (result.relaxed <= 1.0))

    def test_recovers_duplicated_labels(self, duplicated_points):
        K, truth = duplicated_points
        swapped = np.array([1.0, 0.0, 0.0, 1.0, 1.0, 0.0])
        y_init = LabelVector.from_blocks(truth, swapped)
        prob = make_problem(K, LabelVector.from_blocks(truth, truth), np.zeros(12))
        result = refine.refine_labels(prob, y_init)
        assert result.labels.source.tolist() == truth.tolist()
        assert not result.kept_incumbent
        assert result.objective_after < result.objective_before

    def test_optimal_start_is_returned(self, duplicated_points):
        K, truth = duplicated_points
        y = LabelVector.from_blocks(truth, truth)
        result = refine.refine_labels(make_problem(K, y, np.zeros(12)), y)
        assert result.labels.values.tolist() == y.values.tolist()

    def test_lambda_does_not_reach_source(self, rng, random_psd):
        K, y, _ = random_instance(rng, random_psd)
        results = [refine.refine_labels(make_problem(K, y, np.zeros(y.n_samples),
                                                     lam=lam), y)
                   for lam in (0.1, 1.0, 10.0)]
        for other in results[1:]:
            np.testing.assert_array_equal(other.labels.values, results[0].labels.values)
            np.testing.assert_array_equal(other.relaxed, results[0].relaxed)

    def test_target_block_untouched(self, rng, random_psd):
        K, y, alpha = random_instance(rng, random_psd)
        result = refine.refine_labels(make_problem(K, y, alpha, clamp_target=False), y)
        np.testing.assert_array_equal(result.labels.target, y.target)
