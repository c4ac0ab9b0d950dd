#!/usr/bin/env python3
# -*- coding: UTF-8 -*-

# refine.py is part of self-taught-svm which learns SVM classifiers
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

'''
Source label refinement with kernel weights and dual variables fixed.

The labels are relaxed to [0, 1] and the objective

    L(y) = s+(y)' K s+(y) + s-(y)' K s-(y)
           + theta (sum(alpha) - 1/2 (alpha*(2y-1))' K (alpha*(2y-1)))
           + lam |y - y_ref|^2   (over the penalised coordinates)

is descended by projected gradient with backtracking, then thresholded
at 0.5. Class counts stay frozen for the whole solve. The SVM term is
concave in y, so L is an indefinite quadratic: the result is a
stationary point, and the incoming labels are kept whenever the
hardened result would be worse.
'''

import logging
from dataclasses import dataclass

import numpy as np

from selftaughtsvm.adaptation import (ClassCounts, LabelVector,
                                      scaling_diagonals)
from selftaughtsvm.config import PenaltyScope
from selftaughtsvm.errors import DataFormatError, DimMismatchError
from selftaughtsvm.svm import DualSolution

logger = logging.getLogger(__name__)

REFINE_TOLERANCE = 1e-6
REFINE_MAX_ITER = 500
MIN_STEP = 1e-12


def reference_labels(y: LabelVector) -> LabelVector:
    '''
    True target labels stacked over a zero source block
    '''
    return y.with_source(np.zeros(y.n_source))


@dataclass(frozen=True, eq=False)
class RefinementProblem:
    K: np.ndarray
    solution: DualSolution
    lam: float
    y_ref: LabelVector
    counts: ClassCounts
    theta: float = 1.0
    penalty_scope: PenaltyScope = PenaltyScope.TARGET_ONLY
    clamp_target: bool = True

    def __post_init__(self):
        n = self.y_ref.n_samples
        if np.any(self.y_ref.source != 0.0):
            raise DataFormatError('reference labels must have a zero source block')
        if self.K.shape != (n, n):
            raise DimMismatchError((n, n), self.K.shape, 'Gram matrix shape')
        if self.solution.alpha.size != n:
            raise DimMismatchError(n, self.solution.alpha.size, 'dual variable count')
        if not self.lam >= 0:
            raise DataFormatError('lam must be nonnegative')
        self.counts.require_nonzero()
        object.__setattr__(self, 'penalty_scope', PenaltyScope(self.penalty_scope))
        d_plus, d_minus = scaling_diagonals(self.counts)
        object.__setattr__(self, '_d_plus', d_plus)
        object.__setattr__(self, '_d_minus', d_minus)

    @property
    def n_target(self) -> int:
        return self.y_ref.n_target

    def penalty_mask(self) -> np.ndarray:
        if self.penalty_scope is PenaltyScope.FULL:
            return np.ones(self.y_ref.n_samples, dtype=bool)
        return self.y_ref.target_mask

    def free_mask(self) -> np.ndarray:
        '''
        Coordinates the descent may move
        '''
        if self.clamp_target:
            return ~self.y_ref.target_mask
        return np.ones(self.y_ref.n_samples, dtype=bool)


def _values(y, prob):
    values = y.values if isinstance(y, LabelVector) else np.asarray(y, dtype=np.float64)
    if values.shape != (prob.y_ref.n_samples,):
        raise DimMismatchError(prob.y_ref.n_samples, values.size, 'label count')
    return values


def objective_L(y, prob: RefinementProblem) -> float:
    '''
    The label objective at ``y`` (a LabelVector or an array in [0, 1])
    '''
    y = _values(y, prob)
    K = prob.K
    s_plus = prob._d_plus * y
    s_minus = prob._d_minus * (1.0 - y)
    alpha = prob.solution.alpha
    u = alpha * (2.0 * y - 1.0)
    mask = prob.penalty_mask()
    residual = (y - prob.y_ref.values)[mask]
    return float(s_plus @ K @ s_plus + s_minus @ K @ s_minus
                 + prob.theta * (alpha.sum() - 0.5 * u @ K @ u)
                 + prob.lam * (residual @ residual))


def objective_gradient(y, prob: RefinementProblem) -> np.ndarray:
    '''
    Gradient of objective_L with the class counts held fixed
    '''
    y = _values(y, prob)
    K = prob.K
    s_plus = prob._d_plus * y
    s_minus = prob._d_minus * (1.0 - y)
    alpha = prob.solution.alpha
    u = alpha * (2.0 * y - 1.0)
    gradient = (2.0 * prob._d_plus * (K @ s_plus)
                - 2.0 * prob._d_minus * (K @ s_minus)
                - 2.0 * prob.theta * alpha * (K @ u))
    mask = prob.penalty_mask()
    gradient[mask] += 2.0 * prob.lam * (y - prob.y_ref.values)[mask]
    return gradient


@dataclass(frozen=True, eq=False)
class RefinementResult:
    labels: LabelVector
    iterations: int
    kept_incumbent: bool
    objective_before: float
    objective_after: float
    relaxed: np.ndarray


def refine_labels(prob: RefinementProblem, y_init: LabelVector,
                  tol=REFINE_TOLERANCE, max_iter=REFINE_MAX_ITER) -> RefinementResult:
    '''
    Projected gradient descent over the box followed by hardening.

    Stops when the projected gradient is below ``tol`` (infinity norm)
    or after ``max_iter`` iterations. The target block of the result is
    always the true labels, and its objective never exceeds that of
    ``y_init``.
    '''
    free = prob.free_mask()
    x = _values(y_init, prob).copy()
    current = objective_L(x, prob)
    before = current
    step = 1.0
    iterations = 0
    for iterations in range(1, max_iter + 1):
        gradient = objective_gradient(x, prob)
        gradient[~free] = 0.0
        projected = x - np.clip(x - gradient, 0.0, 1.0)
        if np.max(np.abs(projected[free]), initial=0.0) < tol:
            break
        while True:
            candidate = np.clip(x - step * gradient, 0.0, 1.0)
            move = candidate - x
            value = objective_L(candidate, prob)
            # sufficient decrease for a quadratic upper model at this step
            if value <= current + gradient @ move + (move @ move) / (2.0 * step):
                break
            step *= 0.5
            if step < MIN_STEP:
                break
        if step < MIN_STEP or not value < current:
            break
        x, current = candidate, value
        step = min(2.0 * step, 1e6)

    hard = np.where(x >= 0.5, 1.0, 0.0)
    hard[:prob.n_target] = prob.y_ref.target
    hardened = LabelVector(hard, prob.n_target)
    after = objective_L(hardened, prob)
    kept = after > before
    if kept:
        after = before
        hardened = y_init
    logger.debug('refinement', extra={'fields': {
        'iterations': iterations, 'objective_before': before,
        'objective_after': after, 'kept_incumbent': kept}})
    return RefinementResult(hardened, iterations, kept, before, after, x)
