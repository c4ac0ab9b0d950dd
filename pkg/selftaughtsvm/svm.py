#!/usr/bin/env python3
# -*- coding: UTF-8 -*-

# svm.py is part of self-taught-svm which learns SVM classifiers
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
SVM dual solver for a precomputed Gram matrix.

Maximises ``theta * (sum(alpha) - 1/2 (alpha*s)' K (alpha*s))`` subject
to ``0 <= alpha <= C`` and ``alpha' s = 0``, where ``s = 2y - 1``.
Sequential minimal optimisation: each update moves the maximal
violating pair, which keeps the equality constraint exact.
'''

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import scipy.linalg

from selftaughtsvm.errors import (ConfigError, ConvergenceError,
                                  DataFormatError, DimMismatchError,
                                  NotPositiveSemidefiniteError,
                                  SingleClassError)

logger = logging.getLogger(__name__)

KKT_TOLERANCE = 1e-6
MAX_UPDATES = 10**6
PSD_TOLERANCE = 1e-6
# curvature floor for pairs with a non-positive second derivative
TAU = 1e-12


@dataclass(frozen=True, eq=False)
class DualSolution:
    '''
    Dual variables, bias and objective of one solve.

    ``objective`` includes the theta factor; ``bias_fallback`` is set when
    every alpha is zero and the bias defaulted to 0.
    '''
    alpha: np.ndarray
    bias: float
    objective: float
    signed_labels: np.ndarray
    C: float
    theta: float = 1.0
    updates: int = 0
    kkt_gap: float = 0.0
    bias_fallback: bool = False
    objective_trace: Tuple[float, ...] = ()

    @property
    def coefficients(self) -> np.ndarray:
        '''
        ``alpha * (2y - 1)``, the weights of the decision function
        '''
        return self.alpha * self.signed_labels

    @property
    def n_support(self) -> int:
        return int(np.count_nonzero(self.alpha > 0))


def signed_labels(y) -> np.ndarray:
    '''
    +1/-1 labels from a LabelVector or an array of {0, 1} labels
    '''
    if hasattr(y, 'signed'):
        return y.signed()
    y = np.asarray(y, dtype=np.float64)
    if np.all(np.abs(y) == 1.0):
        return y
    return np.where(y >= 0.5, 1.0, -1.0)


def min_eigenvalue(K) -> float:
    return float(scipy.linalg.eigvalsh(K, subset_by_index=[0, 0])[0])


def _prepare_gram(K, n):
    K = np.asarray(K, dtype=np.float64)
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise DimMismatchError('square matrix', K.shape, 'Gram matrix shape')
    if K.shape[0] != n:
        raise DimMismatchError(n, K.shape[0], 'Gram matrix size')
    if not np.all(np.isfinite(K)):
        raise DataFormatError('Gram matrix has non-finite entries')
    return 0.5 * (K + K.T)


def _feasible(alpha, s, C):
    return (alpha.shape == s.shape and np.all(alpha >= 0) and np.all(alpha <= C)
            and abs(alpha @ s) <= 1e-8 * max(1.0, C * s.size))


def dual_objective(alpha, s, K) -> float:
    '''
    ``sum(alpha) - 1/2 (alpha*s)' K (alpha*s)`` without the theta factor
    '''
    u = alpha * s
    return float(alpha.sum() - 0.5 * u @ K @ u)


def solve_dual(K, y, C, theta=1.0, tol=KKT_TOLERANCE, max_updates=MAX_UPDATES,
               alpha0=None, check_psd=True, record_trace=False) -> DualSolution:
    '''
    Solves the SVM dual for Gram matrix ``K`` and labels ``y``.

    ``theta`` scales the objective, not the maximiser, so it only enters
    the reported objective. ``alpha0`` warm-starts the solver when it is
    feasible for these labels. Raises SingleClassError when only one
    class is present and ConvergenceError when ``max_updates`` pair
    updates don't bring the KKT gap under ``tol``.
    '''
    s = signed_labels(y)
    n = s.size
    if not C > 0:
        raise ConfigError('C must be positive')
    if not theta > 0:
        raise ConfigError('theta must be positive')
    if np.all(s > 0) or np.all(s < 0):
        raise SingleClassError('the dual needs both classes')
    K = _prepare_gram(K, n)
    if check_psd:
        smallest = min_eigenvalue(K)
        if smallest < -PSD_TOLERANCE:
            raise NotPositiveSemidefiniteError(smallest)

    alpha = np.zeros(n)
    if alpha0 is not None:
        alpha0 = np.asarray(alpha0, dtype=np.float64)
        if _feasible(alpha0, s, C):
            alpha = alpha0.copy()
    # gradient of the minimisation form 1/2 a'Qa - 1'a, Q = s s' * K
    grad = s * (K @ (alpha * s)) - 1.0
    diagonal = np.diag(K).copy()
    trace = []
    updates = 0
    gap = np.inf
    while True:
        violation = -s * grad
        up = np.where(s > 0, alpha < C, alpha > 0)
        low = np.where(s > 0, alpha > 0, alpha < C)
        i = int(np.argmax(np.where(up, violation, -np.inf)))
        j = int(np.argmin(np.where(low, violation, np.inf)))
        gap = violation[i] - violation[j]
        if record_trace:
            trace.append(0.5 * float(np.sum(alpha * (1.0 - grad))))
        if gap <= tol:
            break
        if updates >= max_updates:
            raise ConvergenceError(updates, gap)

        curvature = diagonal[i] + diagonal[j] - 2.0 * K[i, j]
        step = gap / max(curvature, TAU)
        room_i = C - alpha[i] if s[i] > 0 else alpha[i]
        room_j = alpha[j] if s[j] > 0 else C - alpha[j]
        step = min(step, room_i, room_j)

        alpha[i] += s[i] * step
        alpha[j] -= s[j] * step
        if step == room_i:
            alpha[i] = C if s[i] > 0 else 0.0
        if step == room_j:
            alpha[j] = 0.0 if s[j] > 0 else C
        grad += step * s * (K[:, i] - K[:, j])
        updates += 1

    bias, fallback = compute_bias(alpha, K, s, C)
    return DualSolution(alpha=alpha, bias=bias,
                        objective=theta * dual_objective(alpha, s, K),
                        signed_labels=s, C=float(C), theta=float(theta),
                        updates=updates, kkt_gap=float(gap),
                        bias_fallback=fallback,
                        objective_trace=tuple(trace))


def compute_bias(alpha, K, y, C):
    '''
    Returns ``(bias, fallback)``.

    The bias is the mean of ``s_i - f_i`` over free support vectors; with
    none it is the midpoint of the interval the bound vectors allow. When
    alpha is all zero the bias is 0 and ``fallback`` is True.
    '''
    alpha = np.asarray(alpha, dtype=np.float64)
    s = signed_labels(y)
    if not np.any(alpha > 0):
        logger.warning('no support vectors; bias defaults to 0')
        return 0.0, True
    K = np.asarray(K, dtype=np.float64)
    # s_i - sum_j alpha_j s_j K(j, i)
    offsets = s - K @ (alpha * s)
    free = (alpha > 0) & (alpha < C)
    if np.any(free):
        return float(np.mean(offsets[free])), False

    at_zero = alpha <= 0
    at_cap = alpha >= C
    lower_mask = (at_zero & (s > 0)) | (at_cap & (s < 0))
    upper_mask = (at_zero & (s < 0)) | (at_cap & (s > 0))
    lower = offsets[lower_mask].max() if np.any(lower_mask) else None
    upper = offsets[upper_mask].min() if np.any(upper_mask) else None
    if lower is None:
        return float(upper), False
    if upper is None:
        return float(lower), False
    return float(0.5 * (lower + upper)), False


def decision_function(solution: DualSolution, cross_kernel_values):
    '''
    ``sum_i alpha_i s_i k(x_i, x) + bias`` for one row of kernel values or
    a matrix of them (one row per test point)
    '''
    values = np.asarray(cross_kernel_values, dtype=np.float64)
    if values.shape[-1] != solution.alpha.size:
        raise DimMismatchError(solution.alpha.size, values.shape[-1],
                               'kernel value count')
    scores = values @ solution.coefficients + solution.bias
    return float(scores) if np.ndim(scores) == 0 else scores


def predict_labels(scores):
    '''
    Class 1 when the score is at least zero, else 0
    '''
    scores = np.asarray(scores)
    return np.where(scores >= 0.0, 1, 0).astype(np.int64)


def kkt_violation(solution: DualSolution, K) -> float:
    '''
    Largest complementary slackness violation over the training set
    '''
    K = _prepare_gram(K, solution.alpha.size)
    alpha = solution.alpha
    margins = solution.signed_labels * (K @ solution.coefficients + solution.bias)
    violation = np.where(
        alpha <= 0, np.maximum(0.0, 1.0 - margins),
        np.where(alpha >= solution.C, np.maximum(0.0, margins - 1.0),
                 np.abs(margins - 1.0)))
    return float(violation.max())
