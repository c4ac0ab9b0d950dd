#!/usr/bin/env python3
# -*- coding: UTF-8 -*-

# mkl.py is part of self-taught-svm which learns SVM classifiers
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
Kernel weight learning with the labels held fixed.

Alternates an SVM dual solve with a Newton-scaled, simplex-projected
step on the kernel weights ``d``. The objective minimised over ``d`` is

    h(d) = 1/2 (d'p+)^2 + 1/2 (d'p-)^2 + eps |d|^2 + theta J(d)

where ``p+``/``p-`` are the per-kernel class discrepancies and ``J`` is
the SVM dual optimum for the combined kernel. Its gradient and Hessian
are the ones the weight update is defined with:
``(p+ p+' + eps I) d + (p- p-' + eps I) d + grad J`` and
``p+ p+' + p- p-' + 2 eps I``.
'''

import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
import scipy.linalg

from selftaughtsvm import adaptation
from selftaughtsvm.errors import DimMismatchError
from selftaughtsvm.kernels import KernelWeights
from selftaughtsvm.svm import DualSolution, signed_labels, solve_dual

logger = logging.getLogger(__name__)

# below this, a projected step is treated as no move at all
STATIONARY_STEP = 1e-15


def project_simplex(v) -> np.ndarray:
    '''
    Euclidean projection onto {d >= 0, sum(d) = 1} by sorting and
    thresholding
    '''
    v = np.asarray(v, dtype=np.float64)
    u = np.sort(v)[::-1]
    cumulative = np.cumsum(u) - 1.0
    ranks = np.arange(1, v.size + 1)
    rho = np.nonzero(u - cumulative / ranks > 0)[0][-1]
    threshold = cumulative[rho] / (rho + 1.0)
    return np.maximum(v - threshold, 0.0)


def simplex_step(d, direction, eta) -> np.ndarray:
    '''
    ``project(d - eta * direction)``
    '''
    return project_simplex(np.asarray(d, dtype=np.float64) - eta * np.asarray(direction))


@dataclass(frozen=True, eq=False)
class InnerProblem:
    '''
    Everything the weight update needs for fixed labels: base kernels
    restricted to the rows in the SVM risk, their labels, the class
    discrepancy projections and the solver settings
    '''
    risk_matrices: np.ndarray
    risk_labels: np.ndarray
    p_plus: np.ndarray
    p_minus: np.ndarray
    C: float
    theta: float
    epsilon: float
    solver_tol: float = 1e-6
    solver_max_updates: int = 10**6

    @property
    def n_kernels(self) -> int:
        return self.risk_matrices.shape[0]

    def gram(self, d):
        return np.tensordot(np.asarray(d), self.risk_matrices, axes=1)

    def solve(self, d, alpha0=None) -> DualSolution:
        return solve_dual(self.gram(d), self.risk_labels, self.C, self.theta,
                          tol=self.solver_tol, max_updates=self.solver_max_updates,
                          alpha0=alpha0, check_psd=False)

    def h_value(self, d, solution: DualSolution) -> float:
        return h_objective(d, self.p_plus, self.p_minus, solution.objective,
                           self.epsilon)


def h_objective(d, p_plus, p_minus, theta_j, epsilon) -> float:
    '''
    The weight objective given ``theta * J(d)`` (a solved dual objective)
    '''
    d = np.asarray(d, dtype=np.float64)
    return float(0.5 * (d @ p_plus)**2 + 0.5 * (d @ p_minus)**2
                 + epsilon * (d @ d) + theta_j)


def grad_and_hessian(d, p_plus, p_minus, alpha, y, bank, theta, epsilon):
    '''
    Gradient and Hessian of the weight objective at ``d``.

    ``alpha`` must maximise the dual at ``d``; ``bank`` holds the base
    kernels over the rows ``alpha`` and ``y`` refer to (a KernelBank or
    an (M, n, n) array).
    '''
    d = np.asarray(d, dtype=np.float64)
    p_plus = np.asarray(p_plus, dtype=np.float64)
    p_minus = np.asarray(p_minus, dtype=np.float64)
    matrices = bank.matrices if hasattr(bank, 'matrices') else np.asarray(bank)
    if isinstance(alpha, DualSolution):
        alpha = alpha.alpha
    alpha = np.asarray(alpha, dtype=np.float64)
    if matrices.shape[0] != d.size:
        raise DimMismatchError(matrices.shape[0], d.size, 'kernel weight count')
    if matrices.shape[1] != alpha.size:
        raise DimMismatchError(matrices.shape[1], alpha.size, 'dual variable count')

    u = alpha * signed_labels(y)
    grad_j = -0.5 * theta * ((matrices @ u) @ u)
    identity = np.eye(d.size)
    first = np.outer(p_plus, p_plus) + epsilon * identity
    second = np.outer(p_minus, p_minus) + epsilon * identity
    gradient = first @ d + second @ d + grad_j
    return gradient, first + second


@dataclass(frozen=True)
class StepResult:
    d: np.ndarray
    h_value: float
    solution: Optional[DualSolution]
    eta: float
    accepted: bool


def reduced_gradient_step(problem: InnerProblem, d, h_value, solution,
                          gradient, hessian, min_eta=1e-10) -> StepResult:
    '''
    Newton-scaled step ``d - eta H^-1 grad`` projected onto the simplex.

    ``eta`` starts at 1 and halves until the objective decreases. When it
    drops under ``min_eta``, or the projected step doesn't move, the
    current point comes back with ``accepted`` unset.
    '''
    d = np.asarray(d, dtype=np.float64)
    direction = scipy.linalg.cho_solve(scipy.linalg.cho_factor(hessian), gradient)
    eta = 1.0
    while eta >= min_eta:
        candidate = simplex_step(d, direction, eta)
        if np.max(np.abs(candidate - d)) <= STATIONARY_STEP:
            break
        trial = problem.solve(candidate, alpha0=solution.alpha)
        trial_h = problem.h_value(candidate, trial)
        if trial_h < h_value:
            return StepResult(candidate, trial_h, trial, eta, True)
        eta *= 0.5
    return StepResult(d, h_value, solution, eta, False)


@dataclass(frozen=True, eq=False)
class InnerState:
    '''
    Converged kernel weights with the dual solution at those weights.

    ``history`` holds ``(d, h)`` for the starting point and every
    accepted step.
    '''
    d: KernelWeights
    solution: DualSolution
    h_value: float
    iteration: int
    converged: bool
    p_plus: np.ndarray
    p_minus: np.ndarray
    history: Tuple[Tuple[np.ndarray, float], ...] = field(default=())


def make_problem(y, bank, config, vectors=None, risk_rows=None) -> InnerProblem:
    '''
    Builds the inner problem for hardened labels ``y`` over ``bank``.

    By default the discrepancy is class-conditional and every row enters
    the SVM risk; ``vectors`` and ``risk_rows`` override either.
    '''
    if vectors is None:
        repaired = adaptation.repair_labels(y)
        vectors = adaptation.scaling_vectors(
            repaired, adaptation.class_counts(repaired, hardened=True))
        y = repaired
    p_plus, p_minus = adaptation.kernel_projections(bank, vectors)
    labels = signed_labels(y)
    if risk_rows is None:
        risk_matrices = bank.matrices
    else:
        risk_matrices = bank.block(risk_rows, risk_rows)
        labels = labels[np.asarray(risk_rows)]
    return InnerProblem(risk_matrices, labels, p_plus, p_minus, config.C,
                        config.theta, config.epsilon, config.solver_tol,
                        config.solver_max_updates)


def run_inner_loop(y, bank, config, vectors=None, risk_rows=None, d0=None,
                   alpha0=None) -> InnerState:
    '''
    Alternates dual solves and weight steps until the weights move less
    than ``config.tol_d`` (infinity norm) or ``config.max_inner`` steps
    have been taken. The returned solution is the one at the final
    weights.
    '''
    problem = make_problem(y, bank, config, vectors, risk_rows)
    n_kernels = problem.n_kernels
    d = (np.full(n_kernels, 1.0 / n_kernels) if d0 is None
         else np.array(d0.values if isinstance(d0, KernelWeights) else d0,
                       dtype=np.float64))
    solution = problem.solve(d, alpha0=alpha0)
    h_value = problem.h_value(d, solution)
    history = [(d.copy(), h_value)]

    if n_kernels == 1:
        return InnerState(KernelWeights(d), solution, h_value, 0, True,
                          problem.p_plus, problem.p_minus, tuple(history))

    converged = False
    iteration = 0
    while iteration < config.max_inner:
        iteration += 1
        gradient, hessian = grad_and_hessian(
            d, problem.p_plus, problem.p_minus, solution.alpha,
            problem.risk_labels, problem.risk_matrices, config.theta,
            config.epsilon)
        step = reduced_gradient_step(problem, d, h_value, solution, gradient,
                                     hessian, config.line_search_min_step)
        delta = float(np.max(np.abs(step.d - d)))
        d, h_value, solution = step.d, step.h_value, step.solution
        if step.accepted:
            history.append((d.copy(), h_value))
        logger.debug('inner_iteration', extra={'fields': {
            'iteration': iteration, 'h': h_value, 'delta_d': delta,
            'eta': step.eta, 'accepted': step.accepted}})
        if delta < config.tol_d:
            converged = True
            break

    return InnerState(KernelWeights(d), solution, h_value, iteration,
                      converged, problem.p_plus, problem.p_minus, tuple(history))
