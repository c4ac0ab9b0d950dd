#!/usr/bin/env python3
# -*- coding: UTF-8 -*-

# trainer.py is part of self-taught-svm which learns SVM classifiers
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
End-to-end training of the four method variants, and prediction.

The self-taught loop:

1. build the base kernels over target and source rows;
2. train an SVM with uniform kernel weights on the target rows and use
   it to label the source rows;
3. repeat: learn kernel weights and the SVM for fixed labels, then
   refine the source labels for fixed weights and SVM. Refined labels
   replace the current ones only if, after refitting weights and SVM on
   them, the outer objective (kernel/SVM objective plus label penalty)
   is lower. Stop when the weights stop moving and no source label
   flips.
'''

import dataclasses
import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from sklearn.preprocessing import StandardScaler

from selftaughtsvm import adaptation, dataset, kernels, mkl, refine
from selftaughtsvm.adaptation import LabelVector
from selftaughtsvm.config import PenaltyScope, TrainConfig, Variant
from selftaughtsvm.errors import (DimMismatchError, EmptyDatasetError,
                                  NoNegativeTargetsError,
                                  NoPositiveTargetsError)
from selftaughtsvm.kernels import KernelConfig, KernelWeights
from selftaughtsvm.svm import DualSolution, predict_labels, solve_dual

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainingRecord:
    '''
    One outer iteration: the kernel/SVM objective and the outer
    objective of the labels kept at its end, how far the weights moved
    and how many source labels flipped (0 when the refined labels were
    turned down)
    '''
    outer_iteration: int
    h_value: float
    l_value: float
    delta_d: float
    flips: int
    inner_iterations: int
    inner_converged: bool
    kept_incumbent: bool

    def to_dict(self):
        return {
            'outer_iteration': self.outer_iteration,
            'h': self.h_value,
            'L': self.l_value,
            'delta_d': self.delta_d,
            'flips': self.flips,
            'inner_iterations': self.inner_iterations,
            'inner_converged': self.inner_converged,
            'kept_incumbent': self.kept_incumbent,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(data['outer_iteration'], data['h'], data['L'],
                   data['delta_d'], data['flips'], data['inner_iterations'],
                   data['inner_converged'], data['kept_incumbent'])


@dataclass(frozen=True, eq=False)
class ModelArtifact:
    '''
    A trained classifier: training rows, dual coefficients, bias, kernel
    weights and kernel config, plus the final labels and training log.

    ``scaler_mean``/``scaler_scale`` are set when features were
    standardized; prediction applies them to incoming rows.
    '''
    variant: Variant
    config: TrainConfig
    kernel_config: KernelConfig
    support_features: np.ndarray
    alpha: np.ndarray
    signed_labels: np.ndarray
    bias: float
    d: KernelWeights
    labels: LabelVector
    converged: bool
    log: Tuple[TrainingRecord, ...] = field(default=())
    scaler_mean: Optional[np.ndarray] = None
    scaler_scale: Optional[np.ndarray] = None

    @property
    def coefficients(self) -> np.ndarray:
        return self.alpha * self.signed_labels

    @property
    def feature_dim(self) -> int:
        return self.kernel_config.feature_dim


def _require_both_classes(labels):
    labels = np.asarray(labels)
    if not np.any(labels == 0):
        raise NoNegativeTargetsError('every target label is positive')
    if not np.any(labels == 1):
        raise NoPositiveTargetsError('every target label is negative')


def init_labels(target, source, config: TrainConfig, bank=None) -> LabelVector:
    '''
    Target labels followed by the predictions, on the source rows, of an
    SVM trained on the target rows with uniform kernel weights
    '''
    _require_both_classes(target.labels)
    if bank is None:
        stacked = dataset.stack(target, source)
        bank = kernels.build_bank(stacked, kernels.kernel_config_for_count(
            config.kernel_count, stacked.dim))
    K = kernels.combine(bank, KernelWeights.uniform(bank.n_kernels))
    nt = target.n_samples
    solution = solve_dual(K[:nt, :nt], target.labels, config.C, config.theta,
                          tol=config.solver_tol,
                          max_updates=config.solver_max_updates)
    scores = K[nt:, :nt] @ solution.coefficients + solution.bias
    return LabelVector.from_blocks(target.labels, predict_labels(scores))


def train(target, source, config: TrainConfig) -> ModelArtifact:
    '''
    Trains ``config.variant``. The baseline ignores ``source`` (which
    may be None); every other variant needs it.

    Running out of outer iterations isn't an error: the model comes
    back with ``converged`` unset.
    '''
    _require_both_classes(target.labels)
    scaler = None
    if source is not None and source.dim != target.dim:
        raise DimMismatchError(target.dim, source.dim)
    if config.standardize:
        if source is None:
            scaler = StandardScaler().fit(target.features)
            target = dataset.Dataset(scaler.transform(target.features),
                                     target.labels, target.role,
                                     target.feature_names)
        else:
            target, source, scaler = dataset.standardize(target, source)

    kernel_config = kernels.kernel_config_for_count(config.kernel_count, target.dim)
    if config.variant is Variant.SVM_BASELINE:
        model = _train_baseline(target, config, kernel_config)
    else:
        if source is None:
            raise EmptyDatasetError(
                f'variant {config.variant.value} needs source data')
        stacked = dataset.stack(target, source)
        bank = kernels.build_bank(stacked, kernel_config)
        y0 = adaptation.repair_labels(init_labels(target, source, config, bank))
        if config.variant is Variant.STSVM_I:
            model = _train_single_pass(stacked, bank, y0, config)
        elif config.variant is Variant.DTSVM_LIKE:
            model = _train_marginal(stacked, bank, y0, config)
        else:
            model = _train_self_taught(stacked, bank, y0, config)

    if scaler is not None:
        model = _with_scaler(model, scaler)
    logger.info('training_finished', extra={'fields': {
        'variant': config.variant.value, 'converged': model.converged,
        'outer_iterations': len(model.log), 'd': model.d.values,
        'n_support': int(np.count_nonzero(model.alpha > 0))}})
    return model


def _with_scaler(model, scaler):
    return dataclasses.replace(
        model, scaler_mean=np.asarray(scaler.mean_, dtype=np.float64),
        scaler_scale=np.asarray(scaler.scale_, dtype=np.float64))


def _artifact(config, bank, features, solution: DualSolution, d, labels,
              converged, log=()):
    return ModelArtifact(
        variant=config.variant, config=config, kernel_config=bank.config,
        support_features=np.asarray(features), alpha=solution.alpha,
        signed_labels=solution.signed_labels, bias=solution.bias, d=d,
        labels=labels, converged=converged, log=tuple(log))


def _train_baseline(target, config, kernel_config):
    bank = kernels.build_bank(target, kernel_config)
    d = KernelWeights.uniform(bank.n_kernels)
    solution = solve_dual(kernels.combine(bank, d), target.labels, config.C,
                          config.theta, tol=config.solver_tol,
                          max_updates=config.solver_max_updates)
    labels = LabelVector(target.labels, target.n_samples)
    return _artifact(config, bank, target.features, solution, d, labels, True)


def _single_record(state: mkl.InnerState, outer=1):
    return TrainingRecord(outer, state.h_value, state.h_value,
                          float(np.max(np.abs(state.d.values - 1.0 / len(state.d)))),
                          0, state.iteration, state.converged, False)


def _train_single_pass(stacked, bank, y0, config):
    state = mkl.run_inner_loop(y0, bank, config)
    record = _single_record(state)
    logger.info('outer_iteration', extra={'fields': record.to_dict()})
    return _artifact(config, bank, stacked.features, state.solution, state.d,
                     y0, state.converged, [record])


def _train_marginal(stacked, bank, y0, config):
    vectors = adaptation.marginal_vectors(stacked.n_target, stacked.n_source)
    rows = np.arange(stacked.n_target)
    state = mkl.run_inner_loop(y0, bank, config, vectors=vectors, risk_rows=rows)
    record = _single_record(state)
    logger.info('outer_iteration', extra={'fields': record.to_dict()})
    labels = LabelVector(stacked.target_labels, stacked.n_target)
    return _artifact(config, bank, stacked.features[:stacked.n_target],
                     state.solution, state.d, labels, state.converged, [record])


def refinement_problem(bank, state: mkl.InnerState, y: LabelVector,
                       config: TrainConfig) -> refine.RefinementProblem:
    '''
    The label problem at the weights and dual solution of ``state``
    '''
    return refine.RefinementProblem(
        K=kernels.combine(bank, state.d), solution=state.solution,
        lam=config.lam, y_ref=refine.reference_labels(y),
        counts=adaptation.class_counts(y, hardened=True), theta=config.theta,
        penalty_scope=config.penalty_scope, clamp_target=config.clamp_target)


def outer_objective(state: mkl.InnerState, y: LabelVector,
                    config: TrainConfig) -> float:
    '''
    The kernel/SVM objective at the weights of ``state`` plus the label
    penalty of ``y`` against the true target labels
    '''
    residual = y.values - refine.reference_labels(y).values
    if config.penalty_scope is not PenaltyScope.FULL:
        residual = residual[:y.n_target]
    return float(state.h_value + config.lam * (residual @ residual))


def _train_self_taught(stacked, bank, y0, config):
    y = y0
    d_start = KernelWeights.uniform(bank.n_kernels)
    state = mkl.run_inner_loop(y, bank, config, d0=d_start)
    log = []
    converged = False
    for outer in range(1, config.max_outer + 1):
        delta_d = float(np.max(np.abs(state.d.values - d_start.values)))
        current = outer_objective(state, y, config)
        value, candidate, flips = current, None, 0
        if config.refine:
            problem = refinement_problem(bank, state, y, config)
            result = refine.refine_labels(problem, y, config.refine_tol,
                                          config.refine_max_iter)
            refined = adaptation.repair_labels(result.labels)
            changed = int(np.count_nonzero(refined.source != y.source))
            if changed:
                trial = mkl.run_inner_loop(refined, bank, config, d0=state.d,
                                           alpha0=state.solution.alpha)
                trial_value = outer_objective(trial, refined, config)
                # new labels only when the refitted objective drops
                if trial_value < current:
                    value, candidate, flips = trial_value, trial, changed
        kept = candidate is None
        record = TrainingRecord(outer, (state if kept else candidate).h_value,
                                value, delta_d, flips, state.iteration,
                                state.converged, kept)
        log.append(record)
        logger.info('outer_iteration', extra={'fields': record.to_dict()})

        if not kept:
            d_start, state, y = state.d, candidate, refined
        if flips == 0 and delta_d < config.tol_d:
            converged = True
            break
        if kept and outer < config.max_outer:
            d_start = state.d
            state = mkl.run_inner_loop(y, bank, config, d0=state.d,
                                       alpha0=state.solution.alpha)

    return _artifact(config, bank, stacked.features, state.solution, state.d,
                     y, converged, log)


def predict(model: ModelArtifact, X):
    '''
    Returns ``(labels, scores)`` for the rows of ``X`` (a Dataset or a
    matrix); labels are 1 where the score is at least zero
    '''
    features = X.features if hasattr(X, 'features') else np.asarray(X, dtype=np.float64)
    features = np.asarray(features, dtype=np.float64)
    if features.ndim == 1 and features.size == 0:
        features = features.reshape(0, model.feature_dim)
    features = np.atleast_2d(features)
    if features.shape[1] != model.feature_dim:
        raise DimMismatchError(model.feature_dim, features.shape[1])
    if features.shape[0] == 0:
        return np.empty(0, dtype=np.int64), np.empty(0)
    if model.scaler_mean is not None:
        features = (features - model.scaler_mean) / model.scaler_scale
    values = kernels.cross_kernel(model.kernel_config, model.support_features,
                                  features, model.d)
    scores = values @ model.coefficients + model.bias
    return predict_labels(scores), scores
