#!/usr/bin/env python3
# -*- coding: UTF-8 -*-

# adaptation.py is part of self-taught-svm which learns SVM classifiers
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
Class-conditional maximum mean discrepancy between target and source.

The squared distance between class means in the kernel feature space is
written as a quadratic form ``s' K s`` with one scaling vector per class:
target entries carry ``label / count`` and source entries
``-label / count``. Matrices of the form ``s s'`` are never built.
'''

from dataclasses import dataclass

import numpy as np

from selftaughtsvm.errors import (DataFormatError, DegenerateCountsError,
                                  DimMismatchError, EmptyDatasetError,
                                  NoNegativeTargetsError,
                                  NoPositiveTargetsError)

HARD_THRESHOLD = 0.5


def _frozen(array):
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class LabelVector:
    '''
    Labels of the stacked sample set: ``n_target`` ground-truth entries
    in {0, 1} followed by source entries in [0, 1].
    '''
    values: np.ndarray
    n_target: int

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64).reshape(-1)
        n_target = int(self.n_target)
        if not 0 <= n_target <= values.size:
            raise DimMismatchError(values.size, n_target, 'target block size')
        if np.any(values < 0.0) or np.any(values > 1.0) or not np.all(np.isfinite(values)):
            raise DataFormatError('labels must lie in [0, 1]')
        if not np.all(np.isin(values[:n_target], (0.0, 1.0))):
            raise DataFormatError('target labels must be exactly 0 or 1')
        object.__setattr__(self, 'values', _frozen(values))
        object.__setattr__(self, 'n_target', n_target)

    @classmethod
    def from_blocks(cls, target_labels, source_labels):
        target_labels = np.asarray(target_labels, dtype=np.float64)
        source_labels = np.asarray(source_labels, dtype=np.float64)
        return cls(np.concatenate([target_labels, source_labels]),
                   target_labels.size)

    @property
    def n_samples(self) -> int:
        return self.values.size

    @property
    def n_source(self) -> int:
        return self.values.size - self.n_target

    @property
    def target(self) -> np.ndarray:
        return self.values[:self.n_target]

    @property
    def source(self) -> np.ndarray:
        return self.values[self.n_target:]

    @property
    def target_mask(self) -> np.ndarray:
        mask = np.zeros(self.values.size, dtype=bool)
        mask[:self.n_target] = True
        return mask

    @property
    def is_hard(self) -> bool:
        return bool(np.all(np.isin(self.values, (0.0, 1.0))))

    def hardened(self):
        '''
        Source entries thresholded at 0.5 (ties go to class 1)
        '''
        hard = np.where(self.values >= HARD_THRESHOLD, 1.0, 0.0)
        hard[:self.n_target] = self.values[:self.n_target]
        return LabelVector(hard, self.n_target)

    def with_source(self, source_values):
        source_values = np.asarray(source_values, dtype=np.float64)
        if source_values.shape != (self.n_source,):
            raise DimMismatchError(self.n_source, source_values.size, 'source block size')
        return LabelVector(np.concatenate([self.target, source_values]), self.n_target)

    def signed(self) -> np.ndarray:
        '''
        +1/-1 labels of the hardened vector
        '''
        return 2.0 * self.hardened().values - 1.0


@dataclass(frozen=True)
class ClassCounts:
    nt_pos: int
    nt_neg: int
    ns_pos: int
    ns_neg: int

    @property
    def n_target(self) -> int:
        return self.nt_pos + self.nt_neg

    @property
    def n_source(self) -> int:
        return self.ns_pos + self.ns_neg

    def require_nonzero(self):
        if min(self.nt_pos, self.nt_neg, self.ns_pos, self.ns_neg) < 1:
            raise DegenerateCountsError(
                f'every class count must be at least one: {self}')
        return self


@dataclass(frozen=True, eq=False)
class AdaptationVectors:
    '''
    Scaling vectors of the positive and negative class terms
    '''
    s_plus: np.ndarray
    s_minus: np.ndarray


def repair_labels(y: LabelVector) -> LabelVector:
    '''
    Hardens ``y`` and makes sure both classes occur in the source block.

    If thresholding leaves no positive (negative) source sample, the
    source entry with the highest (lowest) soft label is moved to the
    empty class. The target block is never changed, so a single-class
    target raises instead.
    '''
    if y.n_target == 0 or y.n_source == 0:
        raise EmptyDatasetError('labels need both a target and a source block')
    target = y.target
    if not np.any(target == 0.0):
        raise NoNegativeTargetsError('every target label is positive')
    if not np.any(target == 1.0):
        raise NoPositiveTargetsError('every target label is negative')

    hard = y.hardened()
    source = hard.source.copy()
    if np.all(source == source[0]):
        if y.n_source < 2:
            raise DegenerateCountsError(
                'a single source sample cannot populate both classes')
        if source[0] == 1.0:
            source[int(np.argmin(y.source))] = 0.0
        else:
            source[int(np.argmax(y.source))] = 1.0
    return hard.with_source(source)


def class_counts(y: LabelVector, hardened=False) -> ClassCounts:
    '''
    Class sizes of the target and source blocks after thresholding and
    repair. With ``hardened`` set the labels must already be 0 or 1.
    '''
    if hardened and not y.is_hard:
        raise DataFormatError('class_counts(hardened=True) got soft labels')
    repaired = repair_labels(y)
    target = repaired.target
    source = repaired.source
    nt_pos = int(np.count_nonzero(target == 1.0))
    ns_pos = int(np.count_nonzero(source == 1.0))
    return ClassCounts(nt_pos, target.size - nt_pos, ns_pos, source.size - ns_pos)


def scaling_vectors(y: LabelVector, counts: ClassCounts) -> AdaptationVectors:
    '''
    ``s_plus = D+ y`` and ``s_minus = D- (1 - y)``, with ``D`` diagonal:
    ``1 / n_target_class`` on target rows and ``-1 / n_source_class``
    on source rows
    '''
    counts.require_nonzero()
    if counts.n_target != y.n_target or counts.n_source != y.n_source:
        raise DimMismatchError((y.n_target, y.n_source),
                               (counts.n_target, counts.n_source), 'class count total')
    values = y.values
    nt = y.n_target
    scale_plus = np.empty(values.size)
    scale_plus[:nt] = 1.0 / counts.nt_pos
    scale_plus[nt:] = -1.0 / counts.ns_pos
    scale_minus = np.empty(values.size)
    scale_minus[:nt] = 1.0 / counts.nt_neg
    scale_minus[nt:] = -1.0 / counts.ns_neg
    return AdaptationVectors(_frozen(scale_plus * values),
                             _frozen(scale_minus * (1.0 - values)))


def scaling_diagonals(counts: ClassCounts):
    '''
    The diagonals of D+ and D-; ``s_plus = d_plus * y`` and
    ``s_minus = d_minus * (1 - y)``
    '''
    counts.require_nonzero()
    nt, ns = counts.n_target, counts.n_source
    d_plus = np.concatenate([np.full(nt, 1.0 / counts.nt_pos),
                             np.full(ns, -1.0 / counts.ns_pos)])
    d_minus = np.concatenate([np.full(nt, 1.0 / counts.nt_neg),
                              np.full(ns, -1.0 / counts.ns_neg)])
    return d_plus, d_minus


def _check_square(K, n):
    K = np.asarray(K, dtype=np.float64)
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise DimMismatchError('square matrix', K.shape, 'Gram matrix shape')
    if K.shape[0] != n:
        raise DimMismatchError(n, K.shape[0], 'Gram matrix size')
    return K


def adaptation_term(K, v: AdaptationVectors) -> float:
    '''
    ``s_plus' K s_plus + s_minus' K s_minus``: the sum of the squared
    distances between target and source class means
    '''
    K = _check_square(K, v.s_plus.size)
    return float(v.s_plus @ K @ v.s_plus + v.s_minus @ K @ v.s_minus)


def kernel_projections(bank, v: AdaptationVectors):
    '''
    Per base kernel quadratic forms ``p_m = s' k_m s`` for both classes
    '''
    matrices = bank.matrices if hasattr(bank, 'matrices') else np.asarray(bank)
    if matrices.shape[1] != v.s_plus.size:
        raise DimMismatchError(matrices.shape[1], v.s_plus.size, 'scaling vector length')
    p_plus = (matrices @ v.s_plus) @ v.s_plus
    p_minus = (matrices @ v.s_minus) @ v.s_minus
    return p_plus, p_minus


def marginal_scaling_vector(n_target, n_source) -> np.ndarray:
    '''
    Label-free scaling vector: ``1 / n_target`` on target rows and
    ``-1 / n_source`` on source rows
    '''
    if n_target < 1 or n_source < 1:
        raise EmptyDatasetError('marginal scaling needs target and source samples')
    return _frozen(np.concatenate([np.full(n_target, 1.0 / n_target),
                                   np.full(n_source, -1.0 / n_source)]))


def marginal_vectors(n_target, n_source) -> AdaptationVectors:
    '''
    The marginal vector in the positive slot and zeros in the negative
    one, so marginal adaptation runs through the same projections
    '''
    s = marginal_scaling_vector(n_target, n_source)
    return AdaptationVectors(s, _frozen(np.zeros_like(s)))


@dataclass(frozen=True)
class DiscrepancyReport:
    marginal: float
    positive: float
    negative: float

    @property
    def conditional(self) -> float:
        return self.positive + self.negative

    def to_dict(self):
        return {'marginal': self.marginal, 'positive': self.positive,
                'negative': self.negative, 'conditional': self.conditional}


def mean_discrepancy_report(K, y: LabelVector) -> DiscrepancyReport:
    '''
    Marginal and class-conditional discrepancies of one labeling
    '''
    K = _check_square(K, y.n_samples)
    s = marginal_scaling_vector(y.n_target, y.n_source)
    repaired = repair_labels(y)
    vectors = scaling_vectors(repaired, class_counts(repaired, hardened=True))
    return DiscrepancyReport(float(s @ K @ s),
                             float(vectors.s_plus @ K @ vectors.s_plus),
                             float(vectors.s_minus @ K @ vectors.s_minus))
