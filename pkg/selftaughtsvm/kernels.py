#!/usr/bin/env python3
# -*- coding: UTF-8 -*-

# kernels.py is part of self-taught-svm which learns SVM classifiers
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
Base kernels, the bank of base Gram matrices and their convex
combination.

Each base kernel is one of four radial kinds with a width
``gamma = 1.2 ** sigma / feature_dim``. The bank is ordered kind-major,
sigma ascending, so weight vectors from different runs line up.
'''

import enum
import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.spatial.distance import cdist

from selftaughtsvm.errors import (ConfigError, DimMismatchError,
                                  EmptyDatasetError, InvalidKernelCountError)

logger = logging.getLogger(__name__)

GAMMA_BASE = 1.2
WEIGHT_TOLERANCE = 1e-9
DENSE_SAMPLE_WARNING = 2000
KERNEL_COUNTS = (4, 8, 12, 16)


class KernelKind(enum.Enum):
    GAUSSIAN = 'gaussian'
    LAPLACIAN = 'laplacian'
    INV_SQUARE_DIST = 'inv-square-dist'
    INV_DIST = 'inv-dist'


# cumulative order used when fewer than 16 kernels are requested
KIND_ORDER = (KernelKind.GAUSSIAN, KernelKind.LAPLACIAN,
              KernelKind.INV_SQUARE_DIST, KernelKind.INV_DIST)

DEFAULT_SIGMAS = {
    KernelKind.GAUSSIAN: (2.0, 2.5, 3.0, 3.5),
    KernelKind.LAPLACIAN: (3.0, 3.5, 4.0, 4.5),
    KernelKind.INV_SQUARE_DIST: (3.0, 3.5, 4.0, 4.5),
    KernelKind.INV_DIST: (3.0, 3.5, 4.0, 4.5),
}


def gamma_for(sigma, feature_dim):
    return GAMMA_BASE**sigma / feature_dim


def base_kernel_value(kind, gamma, x_i, x_j) -> float:
    '''
    Evaluates one base kernel on a pair of feature rows.

    >>> round(base_kernel_value(KernelKind.GAUSSIAN, 1.0, [0, 0], [1, 0]), 10)
    0.3678794412
    '''
    x_i = np.asarray(x_i, dtype=np.float64)
    x_j = np.asarray(x_j, dtype=np.float64)
    if x_i.shape != x_j.shape:
        raise DimMismatchError(x_i.shape[-1], x_j.shape[-1])
    if not gamma > 0:
        raise ConfigError('gamma must be positive')
    delta = x_i - x_j
    return float(_from_squared_distance(KernelKind(kind), gamma,
                                        np.dot(delta, delta)))


def _from_squared_distance(kind, gamma, squared):
    squared = np.maximum(squared, 0.0)
    if kind is KernelKind.GAUSSIAN:
        return np.exp(-gamma * squared)
    if kind is KernelKind.LAPLACIAN:
        return np.exp(-math.sqrt(gamma) * np.sqrt(squared))
    if kind is KernelKind.INV_SQUARE_DIST:
        return 1.0 / (gamma * squared + 1.0)
    return 1.0 / (math.sqrt(gamma) * np.sqrt(squared) + 1.0)


@dataclass(frozen=True)
class KernelConfig:
    '''
    Which kinds and which sigma exponents make up the bank.

    ``grids`` pairs each kind with its sigma exponents; ``feature_dim``
    divides every gamma.
    '''
    grids: Tuple[Tuple[KernelKind, Tuple[float, ...]], ...]
    feature_dim: int

    def __post_init__(self):
        grids = tuple((KernelKind(kind), tuple(float(s) for s in sigmas))
                      for kind, sigmas in self.grids)
        if not grids or any(not sigmas for _, sigmas in grids):
            raise ConfigError('a kernel config needs at least one kernel')
        if int(self.feature_dim) < 1:
            raise ConfigError('feature_dim must be a positive integer')
        object.__setattr__(self, 'grids', grids)
        object.__setattr__(self, 'feature_dim', int(self.feature_dim))

    @classmethod
    def default(cls, feature_dim):
        return cls(tuple((kind, DEFAULT_SIGMAS[kind]) for kind in KIND_ORDER),
                   feature_dim)

    @classmethod
    def only(cls, kinds, feature_dim):
        '''
        A config restricted to ``kinds`` with their default sigma grids
        '''
        kinds = [KernelKind(kind) for kind in kinds]
        return cls(tuple((kind, DEFAULT_SIGMAS[kind]) for kind in KIND_ORDER
                         if kind in kinds), feature_dim)

    @property
    def n_kernels(self) -> int:
        return sum(len(sigmas) for _, sigmas in self.grids)

    def entries(self):
        '''
        ``(kind, sigma, gamma)`` per base kernel, in bank order
        '''
        return [(kind, sigma, gamma_for(sigma, self.feature_dim))
                for kind, sigmas in self.grids for sigma in sorted(sigmas)]

    def to_dict(self):
        return {
            'feature_dim': self.feature_dim,
            'grids': [[kind.value, list(sigmas)] for kind, sigmas in self.grids],
        }

    @classmethod
    def from_dict(cls, data):
        return cls(tuple((KernelKind(kind), tuple(sigmas))
                         for kind, sigmas in data['grids']),
                   data['feature_dim'])


def kernel_config_for_count(count, feature_dim) -> KernelConfig:
    '''
    4, 8, 12 or 16 kernels: the first ``count // 4`` kinds of
    Gaussian, Laplacian, inverse square distance, inverse distance
    '''
    if count not in KERNEL_COUNTS:
        raise InvalidKernelCountError(
            f'kernel count must be one of {KERNEL_COUNTS}, got {count}')
    return KernelConfig.only(KIND_ORDER[:count // 4], feature_dim)


@dataclass(frozen=True, eq=False)
class KernelWeights:
    '''
    Nonnegative weights over the base kernels summing to one
    '''
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64).reshape(-1)
        if values.size == 0:
            raise ConfigError('kernel weights need at least one entry')
        if np.any(values < 0) or abs(values.sum() - 1.0) > WEIGHT_TOLERANCE:
            raise ConfigError(f'kernel weights must lie on the simplex: {values}')
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)

    @classmethod
    def uniform(cls, n_kernels):
        return cls(np.full(n_kernels, 1.0 / n_kernels))

    def __len__(self):
        return self.values.size


@dataclass(frozen=True, eq=False)
class KernelBank:
    '''
    The base Gram matrices over a stacked sample set, shape (M, n, n)
    '''
    matrices: np.ndarray
    config: KernelConfig
    n_target: int
    n_source: int

    @property
    def n_kernels(self) -> int:
        return self.matrices.shape[0]

    @property
    def n_samples(self) -> int:
        return self.matrices.shape[1]

    @property
    def target_rows(self) -> range:
        return range(0, self.n_target)

    @property
    def source_rows(self) -> range:
        return range(self.n_target, self.n_target + self.n_source)

    def block(self, rows, cols):
        '''
        The (M, len(rows), len(cols)) sub-bank
        '''
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        return self.matrices[:, rows[:, None], cols[None, :]]

    def restrict(self, rows):
        '''
        A bank over a subset of samples; the subset counts as target
        '''
        sub = np.ascontiguousarray(self.block(rows, rows))
        sub.setflags(write=False)
        return KernelBank(sub, self.config, len(rows), 0)


def gram_matrices(features_a, features_b, config: KernelConfig):
    '''
    Base kernel matrices between two sets of rows, shape (M, na, nb)
    '''
    features_a = np.atleast_2d(np.asarray(features_a, dtype=np.float64))
    features_b = np.atleast_2d(np.asarray(features_b, dtype=np.float64))
    if features_a.shape[1] != features_b.shape[1]:
        raise DimMismatchError(features_a.shape[1], features_b.shape[1])
    if features_a.shape[1] != config.feature_dim:
        raise DimMismatchError(config.feature_dim, features_a.shape[1])
    squared = cdist(features_a, features_b, 'sqeuclidean')
    return np.stack([_from_squared_distance(kind, gamma, squared)
                     for kind, _, gamma in config.entries()])


def build_bank(data, config: KernelConfig) -> KernelBank:
    '''
    Computes every base Gram matrix over ``data`` (a StackedData, a
    Dataset or a plain matrix). The matrices are exactly symmetric with
    a unit diagonal.
    '''
    features = np.asarray(data.features if hasattr(data, 'features') else data,
                          dtype=np.float64)
    n_target = getattr(data, 'n_target', features.shape[0])
    n_source = getattr(data, 'n_source', 0)
    if features.shape[0] > DENSE_SAMPLE_WARNING:
        logger.warning('dense kernel bank over many samples',
                       extra={'fields': {'n_samples': features.shape[0],
                                         'n_kernels': config.n_kernels}})
    if features.shape[1] != config.feature_dim:
        raise DimMismatchError(config.feature_dim, features.shape[1])
    squared = cdist(features, features, 'sqeuclidean')
    squared = 0.5 * (squared + squared.T)
    np.fill_diagonal(squared, 0.0)
    matrices = np.stack([_from_squared_distance(kind, gamma, squared)
                         for kind, _, gamma in config.entries()])
    matrices.setflags(write=False)
    return KernelBank(matrices, config, n_target, n_source)


def _weights(d):
    return d.values if isinstance(d, KernelWeights) else np.asarray(d, dtype=np.float64)


def combine(bank: KernelBank, d) -> np.ndarray:
    '''
    The combined Gram matrix sum_m d_m k_m
    '''
    weights = _weights(d)
    if weights.shape != (bank.n_kernels,):
        raise DimMismatchError(bank.n_kernels, weights.size, 'kernel weight count')
    return np.tensordot(weights, bank.matrices, axes=1)


def cross_kernel(config: KernelConfig, training_rows, test_rows, d) -> np.ndarray:
    '''
    Combined kernel values between test rows and training rows.

    A single test row gives a vector over the training rows; a matrix of
    test rows gives a (n_test, n_train) matrix.
    '''
    training_rows = np.atleast_2d(np.asarray(training_rows, dtype=np.float64))
    if training_rows.shape[0] == 0 or training_rows.size == 0:
        raise EmptyDatasetError('cross kernel needs at least one training row')
    test_rows = np.asarray(test_rows, dtype=np.float64)
    single = test_rows.ndim == 1
    test_rows = np.atleast_2d(test_rows)
    weights = _weights(d)
    if weights.shape != (config.n_kernels,):
        raise DimMismatchError(config.n_kernels, weights.size, 'kernel weight count')
    if test_rows.shape[0] == 0:
        return np.empty((0, training_rows.shape[0]))
    values = np.tensordot(weights, gram_matrices(test_rows, training_rows, config),
                          axes=1)
    return values[0] if single else values
