#!/usr/bin/env python3
# -*- coding: UTF-8 -*-

# config.py is part of self-taught-svm which learns SVM classifiers
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
Training configuration.

Defaults reproduce the published setting: C = 10, theta = 1,
epsilon = 1e-4 and sixteen base kernels. The weight of the label
penalty (``lam``) was never reported; 1 is our choice and the evaluation
module has a sweep over it.
'''

import dataclasses
import enum
import json
from dataclasses import dataclass

from selftaughtsvm.errors import ConfigError, InvalidKernelCountError
from selftaughtsvm.kernels import KERNEL_COUNTS


class Variant(enum.Enum):
    '''
    stsvm: full alternation of kernel weights, SVM and source labels.
    stsvm-i: one kernel/SVM pass on the initial labels, no relabeling.
    dtsvm: marginal discrepancy and target-only risk.
    svm: uniform kernel weights, target data only.
    '''
    STSVM = 'stsvm'
    STSVM_I = 'stsvm-i'
    DTSVM_LIKE = 'dtsvm'
    SVM_BASELINE = 'svm'


class PenaltyScope(enum.Enum):
    '''
    Which coordinates the label penalty pulls towards the reference
    labels: the target block only, or the whole vector (source towards 0)
    '''
    TARGET_ONLY = 'target_only'
    FULL = 'full'


@dataclass(frozen=True)
class TrainConfig:
    C: float = 10.0
    theta: float = 1.0
    epsilon: float = 1e-4
    lam: float = 1.0
    kernel_count: int = 16
    tol_d: float = 1e-4
    max_inner: int = 100
    max_outer: int = 20
    variant: Variant = Variant.STSVM
    seed: int = 0
    penalty_scope: PenaltyScope = PenaltyScope.TARGET_ONLY
    clamp_target: bool = True
    refine: bool = True
    standardize: bool = False
    solver_tol: float = 1e-6
    solver_max_updates: int = 10**6
    refine_tol: float = 1e-6
    refine_max_iter: int = 500
    line_search_min_step: float = 1e-10

    def __post_init__(self):
        object.__setattr__(self, 'variant', Variant(self.variant))
        object.__setattr__(self, 'penalty_scope', PenaltyScope(self.penalty_scope))
        for name in ('C', 'theta', 'epsilon', 'tol_d', 'solver_tol',
                     'refine_tol', 'line_search_min_step'):
            if not getattr(self, name) > 0:
                raise ConfigError(f'{name} must be positive, got {getattr(self, name)}')
        if not self.lam >= 0:
            raise ConfigError(f'lam must be nonnegative, got {self.lam}')
        for name in ('max_inner', 'max_outer', 'solver_max_updates',
                     'refine_max_iter'):
            if int(getattr(self, name)) < 1:
                raise ConfigError(f'{name} must be at least 1')
        if self.kernel_count not in KERNEL_COUNTS:
            raise InvalidKernelCountError(
                f'kernel count must be one of {KERNEL_COUNTS}, got {self.kernel_count}')
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigError('seed must be a 64-bit unsigned integer')

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def to_dict(self):
        data = dataclasses.asdict(self)
        data['variant'] = self.variant.value
        data['penalty_scope'] = self.penalty_scope.value
        return data

    @classmethod
    def from_dict(cls, data, base=None):
        '''
        A config from ``data`` layered over ``base`` (defaults when None);
        unknown keys are rejected
        '''
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f'unknown config keys: {", ".join(unknown)}')
        return dataclasses.replace(base if base is not None else cls(), **data)


def load_config(path, base=None) -> TrainConfig:
    '''
    Reads a JSON object of overrides
    '''
    with open(path, 'r', encoding='utf-8') as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f'{path}: {e}') from e
    if not isinstance(data, dict):
        raise ConfigError(f'{path}: expected a JSON object')
    return TrainConfig.from_dict(data, base)
