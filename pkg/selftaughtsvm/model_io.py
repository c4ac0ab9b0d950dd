#!/usr/bin/env python3
# -*- coding: UTF-8 -*-

# model_io.py is part of self-taught-svm which learns SVM classifiers
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
Model files: one JSON object with sorted keys and no timestamps, so
that training twice with the same inputs writes identical bytes.
'''

import json

import numpy as np

from selftaughtsvm.adaptation import LabelVector
from selftaughtsvm.config import TrainConfig, Variant
from selftaughtsvm.errors import (ConfigError, DataFormatError,
                                  DimMismatchError, ModelFormatError)
from selftaughtsvm.kernels import KernelConfig, KernelWeights
from selftaughtsvm.trainer import ModelArtifact, TrainingRecord

MODEL_FORMAT = 'selftaughtsvm-model'
MODEL_VERSION = 1


def _list(array):
    return None if array is None else np.asarray(array).tolist()


def model_to_dict(model: ModelArtifact) -> dict:
    return {
        'format': MODEL_FORMAT,
        'version': MODEL_VERSION,
        'variant': model.variant.value,
        'config': model.config.to_dict(),
        'kernel_config': model.kernel_config.to_dict(),
        'support_features': _list(model.support_features),
        'alpha': _list(model.alpha),
        'signed_labels': _list(model.signed_labels),
        'bias': float(model.bias),
        'd': _list(model.d.values),
        'labels': _list(model.labels.values),
        'n_target': model.labels.n_target,
        'converged': bool(model.converged),
        'log': [record.to_dict() for record in model.log],
        'scaler_mean': _list(model.scaler_mean),
        'scaler_scale': _list(model.scaler_scale),
    }


def _array(data, key, ndim):
    value = np.asarray(data[key], dtype=np.float64)
    if value.ndim != ndim:
        raise ModelFormatError(f'{key} must have {ndim} dimension(s)')
    return value


def model_from_dict(data) -> ModelArtifact:
    if not isinstance(data, dict) or data.get('format') != MODEL_FORMAT:
        raise ModelFormatError('not a self-taught-svm model')
    if data.get('version') != MODEL_VERSION:
        raise ModelFormatError(f'unsupported model version {data.get("version")}')
    try:
        optional = {key: None if data.get(key) is None else _array(data, key, 1)
                    for key in ('scaler_mean', 'scaler_scale')}
        model = ModelArtifact(
            variant=Variant(data['variant']),
            config=TrainConfig.from_dict(data['config']),
            kernel_config=KernelConfig.from_dict(data['kernel_config']),
            support_features=_array(data, 'support_features', 2),
            alpha=_array(data, 'alpha', 1),
            signed_labels=_array(data, 'signed_labels', 1),
            bias=float(data['bias']),
            d=KernelWeights(data['d']),
            labels=LabelVector(data['labels'], data['n_target']),
            converged=bool(data['converged']),
            log=tuple(TrainingRecord.from_dict(r) for r in data['log']),
            **optional)
    except (KeyError, TypeError, ValueError, ConfigError, DataFormatError,
            DimMismatchError) as e:
        raise ModelFormatError(f'malformed model: {e}') from e
    n = model.support_features.shape[0]
    if model.alpha.size != n or model.signed_labels.size != n:
        raise ModelFormatError('dual coefficients do not match the training rows')
    if len(model.d) != model.kernel_config.n_kernels:
        raise ModelFormatError('kernel weights do not match the kernel config')
    if model.support_features.shape[1] != model.kernel_config.feature_dim:
        raise ModelFormatError('training rows do not match the kernel config')
    return model


def save_model(model: ModelArtifact, path):
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(model_to_dict(model), f, sort_keys=True, indent=1)
        f.write('\n')


def load_model(path) -> ModelArtifact:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except FileNotFoundError as e:
        raise ModelFormatError(f'{path}: no such model file') from e
    except json.JSONDecodeError as e:
        raise ModelFormatError(f'{path}: {e}') from e
    return model_from_dict(data)
