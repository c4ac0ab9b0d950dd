#!/usr/bin/env python3
# -*- coding: UTF-8 -*-

# dataset.py is part of self-taught-svm which learns SVM classifiers
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
Target, source and test datasets: loading, writing, stacking and
synthetic Gaussian clouds.

Labels are kept as {0, 1}; conversion to +1/-1 happens only inside the
SVM solver.
'''

import enum
import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from sklearn.preprocessing import StandardScaler

from selftaughtsvm.errors import (DataFormatError, DimMismatchError,
                                  EmptyDatasetError, InsufficientPositivesError,
                                  NonFiniteFeatureError)

logger = logging.getLogger(__name__)

LABEL_COLUMN = 'label'
_NAN_SPELLINGS = {'nan', '+nan', '-nan'}


class Role(enum.Enum):
    '''
    What a dataset is used for; decides whether labels must be present
    '''
    TARGET = 'target'
    SOURCE = 'source'
    TEST = 'test'


def _frozen(array):
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Dataset:
    '''
    A feature matrix (one row per sample) with optional {0, 1} labels.

    Target datasets must be labeled, source datasets must not be. Test
    datasets may or may not carry labels and may be empty; every other
    dataset has at least one row. Arrays are read-only after
    construction.
    '''
    features: np.ndarray
    labels: Optional[np.ndarray] = None
    role: Role = Role.TARGET
    feature_names: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        role = Role(self.role)
        features = np.array(self.features, dtype=np.float64)
        if features.ndim == 1 and features.size == 0:
            features = features.reshape(0, 1)
        if features.ndim != 2:
            raise DataFormatError(
                f'features must be a 2-D matrix, got {features.ndim} dimensions')
        if features.shape[1] < 1:
            raise DataFormatError('features need at least one column')
        if features.shape[0] == 0 and role is not Role.TEST:
            raise EmptyDatasetError(f'{role.value} dataset has no samples')
        if not np.all(np.isfinite(features)):
            row, col = np.argwhere(~np.isfinite(features))[0]
            raise NonFiniteFeatureError(
                f'non-finite feature value at row {row}, column {col}')

        labels = self.labels
        if labels is not None:
            if role is Role.SOURCE:
                raise DataFormatError('source datasets are unlabeled')
            labels = np.asarray(labels)
            if labels.shape != (features.shape[0],):
                raise DimMismatchError(features.shape[0], labels.shape[0]
                                       if labels.ndim else 0, 'label count')
            if not np.all(np.isin(labels, (0, 1))):
                raise DataFormatError('labels must be 0 or 1')
            labels = _frozen(labels.astype(np.int64))
        elif role is Role.TARGET:
            raise DataFormatError('target datasets must be labeled')

        names = self.feature_names
        if names is not None:
            names = tuple(str(name) for name in names)
            if len(names) != features.shape[1]:
                raise DimMismatchError(features.shape[1], len(names),
                                       'feature name count')

        object.__setattr__(self, 'role', role)
        object.__setattr__(self, 'features', _frozen(features))
        object.__setattr__(self, 'labels', labels)
        object.__setattr__(self, 'feature_names', names)

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def dim(self) -> int:
        return self.features.shape[1]

    @property
    def is_labeled(self) -> bool:
        return self.labels is not None

    def take(self, rows, role=None):
        '''
        A new dataset made of the given rows, optionally with another role
        '''
        rows = np.asarray(rows, dtype=np.int64)
        role = self.role if role is None else Role(role)
        labels = None
        if self.labels is not None and role is not Role.SOURCE:
            labels = self.labels[rows]
        return Dataset(self.features[rows], labels, role, self.feature_names)

    def with_role(self, role):
        '''
        The same rows under another role; labels are dropped for sources
        '''
        return self.take(np.arange(self.n_samples), role)


@dataclass(frozen=True)
class SynthSpec:
    '''
    Isotropic Gaussian clouds, one per class: cloud ``i`` holds
    ``counts[i]`` samples labeled ``i`` around ``means[i]``.
    '''
    means: Tuple[Tuple[float, ...], ...]
    std: Tuple[float, ...]
    counts: Tuple[int, ...]
    seed: int = 0

    def __post_init__(self):
        means = tuple(tuple(float(v) for v in mean) for mean in self.means)
        n_clouds = len(means)
        if n_clouds != 2:
            raise DataFormatError(
                f'binary labels need exactly two clouds, got {n_clouds}')
        if len({len(mean) for mean in means}) != 1 or len(means[0]) < 1:
            raise DimMismatchError(len(means[0]), len(means[1]), 'cloud mean dimensionality')
        std = self.std
        if np.ndim(std) == 0:
            std = (std,) * n_clouds
        std = tuple(float(s) for s in std)
        counts = tuple(int(c) for c in self.counts)
        if len(std) != n_clouds or len(counts) != n_clouds:
            raise DimMismatchError(n_clouds, (len(std), len(counts)), 'cloud count')
        if any(not s > 0 for s in std):
            raise DataFormatError('standard deviations must be positive')
        if any(c < 1 for c in counts):
            raise DataFormatError('every cloud needs at least one sample')
        if not 0 <= int(self.seed) < 2**64:
            raise DataFormatError('seed must be a 64-bit unsigned integer')
        object.__setattr__(self, 'means', means)
        object.__setattr__(self, 'std', std)
        object.__setattr__(self, 'counts', counts)
        object.__setattr__(self, 'seed', int(self.seed))

    @property
    def dim(self) -> int:
        return len(self.means[0])


@dataclass(frozen=True, eq=False)
class StackedData:
    '''
    Target rows followed by source rows; index ``i < n_target`` is target
    row ``i``, anything after is source row ``i - n_target``
    '''
    features: np.ndarray
    target_labels: np.ndarray
    n_target: int
    n_source: int
    feature_names: Optional[Tuple[str, ...]] = field(default=None)

    @property
    def n_samples(self) -> int:
        return self.n_target + self.n_source

    @property
    def dim(self) -> int:
        return self.features.shape[1]

    @property
    def target_rows(self) -> range:
        return range(0, self.n_target)

    @property
    def source_rows(self) -> range:
        return range(self.n_target, self.n_target + self.n_source)


def load_csv(path, role) -> Dataset:
    '''
    Reads a comma separated file with a header row.

    Every column except ``label`` is a feature, in file order. Target
    files must have a ``label`` column; a ``label`` column in a source
    file is ignored.
    '''
    role = Role(role)
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    except FileNotFoundError as e:
        raise DataFormatError(f'no such file: {path}') from e
    except pd.errors.EmptyDataError as e:
        raise EmptyDatasetError(f'{path} is empty') from e
    except pd.errors.ParserError as e:
        raise DataFormatError(f'{path}: ragged rows ({e})') from e

    frame.columns = [str(column).strip() for column in frame.columns]
    if frame.isna().to_numpy().any():
        raise DataFormatError(f'{path}: ragged rows')

    label_text = None
    if LABEL_COLUMN in frame.columns:
        label_text = frame.pop(LABEL_COLUMN)
        if role is Role.SOURCE:
            logger.warning('ignoring label column of source file',
                           extra={'fields': {'path': str(path)}})
            label_text = None
    elif role is Role.TARGET:
        raise DataFormatError(f'{path}: target files need a "{LABEL_COLUMN}" column')

    if frame.shape[1] == 0:
        raise DataFormatError(f'{path}: no feature columns')
    features = np.column_stack(
        [_parse_column(frame[column], path, column) for column in frame.columns]
    ) if frame.shape[0] else np.empty((0, frame.shape[1]))

    labels = None
    if label_text is not None:
        labels = _parse_column(label_text, path, LABEL_COLUMN)
        if not np.all(np.isin(labels, (0.0, 1.0))):
            raise DataFormatError(f'{path}: labels must be 0 or 1')
        labels = labels.astype(np.int64)

    return Dataset(features, labels, role, tuple(frame.columns))


def _as_float(cell):
    try:
        return float(cell)
    except ValueError:
        return np.nan


def _parse_column(text, path, column):
    text = text.str.strip()
    if (text == '').any():
        raise DataFormatError(f'{path}: empty cell in column "{column}"')
    values = text.map(_as_float)
    bad = values.isna() & ~text.str.lower().isin(_NAN_SPELLINGS)
    if bad.any():
        row = int(np.flatnonzero(bad.to_numpy())[0])
        raise DataFormatError(
            f'{path}: non-numeric cell {text.iloc[row]!r} in column "{column}"')
    values = values.to_numpy(dtype=np.float64)
    if column != LABEL_COLUMN and not np.all(np.isfinite(values)):
        row = int(np.flatnonzero(~np.isfinite(values))[0])
        raise NonFiniteFeatureError(
            f'{path}: non-finite value in column "{column}", row {row}')
    return values


def write_csv(dataset: Dataset, path):
    '''
    Writes a dataset in the format load_csv reads. Floats are written in
    shortest round-trip form so reloading reproduces them exactly.
    '''
    names = dataset.feature_names or tuple(
        f'f{i + 1}' for i in range(dataset.dim))
    frame = pd.DataFrame(dataset.features, columns=list(names))
    if dataset.labels is not None:
        frame[LABEL_COLUMN] = dataset.labels
    frame.to_csv(path, index=False, float_format=None)


def generate_clouds(spec: SynthSpec, role=Role.TARGET) -> Dataset:
    '''
    Draws every cloud of ``spec`` from an isotropic Gaussian; the same
    seed always gives the same matrix. Labels follow the cloud index
    unless the role is Source.
    '''
    role = Role(role)
    rng = np.random.default_rng(spec.seed)
    blocks = []
    labels = []
    for index, (mean, std, count) in enumerate(
            zip(spec.means, spec.std, spec.counts)):
        blocks.append(rng.normal(loc=mean, scale=std, size=(count, spec.dim)))
        labels.append(np.full(count, index, dtype=np.int64))
    return Dataset(np.vstack(blocks),
                   None if role is Role.SOURCE else np.concatenate(labels),
                   role)


def stack(target: Dataset, source: Dataset) -> StackedData:
    '''
    Concatenates target rows (original order) and then source rows
    '''
    if target.n_samples == 0 or source.n_samples == 0:
        raise EmptyDatasetError('stacking needs non-empty target and source')
    if target.dim != source.dim:
        raise DimMismatchError(target.dim, source.dim)
    if target.labels is None:
        raise DataFormatError('the target block must be labeled')
    features = _frozen(np.vstack([target.features, source.features]))
    return StackedData(features, target.labels, target.n_samples,
                       source.n_samples, target.feature_names)


def standardize(target: Dataset, source: Dataset):
    '''
    Z-scores both datasets with statistics fitted on the stacked rows;
    returns the rescaled datasets and the fitted scaler
    '''
    if target.dim != source.dim:
        raise DimMismatchError(target.dim, source.dim)
    scaler = StandardScaler().fit(np.vstack([target.features, source.features]))
    return (Dataset(scaler.transform(target.features), target.labels,
                    target.role, target.feature_names),
            Dataset(scaler.transform(source.features), source.labels,
                    source.role, source.feature_names),
            scaler)


def class_rows(dataset: Dataset, label: int) -> np.ndarray:
    '''
    Row indices of a labeled dataset that carry ``label``
    '''
    if dataset.labels is None:
        raise DataFormatError('dataset is unlabeled')
    return np.flatnonzero(dataset.labels == label)


def clouds_spec(means: Sequence[Sequence[float]], std, counts, seed=0) -> SynthSpec:
    '''
    Convenience constructor that accepts lists
    '''
    return SynthSpec(tuple(tuple(m) for m in means), std, tuple(counts), seed)


def subsample_class(dataset: Dataset, label: int, n: int, rng) -> Dataset:
    '''
    ``n`` rows of class ``label`` drawn without replacement with ``rng``
    (a numpy Generator), in their original order
    '''
    rows = class_rows(dataset, label)
    if n > rows.size:
        raise InsufficientPositivesError(
            f'asked for {n} samples of class {label}, only {rows.size} available')
    chosen = np.sort(rng.choice(rows, size=n, replace=False))
    return dataset.take(chosen)
