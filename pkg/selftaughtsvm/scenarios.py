#!/usr/bin/env python3
# -*- coding: UTF-8 -*-

# scenarios.py is part of self-taught-svm which learns SVM classifiers
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
Synthetic transfer scenarios: a labeled target set, an unlabeled source
set and a labeled test set drawn from the target distribution.

Every scenario is a function of a seed and keyword parameters. The
target, source and test draws use independent streams spawned from the
seed, so changing one set's size leaves the others unchanged.
'''

from dataclasses import dataclass
from typing import Optional

import numpy as np

from selftaughtsvm import dataset
from selftaughtsvm.dataset import Dataset, Role
from selftaughtsvm.errors import ConfigError, InsufficientPositivesError

# figure2: tight target clouds and a source far off along the diagonal
TARGET_MEANS = ((0.0, 0.0), (3.0, 0.0))
SOURCE_MEANS = ((10.0, 10.0), (13.0, 13.0))
CLOUD_STD = 0.5
# unrelated and positives: overlapping classes and a small source shift
OVERLAP_MEANS = ((0.0, 0.0), (2.5, 0.0))
OVERLAP_STD = 1.0
SOURCE_SHIFT = (0.0, 2.0)
# the largest positive pool of the positive-count experiment
MAX_POSITIVES = 14
NEGATIVE_TARGETS = 10


@dataclass(frozen=True, eq=False)
class ScenarioData:
    '''
    ``source_labels`` are the true classes of the source rows; training
    never sees them, reports do
    '''
    target: Dataset
    source: Dataset
    test: Dataset
    source_labels: Optional[np.ndarray] = None


def _seeds(seed, n):
    children = np.random.SeedSequence(int(seed)).spawn(n)
    return [int(child.generate_state(1, dtype=np.uint64)[0]) for child in children]


def _shifted(means, shift):
    return tuple(tuple(m + s for m, s in zip(mean, shift)) for mean in means)


def _as_source(clouds: Dataset):
    return clouds.with_role(Role.SOURCE), clouds.labels


def figure2(seed, n_target=5, n_source=200, n_test=50, source_means=SOURCE_MEANS,
            std=CLOUD_STD):
    '''
    Two target clouds of ``n_target`` points each and two source clouds
    of ``n_source`` points centred on ``source_means``
    '''
    target_seed, source_seed, test_seed = _seeds(seed, 3)
    target = dataset.generate_clouds(dataset.clouds_spec(
        TARGET_MEANS, std, (n_target, n_target), target_seed))
    source, source_labels = _as_source(dataset.generate_clouds(dataset.clouds_spec(
        source_means, std, (n_source, n_source), source_seed)))
    test = dataset.generate_clouds(dataset.clouds_spec(
        TARGET_MEANS, std, (n_test, n_test), test_seed), Role.TEST)
    return ScenarioData(target, source, test, source_labels)


def unrelated(seed, n_target=5, n_source=200, n_test=50):
    '''
    Source classes split along the second axis while target classes
    split along the first, so source geometry says nothing about the
    target boundary
    '''
    target_seed, source_seed, test_seed = _seeds(seed, 3)
    target = dataset.generate_clouds(dataset.clouds_spec(
        OVERLAP_MEANS, OVERLAP_STD, (n_target, n_target), target_seed))
    source, source_labels = _as_source(dataset.generate_clouds(dataset.clouds_spec(
        ((1.25, -2.5), (1.25, 2.5)), OVERLAP_STD, (n_source, n_source),
        source_seed)))
    test = dataset.generate_clouds(dataset.clouds_spec(
        OVERLAP_MEANS, OVERLAP_STD, (n_test, n_test), test_seed), Role.TEST)
    return ScenarioData(target, source, test, source_labels)


def positives(seed, n_pos=5, n_neg=NEGATIVE_TARGETS, n_source=200, n_test=50):
    '''
    An imbalanced target set: ``n_pos`` positives picked from a pool of
    MAX_POSITIVES and ``n_neg`` negatives from overlapping classes,
    with a source shifted by SOURCE_SHIFT and a balanced test set
    '''
    if n_pos < 1:
        raise ConfigError('n_pos must be at least 1')
    if n_pos > MAX_POSITIVES:
        raise InsufficientPositivesError(
            f'asked for {n_pos} positives, the pool has {MAX_POSITIVES}')
    pool_seed, pick_seed, source_seed, test_seed = _seeds(seed, 4)
    pool = dataset.generate_clouds(dataset.clouds_spec(
        OVERLAP_MEANS, OVERLAP_STD, (n_neg, MAX_POSITIVES), pool_seed))
    chosen = dataset.subsample_class(pool, 1, n_pos, np.random.default_rng(pick_seed))
    target = Dataset(np.vstack([pool.take(dataset.class_rows(pool, 0)).features,
                                chosen.features]),
                     np.concatenate([np.zeros(n_neg, dtype=np.int64),
                                     np.ones(n_pos, dtype=np.int64)]))
    source, source_labels = _as_source(dataset.generate_clouds(dataset.clouds_spec(
        _shifted(OVERLAP_MEANS, SOURCE_SHIFT), OVERLAP_STD, (n_source, n_source),
        source_seed)))
    test = dataset.generate_clouds(dataset.clouds_spec(
        OVERLAP_MEANS, OVERLAP_STD, (n_test, n_test), test_seed), Role.TEST)
    return ScenarioData(target, source, test, source_labels)


def conditional_shift(seed, n_per_class=20, separation=2.0, std=0.3):
    '''
    Source rows are the target rows with every class swapped (and the
    row order shuffled): both domains have the same marginal
    distribution while each class sits on opposite sides in the two
    domains
    '''
    cloud_seed, order_seed, test_seed = _seeds(seed, 3)
    means = ((-separation, 0.0), (separation, 0.0))
    target = dataset.generate_clouds(dataset.clouds_spec(
        means, std, (n_per_class, n_per_class), cloud_seed))
    order = np.random.default_rng(order_seed).permutation(target.n_samples)
    source = target.take(order, Role.SOURCE)
    source_labels = 1 - target.labels[order]
    test = dataset.generate_clouds(dataset.clouds_spec(
        means, std, (n_per_class, n_per_class), test_seed), Role.TEST)
    return ScenarioData(target, source, test, source_labels)


SCENARIOS = {
    'figure2': figure2,
    'unrelated': unrelated,
    'positives': positives,
    'conditional-shift': conditional_shift,
}


def build(name, seed, **params) -> ScenarioData:
    try:
        scenario = SCENARIOS[name]
    except KeyError as e:
        raise ConfigError(f'unknown scenario {name!r}; choose from '
                          f'{", ".join(sorted(SCENARIOS))}') from e
    return scenario(seed, **params)
