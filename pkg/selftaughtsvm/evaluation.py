#!/usr/bin/env python3
# -*- coding: UTF-8 -*-

# evaluation.py is part of self-taught-svm which learns SVM classifiers
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
Classification metrics and repeated-trial experiments.

A trial regenerates a scenario from its seed, trains one variant and
scores it on the scenario's test set. Trials with seeds
``base .. base + n - 1`` make up a TrialReport; running two variants
over the same seeds gives paired results.
'''

import dataclasses
import hashlib
import json
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Tuple

import numpy as np
import pandas as pd
import scipy.stats
from joblib import Parallel, delayed
from sklearn.metrics import confusion_matrix

from selftaughtsvm import scenarios, trainer
from selftaughtsvm.config import TrainConfig, Variant
from selftaughtsvm.errors import (ConfigError, EmptyDatasetError,
                                  InsufficientPositivesError,
                                  InvalidKernelCountError, TrialFailedError)
from selftaughtsvm.kernels import KERNEL_COUNTS

logger = logging.getLogger(__name__)

METRICS = ('accuracy', 'gmean', 'tpr', 'tnr')


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int

    def __post_init__(self):
        if min(self.tp, self.fp, self.tn, self.fn) < 0:
            raise ConfigError('confusion counts must be nonnegative')

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


def confusion_counts(y_true, y_pred) -> ConfusionCounts:
    '''
    Counts with class 1 as the positive class
    '''
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if y_true.shape != y_pred.shape:
        raise ConfigError('true and predicted labels differ in length')
    if y_true.size == 0:
        return ConfusionCounts(0, 0, 0, 0)
    tn, fp, fn, tp = confusion_matrix(y_true, y_pred, labels=[0, 1]).ravel()
    return ConfusionCounts(int(tp), int(fp), int(tn), int(fn))


@dataclass(frozen=True)
class Metrics:
    '''
    ``tpr_undefined``/``tnr_undefined`` flag a rate that was set to 0
    because its class had no samples
    '''
    accuracy: float
    gmean: float
    tpr: float
    tnr: float
    tpr_undefined: bool = False
    tnr_undefined: bool = False

    def to_dict(self):
        return dataclasses.asdict(self)


def metrics(counts: ConfusionCounts) -> Metrics:
    if counts.total < 1:
        raise EmptyDatasetError('metrics need at least one evaluated sample')
    positives = counts.tp + counts.fn
    negatives = counts.tn + counts.fp
    tpr = counts.tp / positives if positives else 0.0
    tnr = counts.tn / negatives if negatives else 0.0
    return Metrics(accuracy=(counts.tp + counts.tn) / counts.total,
                   gmean=math.sqrt(tpr * tnr), tpr=tpr, tnr=tnr,
                   tpr_undefined=not positives, tnr_undefined=not negatives)


def _fingerprint(data) -> str:
    text = json.dumps(data, sort_keys=True, separators=(',', ':'))
    return hashlib.sha256(text.encode('utf-8')).hexdigest()[:16]


@dataclass(frozen=True)
class ExperimentSpec:
    '''
    A scenario name with its parameters and the training config; the
    config's seed is replaced by each trial's seed
    '''
    scenario: str = 'figure2'
    config: TrainConfig = field(default_factory=TrainConfig)
    params: Tuple[Tuple[str, Any], ...] = ()

    def __post_init__(self):
        if self.scenario not in scenarios.SCENARIOS:
            raise ConfigError(f'unknown scenario {self.scenario!r}')
        object.__setattr__(self, 'params', tuple(sorted(dict(self.params).items())))

    def with_config(self, **changes):
        return dataclasses.replace(self, config=self.config.replace(**changes))

    def with_params(self, **params):
        return dataclasses.replace(self, params={**dict(self.params), **params}.items())

    @property
    def data_fingerprint(self) -> str:
        '''
        Identifies the generated data only; equal across variants
        '''
        return _fingerprint({'scenario': self.scenario, 'params': dict(self.params)})

    @property
    def fingerprint(self) -> str:
        config = self.config.to_dict()
        del config['seed']
        return _fingerprint({'scenario': self.scenario,
                             'params': dict(self.params), 'config': config})


@dataclass(frozen=True)
class TrialReport:
    variant: str
    metric: str
    seeds: Tuple[int, ...]
    values: Tuple[float, ...]
    fingerprint: str
    data_fingerprint: str

    @property
    def mean(self) -> float:
        return float(np.mean(self.values))

    @property
    def std(self) -> float:
        '''
        Sample standard deviation; 0 for a single trial
        '''
        if len(self.values) < 2:
            return 0.0
        return float(np.std(self.values, ddof=1))

    def to_dict(self):
        return {
            'variant': self.variant,
            'metric': self.metric,
            'seeds': list(self.seeds),
            'values': list(self.values),
            'mean': self.mean,
            'std': self.std,
            'fingerprint': self.fingerprint,
            'data_fingerprint': self.data_fingerprint,
        }


def run_trial(spec: ExperimentSpec, seed: int) -> Metrics:
    '''
    One trial; any failure comes back as TrialFailedError naming the seed
    '''
    try:
        data = scenarios.build(spec.scenario, seed, **dict(spec.params))
        config = spec.config.replace(seed=seed)
        model = trainer.train(data.target, data.source, config)
        predicted, _ = trainer.predict(model, data.test)
        return metrics(confusion_counts(data.test.labels, predicted))
    except Exception as e:
        raise TrialFailedError(seed, e) from e


def trial_metrics(spec: ExperimentSpec, n_trials, base_seed=0, n_jobs=1):
    '''
    Metrics of every trial, in seed order regardless of ``n_jobs``
    '''
    if n_trials < 1:
        raise ConfigError('n_trials must be at least 1')
    if n_jobs == 0 or n_jobs < -1:
        raise ConfigError(f'n_jobs must be -1 or at least 1, got {n_jobs}')
    seeds = [base_seed + i for i in range(n_trials)]
    results = Parallel(n_jobs=n_jobs)(delayed(run_trial)(spec, seed) for seed in seeds)
    for seed, result in zip(seeds, results):
        logger.info('trial_finished', extra={'fields': {
            'variant': spec.config.variant.value, 'seed': seed,
            'scenario': spec.scenario, **result.to_dict()}})
    return seeds, results


def _report(spec, seeds, results, metric):
    return TrialReport(spec.config.variant.value, metric, tuple(seeds),
                       tuple(float(getattr(r, metric)) for r in results),
                       spec.fingerprint, spec.data_fingerprint)


def run_trials(spec: ExperimentSpec, n_trials, base_seed=0, metric='accuracy',
               n_jobs=1) -> TrialReport:
    if metric not in METRICS:
        raise ConfigError(f'unknown metric {metric!r}')
    seeds, results = trial_metrics(spec, n_trials, base_seed, n_jobs)
    return _report(spec, seeds, results, metric)


def paired_trials(spec: ExperimentSpec, variants, n_trials, base_seed=0,
                  metric='accuracy', n_jobs=1) -> Dict[str, TrialReport]:
    '''
    One report per variant over the same seeds and the same data
    '''
    return {Variant(v).value: run_trials(spec.with_config(variant=Variant(v)),
                                         n_trials, base_seed, metric, n_jobs)
            for v in variants}


def paired_differences(first: TrialReport, second: TrialReport) -> np.ndarray:
    '''
    Per-seed ``first - second``
    '''
    if first.seeds != second.seeds or first.data_fingerprint != second.data_fingerprint:
        raise ConfigError('reports are not paired: seeds or data differ')
    return np.asarray(first.values) - np.asarray(second.values)


@dataclass(frozen=True)
class SweepPoint:
    '''
    Reports for one value of the swept parameter
    '''
    parameter: str
    value: Any
    reports: Tuple[TrialReport, ...]

    def report(self, metric) -> TrialReport:
        for report in self.reports:
            if report.metric == metric:
                return report
        raise KeyError(metric)

    def to_records(self):
        return [{self.parameter: self.value, **report.to_dict()}
                for report in self.reports]


def _sweep(spec_for_value, parameter, values, metrics_wanted, n_trials,
           base_seed, n_jobs):
    points = []
    for value in values:
        spec = spec_for_value(value)
        seeds, results = trial_metrics(spec, n_trials, base_seed, n_jobs)
        points.append(SweepPoint(parameter, value, tuple(
            _report(spec, seeds, results, metric) for metric in metrics_wanted)))
    return points


def tpr_curve(spec: ExperimentSpec, positives_range, n_trials, base_seed=0,
              n_jobs=1):
    '''
    TPR against the number of positive target samples; ``spec`` must use
    the positives scenario
    '''
    if spec.scenario != 'positives':
        raise ConfigError('the TPR curve runs on the positives scenario')
    positives_range = [int(n) for n in positives_range]
    for n_pos in positives_range:
        if n_pos < 1:
            raise ConfigError('every positive count must be at least 1')
        if n_pos > scenarios.MAX_POSITIVES:
            raise InsufficientPositivesError(
                f'asked for {n_pos} positives, the pool has {scenarios.MAX_POSITIVES}')
    return _sweep(lambda n: spec.with_params(n_pos=n), 'n_pos', positives_range,
                  ('tpr',), n_trials, base_seed, n_jobs)


def tpr_trend(points) -> float:
    '''
    Spearman correlation between positive count and mean TPR; 0 when
    either series is constant
    '''
    counts = [point.value for point in points]
    means = [point.report('tpr').mean for point in points]
    if len(set(counts)) < 2 or len(set(means)) < 2:
        return 0.0
    return float(scipy.stats.spearmanr(counts, means)[0])


def kernel_sweep(spec: ExperimentSpec, kernel_counts, n_trials, base_seed=0,
                 n_jobs=1):
    '''
    Accuracy and Gmean reports for each number of base kernels
    '''
    kernel_counts = [int(count) for count in kernel_counts]
    for count in kernel_counts:
        if count not in KERNEL_COUNTS:
            raise InvalidKernelCountError(
                f'kernel count must be one of {KERNEL_COUNTS}, got {count}')
    return _sweep(lambda count: spec.with_config(kernel_count=count),
                  'kernel_count', kernel_counts, ('accuracy', 'gmean'),
                  n_trials, base_seed, n_jobs)


def lambda_sweep(spec: ExperimentSpec, lambdas, n_trials, base_seed=0, n_jobs=1):
    '''
    Accuracy and Gmean reports for each label penalty weight
    '''
    lambdas = [float(lam) for lam in lambdas]
    if any(not lam >= 0 for lam in lambdas):
        raise ConfigError('lambda values must be nonnegative')
    return _sweep(lambda lam: spec.with_config(lam=lam), 'lam', lambdas,
                  ('accuracy', 'gmean'), n_trials, base_seed, n_jobs)


def write_records(records, stream):
    '''
    One JSON object per line, keys sorted
    '''
    for record in records:
        stream.write(json.dumps(record, sort_keys=True) + '\n')


SUMMARY_COLUMNS = ('variant', 'metric', 'n', 'mean', 'std')


def format_summary(records, parameter=None) -> str:
    '''
    A whitespace-aligned table of report records, one row per record
    '''
    columns = ([parameter] if parameter else []) + list(SUMMARY_COLUMNS)
    rows = [{**record, 'n': len(record['values'])} for record in records]
    frame = pd.DataFrame(rows, columns=columns)
    return frame.to_string(index=False, float_format=lambda v: f'{v:.4f}')
