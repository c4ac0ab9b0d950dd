#!/usr/bin/env python3
# -*- coding: UTF-8 -*-

# cli.py is part of self-taught-svm which learns SVM classifiers
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

# Usage: See README and/or run with --help option.

import argparse
import json
import logging
import os
import sys

import pandas as pd

from selftaughtsvm import (adaptation, dataset, evaluation, kernels,
                           model_io, scenarios, trainer)
from selftaughtsvm.config import TrainConfig, Variant, load_config
from selftaughtsvm.dataset import Role
from selftaughtsvm.errors import ConfigError, DataFormatError, Error
from selftaughtsvm.logs import configure_logging, error_record

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2

_DEFAULTS = TrainConfig()


def _positive_float(text):
    try:
        value = float(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f'not a number: {text!r}') from e
    if not value > 0:
        raise argparse.ArgumentTypeError(f'must be positive: {text!r}')
    return value


def _nonnegative_float(text):
    try:
        value = float(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f'not a number: {text!r}') from e
    if not value >= 0:
        raise argparse.ArgumentTypeError(f'must be nonnegative: {text!r}')
    return value


def _positive_int(text):
    try:
        value = int(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f'not an integer: {text!r}') from e
    if value < 1:
        raise argparse.ArgumentTypeError(f'must be at least 1: {text!r}')
    return value


def _seed(text):
    try:
        value = int(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f'not an integer: {text!r}') from e
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError('seed must be a 64-bit unsigned integer')
    return value


def _jobs(text):
    '''
    A joblib worker count: positive, or -1 for every core
    '''
    try:
        value = int(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f'not an integer: {text!r}') from e
    if value == 0 or value < -1:
        raise argparse.ArgumentTypeError(f'must be -1 or at least 1: {text!r}')
    return value


def _list_of(item_type):
    def parse(text):
        return [item_type(item) for item in text.split(',') if item.strip()]
    return parse


def _kernel_count(text):
    value = _positive_int(text)
    if value not in kernels.KERNEL_COUNTS:
        raise argparse.ArgumentTypeError(
            f'kernel count must be one of {kernels.KERNEL_COUNTS}')
    return value


def _point(text):
    try:
        return tuple(float(v) for v in text.split(','))
    except ValueError as e:
        raise argparse.ArgumentTypeError(f'not a comma-separated point: {text!r}') from e


class CommandLine:
    '''
    The ``stsvm`` command: train, predict, eval, synth, trials and sweep.

    Settings come from the process arguments (read_cl_args) or from a
    string in the same format:

        cli = CommandLine()
        cli.read_arg_string('eval --model model.json --data test.csv')
        exit_code = cli.run()
    '''

    def __init__(self):
        self._init_parser()
        self.settings = None

    def _init_parser(self):
        '''
        Initializes argparse.ArgumentParser self._parser
        '''
        self._parser = argparse.ArgumentParser(
            prog='stsvm',
            description='Self-taught SVM: learn a classifier from labeled '
            'target data and unlabeled source data')
        commands = self._parser.add_subparsers(dest='command', required=True)

        common = argparse.ArgumentParser(add_help=False)
        common.add_argument(
            '--log-level',
            default='info',
            choices=['debug', 'info', 'warning', 'error'],
            help='threshold of the JSON log records written to standard '
            'error (default: %(default)s)')

        training = argparse.ArgumentParser(add_help=False)
        training.add_argument(
            '--config',
            help='JSON file of TrainConfig overrides; explicit flags win')
        training.add_argument(
            '--c', type=_positive_float, dest='C',
            help=f'SVM regularization parameter (default: {_DEFAULTS.C})')
        training.add_argument(
            '--theta', type=_positive_float,
            help=f'weight of the SVM term (default: {_DEFAULTS.theta})')
        training.add_argument(
            '--lambda', type=_nonnegative_float, dest='lam',
            help='weight of the penalty tying labels to the reference '
            f'labels (default: {_DEFAULTS.lam})')
        training.add_argument(
            '--epsilon', type=_positive_float,
            help='weight of the squared norm of the kernel weights '
            f'(default: {_DEFAULTS.epsilon})')
        training.add_argument(
            '--kernels', type=_kernel_count, dest='kernel_count',
            help='number of base kernels, 4, 8, 12 or 16 '
            f'(default: {_DEFAULTS.kernel_count})')
        training.add_argument(
            '--max-outer', type=_positive_int,
            help='cap on label refinement rounds '
            f'(default: {_DEFAULTS.max_outer})')
        training.add_argument(
            '--standardize', action='store_true', default=None,
            help='z-score features on the stacked target and source rows')

        variant_names = [v.value for v in Variant]

        train = commands.add_parser('train', parents=[common, training],
                                    help='train a model and write it to a file')
        train.add_argument('--target', required=True,
                           help='labeled target CSV')
        train.add_argument('--source',
                           help='unlabeled source CSV; the svm variant ignores it')
        train.add_argument(
            '--variant', choices=variant_names,
            help=f'method variant (default: {_DEFAULTS.variant.value})')
        train.add_argument('--seed', type=_seed,
                           help=f'random seed (default: {_DEFAULTS.seed})')
        train.add_argument('--out', required=True, help='model file to write')

        predict = commands.add_parser('predict', parents=[common],
                                      help='score the rows of a CSV')
        predict.add_argument('--model', required=True)
        predict.add_argument('--data', required=True)
        predict.add_argument('--out', required=True,
                             help='CSV of per-row score and label')

        evaluate = commands.add_parser('eval', parents=[common],
                                       help='metrics of a model on labeled data')
        evaluate.add_argument('--model', required=True)
        evaluate.add_argument('--data', required=True, help='labeled CSV')

        synth = commands.add_parser('synth', parents=[common],
                                    help='generate synthetic data')
        source_of_data = synth.add_mutually_exclusive_group(required=True)
        source_of_data.add_argument(
            '--mean', type=_point, action='append', dest='means',
            help='mean of one class cloud as comma-separated coordinates; '
            'give it twice, class 0 first')
        source_of_data.add_argument(
            '--scenario', choices=sorted(scenarios.SCENARIOS),
            help='write target.csv, source.csv and test.csv of a scenario')
        synth.add_argument('--std', type=_positive_float, default=1.0,
                           help='cloud standard deviation (default: %(default)s)')
        synth.add_argument('--counts', type=_list_of(_positive_int),
                           default=[5, 5],
                           help='samples per cloud (default: 5,5)')
        synth.add_argument('--role', choices=[r.value for r in Role],
                           default=Role.TARGET.value,
                           help='source data is written without labels '
                           '(default: %(default)s)')
        synth.add_argument('--seed', type=_seed, default=0)
        synth.add_argument('--out', required=True,
                           help='CSV file, or a directory with --scenario')
        synth.add_argument(
            '--report', action='store_true',
            help='with --scenario, print the marginal and class-conditional '
            'discrepancies between target and source')

        experiment = argparse.ArgumentParser(add_help=False)
        experiment.add_argument('--n', type=_positive_int, default=10,
                                help='number of trials (default: %(default)s)')
        experiment.add_argument('--seed', type=_seed, default=0,
                                help='seed of the first trial (default: %(default)s)')
        experiment.add_argument('--jobs', type=_jobs, default=1,
                                help='parallel trial workers, -1 for every core '
                                '(default: %(default)s)')
        experiment.add_argument('--out',
                                help='file for the JSON-lines report records')

        trials = commands.add_parser('trials',
                                     parents=[common, training, experiment],
                                     help='repeated paired trials on a scenario')
        trials.add_argument('--scenario', choices=sorted(scenarios.SCENARIOS),
                            default='figure2', help='(default: %(default)s)')
        trials.add_argument('--variants', type=_list_of(Variant),
                            default=[Variant.STSVM, Variant.SVM_BASELINE],
                            help='comma-separated variants run on the same '
                            'seeds (default: stsvm,svm)')
        trials.add_argument('--metric', choices=evaluation.METRICS,
                            default='accuracy', help='(default: %(default)s)')

        sweep = commands.add_parser('sweep',
                                    parents=[common, training, experiment],
                                    help='repeated trials over a parameter grid')
        swept = sweep.add_mutually_exclusive_group(required=True)
        swept.add_argument('--kernels-list', type=_list_of(_kernel_count),
                           help='kernel counts, e.g. 4,8,12,16')
        swept.add_argument('--positives-list', type=_list_of(_positive_int),
                           help='positive target counts (positives scenario)')
        swept.add_argument('--lambda-list', type=_list_of(_nonnegative_float),
                           help='label penalty weights')
        sweep.add_argument('--scenario', choices=sorted(scenarios.SCENARIOS),
                           default='figure2',
                           help='ignored by --positives-list (default: %(default)s)')
        sweep.add_argument('--variant', choices=variant_names,
                           help=f'(default: {_DEFAULTS.variant.value})')

    # Public methods

    def read_cl_args(self):
        '''
        Sets the settings to what's indicated in command line arguments
        '''
        self.settings = self._parser.parse_args()

    def read_arg_string(self, argstring):
        '''
        Sets the settings to what's indicated by argstring (a string or
        an argument list)
        '''
        args = argstring.split() if isinstance(argstring, str) else list(argstring)
        self.settings = self._parser.parse_args(args)

    def run(self) -> int:
        '''
        Runs the selected command and returns the exit code. Package
        errors and I/O errors become one JSON record on standard error.
        '''
        configure_logging(self.settings.log_level)
        handler = getattr(self, '_cmd_' + self.settings.command)
        try:
            handler()
        except (Error, OSError) as e:
            sys.stderr.write(error_record(e) + '\n')
            return EXIT_RUNTIME
        return EXIT_OK

    # Commands

    def _train_config(self, **fixed):
        '''
        TrainConfig from --config and explicit flags; invalid values are
        usage errors
        '''
        settings = self.settings
        overrides = {name: getattr(settings, name, None)
                     for name in ('C', 'theta', 'lam', 'epsilon', 'kernel_count',
                                  'max_outer', 'standardize', 'variant', 'seed')}
        overrides = {k: v for k, v in overrides.items() if v is not None}
        overrides.update(fixed)
        try:
            base = load_config(settings.config) if settings.config else None
            return TrainConfig.from_dict(overrides, base)
        except ConfigError as e:
            self._parser.error(str(e))
        return None

    def _cmd_train(self):
        settings = self.settings
        config = self._train_config()
        if config.variant is not Variant.SVM_BASELINE and not settings.source:
            self._parser.error(f'--source is required for variant {config.variant.value}')
        target = dataset.load_csv(settings.target, Role.TARGET)
        source = None
        if settings.source:
            if config.variant is Variant.SVM_BASELINE:
                logger.warning('the svm variant ignores the source data',
                               extra={'fields': {'source': settings.source}})
            else:
                source = dataset.load_csv(settings.source, Role.SOURCE)
        model = trainer.train(target, source, config)
        model_io.save_model(model, settings.out)

    def _cmd_predict(self):
        model = model_io.load_model(self.settings.model)
        data = dataset.load_csv(self.settings.data, Role.TEST)
        labels, scores = trainer.predict(model, data)
        pd.DataFrame({'score': scores, 'label': labels}).to_csv(
            self.settings.out, index=False)

    def _cmd_eval(self):
        model = model_io.load_model(self.settings.model)
        data = dataset.load_csv(self.settings.data, Role.TEST)
        if not data.is_labeled:
            raise DataFormatError(f'{self.settings.data}: evaluation needs a label column')
        labels, _ = trainer.predict(model, data)
        result = evaluation.metrics(evaluation.confusion_counts(data.labels, labels))
        print(json.dumps(result.to_dict(), sort_keys=True))

    def _cmd_synth(self):
        settings = self.settings
        if settings.scenario is None:
            if settings.report:
                self._parser.error('--report needs --scenario')
            try:
                spec = dataset.clouds_spec(settings.means, settings.std,
                                           settings.counts, settings.seed)
            except Error as e:
                self._parser.error(str(e))
            dataset.write_csv(dataset.generate_clouds(spec, Role(settings.role)),
                              settings.out)
            return

        data = scenarios.build(settings.scenario, settings.seed)
        os.makedirs(settings.out, exist_ok=True)
        for name, part in (('target', data.target), ('source', data.source),
                           ('test', data.test)):
            dataset.write_csv(part, os.path.join(settings.out, name + '.csv'))
        if settings.report:
            stacked = dataset.stack(data.target, data.source)
            bank = kernels.build_bank(stacked, kernels.KernelConfig.default(stacked.dim))
            K = kernels.combine(bank, kernels.KernelWeights.uniform(bank.n_kernels))
            y = adaptation.LabelVector.from_blocks(data.target.labels,
                                                   data.source_labels)
            report = adaptation.mean_discrepancy_report(K, y)
            print(json.dumps(report.to_dict(), sort_keys=True))

    def _emit(self, records, parameter=None):
        if self.settings.out:
            with open(self.settings.out, 'w', encoding='utf-8') as f:
                evaluation.write_records(records, f)
        print(evaluation.format_summary(records, parameter))

    def _cmd_trials(self):
        settings = self.settings
        spec = evaluation.ExperimentSpec(settings.scenario, self._train_config())
        reports = evaluation.paired_trials(spec, settings.variants, settings.n,
                                           settings.seed, settings.metric,
                                           settings.jobs)
        self._emit([report.to_dict() for report in reports.values()])

    def _cmd_sweep(self):
        settings = self.settings
        if settings.positives_list is not None:
            spec = evaluation.ExperimentSpec('positives', self._train_config())
            points = evaluation.tpr_curve(spec, settings.positives_list,
                                          settings.n, settings.seed, settings.jobs)
            logger.info('tpr_trend', extra={'fields': {
                'spearman': evaluation.tpr_trend(points)}})
        else:
            spec = evaluation.ExperimentSpec(settings.scenario, self._train_config())
            if settings.kernels_list is not None:
                points = evaluation.kernel_sweep(spec, settings.kernels_list,
                                                 settings.n, settings.seed,
                                                 settings.jobs)
            else:
                points = evaluation.lambda_sweep(spec, settings.lambda_list,
                                                 settings.n, settings.seed,
                                                 settings.jobs)
        records = [record for point in points for record in point.to_records()]
        self._emit(records, points[0].parameter if points else None)


def main(argv=None) -> int:
    '''
    Entry point of the ``stsvm`` script; returns the exit code
    '''
    cli = CommandLine()
    try:
        if argv is None:
            cli.read_cl_args()
        else:
            cli.read_arg_string(argv)
        return cli.run()
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
