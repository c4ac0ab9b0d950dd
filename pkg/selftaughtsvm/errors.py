#!/usr/bin/env python3
# -*- coding: UTF-8 -*-

# errors.py is part of self-taught-svm which learns SVM classifiers
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
Exceptions raised by the selftaughtsvm package.

Every exception carries a ``code``: the short failure name written in
the command line's error records.
'''


class Error(Exception):
    '''
    Base class for this package's exceptions
    '''
    code = 'Error'


class DataFormatError(Error):
    '''
    A data file can't be parsed: missing header, non-numeric cell,
    ragged rows or a label outside {0, 1}
    '''
    code = 'DataFormat'


class NonFiniteFeatureError(DataFormatError):
    '''
    A feature value is NaN or infinite
    '''
    code = 'NonFiniteFeature'


class EmptyDatasetError(Error):
    '''
    A dataset with no samples was given where at least one is needed
    '''
    code = 'EmptyDataset'


class DimMismatchError(Error):
    '''
    Feature dimensionalities (or vector lengths) don't agree
    '''
    code = 'DimMismatch'

    def __init__(self, expected, actual, what='feature dimensionality'):
        super().__init__(expected, actual, what)
        self.expected = expected
        self.actual = actual
        self.what = what

    def __str__(self):
        return f'{self.what} mismatch: expected {self.expected}, got {self.actual}'


class SingleClassError(Error):
    '''
    Labels contain only one class where both are required
    '''
    code = 'SingleClass'


class NoNegativeTargetsError(SingleClassError):
    '''
    Every target sample is positive; the target block is ground truth and
    can't be repaired
    '''
    code = 'NoNegativeTargets'


class NoPositiveTargetsError(SingleClassError):
    '''
    Every target sample is negative
    '''
    code = 'NoPositiveTargets'


class DegenerateCountsError(Error):
    '''
    A class count of zero reached an operation that divides by it
    '''
    code = 'DegenerateCounts'


class NotPositiveSemidefiniteError(Error):
    '''
    A Gram matrix has an eigenvalue below the accepted tolerance
    '''
    code = 'NotPositiveSemidefinite'

    def __init__(self, min_eigenvalue):
        super().__init__(min_eigenvalue)
        self.min_eigenvalue = min_eigenvalue

    def __str__(self):
        return f'smallest eigenvalue {self.min_eigenvalue:.3e} is below tolerance'


class ConvergenceError(Error):
    '''
    An iterative solver hit its iteration cap without meeting its
    tolerance
    '''
    code = 'ConvergenceFailure'

    def __init__(self, iterations, violation):
        super().__init__(iterations, violation)
        self.iterations = iterations
        self.violation = violation

    def __str__(self):
        return (f'no convergence after {self.iterations} updates '
                f'(violation {self.violation:.3e})')


class ConfigError(Error):
    '''
    A configuration value violates its invariant
    '''
    code = 'Config'


class InvalidKernelCountError(ConfigError):
    '''
    A kernel count outside {4, 8, 12, 16}
    '''
    code = 'InvalidKernelCount'


class InsufficientPositivesError(Error):
    '''
    An experiment asked for more positive samples than the scenario has
    '''
    code = 'InsufficientPositives'


class ModelFormatError(Error):
    '''
    A model file is not a model this version can read
    '''
    code = 'ModelFormat'


class TrialFailedError(Error):
    '''
    One trial of a repeated experiment failed; ``seed`` identifies it
    '''
    code = 'TrialFailed'

    def __init__(self, seed, cause):
        super().__init__(seed, cause)
        self.seed = seed
        self.cause = cause

    def __str__(self):
        return f'trial with seed {self.seed} failed: {self.cause!r}'
