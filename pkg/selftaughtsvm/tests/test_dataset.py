#!/usr/bin/env python3
# -*- coding: utf-8 -*-

# test_dataset.py is part of self-taught-svm which learns SVM classifiers
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

# pylint: disable=invalid-name
# pylint: disable=redefined-outer-name

import logging

import numpy as np
import pytest

from selftaughtsvm import dataset
from selftaughtsvm.dataset import Dataset, Role
from selftaughtsvm.errors import (DataFormatError, DimMismatchError,
                                  EmptyDatasetError, InsufficientPositivesError,
                                  NonFiniteFeatureError)


class TestDataset:

    def test_target_needs_labels(self):
        with pytest.raises(DataFormatError):
            Dataset(np.zeros((2, 2)), None, Role.TARGET)

    def test_source_rejects_labels(self):
        with pytest.raises(DataFormatError):
            Dataset(np.zeros((2, 2)), [0, 1], Role.SOURCE)

    @pytest.mark.parametrize('role', [Role.TARGET, Role.SOURCE])
    def test_empty_rejected_except_for_test_role(self, role):
        labels = [] if role is Role.TARGET else None
        with pytest.raises(EmptyDatasetError):
            Dataset(np.empty((0, 2)), labels, role)

    def test_empty_test_dataset_allowed(self):
        assert Dataset(np.empty((0, 2)), None, Role.TEST).n_samples == 0

    def test_non_finite_feature(self):
        with pytest.raises(NonFiniteFeatureError):
            Dataset([[0.0, np.inf]], [1], Role.TARGET)

    def test_label_outside_binary(self):
        with pytest.raises(DataFormatError):
            Dataset([[0.0], [1.0]], [0, 2])

    def test_arrays_are_read_only(self, separable_target):
        with pytest.raises(ValueError):
            separable_target.features[0, 0] = 1.0


class TestLoadCsv:

    def test_minimal_target_file(self, target_csv):
        data = dataset.load_csv(target_csv, Role.TARGET)
        assert data.n_samples == 2
        assert data.dim == 2
        assert data.labels.tolist() == [0, 1]
        assert data.feature_names == ('f1', 'f2')

    def test_source_without_label_column(self, tmp_path):
        path = tmp_path / 'source.csv'
        path.write_text('f1,f2\n0,0\n1,1\n', encoding='utf-8')
        data = dataset.load_csv(path, Role.SOURCE)
        assert data.n_samples == 2 and data.dim == 2
        assert data.labels is None

    def test_source_label_column_ignored(self, target_csv, caplog):
        with caplog.at_level(logging.WARNING):
            data = dataset.load_csv(target_csv, Role.SOURCE)
        assert data.labels is None
        assert data.dim == 2
        assert 'ignoring label column' in caplog.text

    def test_label_column_may_be_anywhere(self, tmp_path):
        path = tmp_path / 'target.csv'
        path.write_text('label,a,b\n1,2.5,3\n0,4,5\n', encoding='utf-8')
        data = dataset.load_csv(path, Role.TARGET)
        assert data.features.tolist() == [[2.5, 3.0], [4.0, 5.0]]
        assert data.labels.tolist() == [1, 0]

    @pytest.mark.parametrize(
        'text,error',
        [
            # NaN feature
            ('f1,f2,label\nNaN,0,0\n1,1,1\n', NonFiniteFeatureError),
            # infinite feature
            ('f1,f2,label\ninf,0,0\n1,1,1\n', NonFiniteFeatureError),
            # non-numeric cell
            ('f1,f2,label\nabc,0,0\n1,1,1\n', DataFormatError),
            # label outside {0, 1}
            ('f1,f2,label\n0,0,2\n1,1,1\n', DataFormatError),
            # missing field
            ('f1,f2,label\n0,0,0\n1,1\n', DataFormatError),
            # no label column in a target file
            ('f1,f2\n0,0\n1,1\n', DataFormatError),
            # empty cell
            ('f1,f2,label\n0,,0\n1,1,1\n', DataFormatError),
            # header only
            ('f1,f2,label\n', EmptyDatasetError),
            # nothing at all
            ('', EmptyDatasetError),
        ])
    def test_invalid_files(self, tmp_path, text, error):
        path = tmp_path / 'bad.csv'
        path.write_text(text, encoding='utf-8')
        with pytest.raises(error):
            dataset.load_csv(path, Role.TARGET)

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataFormatError):
            dataset.load_csv(tmp_path / 'absent.csv', Role.TARGET)

    def test_write_then_load_is_exact(self, tmp_path, rng):
        original = Dataset(rng.normal(size=(7, 3)), rng.integers(0, 2, 7))
        path = tmp_path / 'roundtrip.csv'
        dataset.write_csv(original, path)
        loaded = dataset.load_csv(path, Role.TARGET)
        np.testing.assert_array_equal(loaded.features, original.features)
        np.testing.assert_array_equal(loaded.labels, original.labels)
        assert loaded.feature_names == ('f1', 'f2', 'f3')


class TestGenerateClouds:

    def test_target_counts(self):
        data = dataset.generate_clouds(dataset.clouds_spec(
            [(0, 0), (3, 0)], 0.5, [5, 5], seed=7))
        assert data.n_samples == 10
        assert np.bincount(data.labels).tolist() == [5, 5]

    def test_source_is_unlabeled(self):
        data = dataset.generate_clouds(dataset.clouds_spec(
            [(10, 10), (13, 13)], 0.5, [200, 200], seed=7), Role.SOURCE)
        assert data.n_samples == 400
        assert data.labels is None

    def test_same_seed_same_matrix(self):
        spec = dataset.clouds_spec([(0, 0), (3, 0)], 0.5, [5, 5], seed=7)
        np.testing.assert_array_equal(dataset.generate_clouds(spec).features,
                                      dataset.generate_clouds(spec).features)

    def test_sample_mean_converges(self):
        spec = dataset.clouds_spec([(1.0, -2.0), (3.0, 4.0)], 0.5,
                                   [10000, 10000], seed=11)
        data = dataset.generate_clouds(spec)
        for label, mean in enumerate(spec.means):
            rows = data.features[data.labels == label]
            assert np.all(np.abs(rows.mean(axis=0) - mean) < 0.02)

    @pytest.mark.parametrize(
        'means,std,counts',
        [
            # three clouds
            ([(0, 0), (1, 1), (2, 2)], 1.0, [1, 1, 1]),
            # zero spread
            ([(0, 0), (1, 1)], 0.0, [1, 1]),
            # empty cloud
            ([(0, 0), (1, 1)], 1.0, [0, 1]),
        ])
    def test_invalid_spec(self, means, std, counts):
        with pytest.raises(DataFormatError):
            dataset.clouds_spec(means, std, counts)


class TestStack:

    def test_order_and_ranges(self, rng):
        target = Dataset(rng.normal(size=(3, 2)), [0, 1, 1])
        source = Dataset(rng.normal(size=(2, 2)), None, Role.SOURCE)
        stacked = dataset.stack(target, source)
        assert stacked.n_samples == 5
        assert list(stacked.target_rows) == [0, 1, 2]
        np.testing.assert_array_equal(stacked.features[:3], target.features)
        np.testing.assert_array_equal(stacked.features[3:], source.features)

    def test_dim_mismatch(self, rng):
        target = Dataset(rng.normal(size=(3, 2)), [0, 1, 1])
        source = Dataset(rng.normal(size=(2, 3)), None, Role.SOURCE)
        with pytest.raises(DimMismatchError):
            dataset.stack(target, source)

    def test_empty_source(self, rng):
        target = Dataset(rng.normal(size=(3, 2)), [0, 1, 1])
        empty = Dataset(np.empty((0, 2)), None, Role.TEST)
        with pytest.raises(EmptyDatasetError):
            dataset.stack(target, empty)


class TestStandardize:

    def test_stacked_rows_are_centred(self, separable_target, separable_source):
        target, source, scaler = dataset.standardize(separable_target,
                                                     separable_source)
        stacked = np.vstack([target.features, source.features])
        np.testing.assert_allclose(stacked.mean(axis=0), 0.0, atol=1e-12)
        np.testing.assert_allclose(stacked.std(axis=0), 1.0, atol=1e-12)
        assert scaler.mean_.shape == (2,)
        assert source.labels is None


class TestSubsampleClass:

    def test_picks_requested_class(self, separable_target, rng):
        picked = dataset.subsample_class(separable_target, 1, 3, rng)
        assert picked.n_samples == 3
        assert np.all(picked.labels == 1)

    def test_too_many(self, separable_target, rng):
        with pytest.raises(InsufficientPositivesError):
            dataset.subsample_class(separable_target, 1, 6, rng)
