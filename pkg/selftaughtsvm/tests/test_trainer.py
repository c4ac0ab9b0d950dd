#!/usr/bin/env python3
# -*- coding: utf-8 -*-

# test_trainer.py is part of self-taught-svm which learns SVM classifiers
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

import numpy as np
import pytest

from selftaughtsvm import dataset, evaluation, trainer
from selftaughtsvm.config import TrainConfig, Variant
from selftaughtsvm.dataset import Dataset, Role
from selftaughtsvm.errors import (DimMismatchError, EmptyDatasetError,
                                  NoNegativeTargetsError)
from selftaughtsvm.trainer import TrainingRecord


class TestInitLabels:

    def test_source_copy_of_target(self, separable_target, quick_config):
        source = separable_target.with_role(Role.SOURCE)
        y = trainer.init_labels(separable_target, source, quick_config)
        assert y.source.tolist() == separable_target.labels.tolist()
        assert y.target.tolist() == separable_target.labels.tolist()

    def test_separable_source(self, separable_target, separable_source,
                              quick_config):
        y = trainer.init_labels(separable_target, separable_source, quick_config)
        assert y.source.tolist() == [0.0] * 20 + [1.0] * 20


class TestTrain:

    def test_baseline_fits_separable_target(self, separable_target):
        model = trainer.train(separable_target, None,
                              TrainConfig(variant=Variant.SVM_BASELINE))
        labels, _ = trainer.predict(model, separable_target)
        assert labels.tolist() == separable_target.labels.tolist()
        assert model.d.values.tolist() == [1.0 / 16] * 16
        assert model.converged and model.log == ()

    def test_baseline_ignores_source(self, separable_target, separable_source):
        config = TrainConfig(variant=Variant.SVM_BASELINE)
        with_source = trainer.train(separable_target, separable_source, config)
        without = trainer.train(separable_target, None, config)
        np.testing.assert_array_equal(with_source.alpha, without.alpha)

    def test_single_class_target(self, separable_source):
        target = Dataset(np.zeros((3, 2)), np.ones(3, dtype=np.int64))
        with pytest.raises(NoNegativeTargetsError):
            trainer.train(target, separable_source, TrainConfig())

    def test_source_required(self, separable_target):
        with pytest.raises(EmptyDatasetError):
            trainer.train(separable_target, None, TrainConfig())

    def test_dim_mismatch(self, separable_target):
        source = Dataset(np.zeros((4, 3)), None, Role.SOURCE)
        with pytest.raises(DimMismatchError):
            trainer.train(separable_target, source, TrainConfig())

    def test_self_taught_run(self, figure2_data, quick_config):
        model = trainer.train(figure2_data.target, figure2_data.source, quick_config)
        assert 1 <= len(model.log) <= quick_config.max_outer
        assert model.labels.is_hard
        assert model.labels.target.tolist() == figure2_data.target.labels.tolist()
        assert model.d.values.sum() == pytest.approx(1.0, abs=1e-9)
        assert np.all(model.d.values >= 0)
        assert model.support_features.shape == (70, 2)
        if model.converged:
            assert model.log[-1].flips == 0
            assert model.log[-1].delta_d < quick_config.tol_d
        for record in model.log:
            assert not (record.kept_incumbent and record.flips)

    def test_stops_at_outer_cap(self, figure2_data, quick_config):
        config = quick_config.replace(max_outer=1, tol_d=1e-12)
        model = trainer.train(figure2_data.target, figure2_data.source, config)
        assert len(model.log) == 1
        record = model.log[0]
        assert model.converged == (record.flips == 0 and record.delta_d < 1e-12)

    def test_single_pass_equals_self_taught_without_refinement(
            self, figure2_data, quick_config):
        single = trainer.train(figure2_data.target, figure2_data.source,
                               quick_config.replace(variant=Variant.STSVM_I))
        unrefined = trainer.train(figure2_data.target, figure2_data.source,
                                  quick_config.replace(max_outer=1, refine=False))
        np.testing.assert_array_equal(single.alpha, unrefined.alpha)
        np.testing.assert_array_equal(single.d.values, unrefined.d.values)

    def test_outer_objective_never_increases(self, figure2_data, quick_config):
        model = trainer.train(figure2_data.target, figure2_data.source,
                              quick_config.replace(max_outer=6))
        values = [record.l_value for record in model.log]
        for before, after in zip(values, values[1:]):
            assert after <= before + 1e-6 * max(1.0, abs(before))
        # the target block matches its reference, so only h is left
        for record in model.log:
            assert record.l_value == pytest.approx(record.h_value)

    def test_labels_agree_with_stored_fit(self, figure2_data, quick_config):
        model = trainer.train(figure2_data.target, figure2_data.source,
                              quick_config.replace(max_outer=2, tol_d=1e-12))
        assert model.signed_labels.tolist() == (2 * model.labels.values - 1).tolist()

    def test_copied_source_does_not_hurt(self, quick_config):
        self_taught, baseline = [], []
        for seed in range(10):
            target = dataset.generate_clouds(dataset.clouds_spec(
                [(0.0, 0.0), (6.0, 0.0)], 0.3, [5, 5], seed))
            test = dataset.generate_clouds(dataset.clouds_spec(
                [(0.0, 0.0), (6.0, 0.0)], 0.3, [50, 50], seed + 100), Role.TEST)
            source = target.with_role(Role.SOURCE)
            for variant, scores in ((Variant.STSVM, self_taught),
                                    (Variant.SVM_BASELINE, baseline)):
                model = trainer.train(target, source, quick_config.replace(variant=variant))
                labels, _ = trainer.predict(model, test)
                scores.append(evaluation.metrics(
                    evaluation.confusion_counts(test.labels, labels)).accuracy)
        assert np.mean(self_taught) >= np.mean(baseline)

    def test_marginal_variant_keeps_target_rows(self, figure2_data, quick_config):
        model = trainer.train(figure2_data.target, figure2_data.source,
                              quick_config.replace(variant=Variant.DTSVM_LIKE))
        assert model.alpha.size == figure2_data.target.n_samples
        assert model.labels.n_source == 0
        labels, _ = trainer.predict(model, figure2_data.test)
        assert labels.shape == (figure2_data.test.n_samples,)

    def test_standardize(self, separable_target, separable_source, quick_config):
        model = trainer.train(separable_target, separable_source,
                              quick_config.replace(standardize=True))
        assert model.scaler_mean.shape == (2,)
        labels, _ = trainer.predict(model, separable_target)
        assert labels.tolist() == separable_target.labels.tolist()

    def test_deterministic(self, figure2_data, quick_config):
        first = trainer.train(figure2_data.target, figure2_data.source, quick_config)
        second = trainer.train(figure2_data.target, figure2_data.source, quick_config)
        np.testing.assert_array_equal(first.alpha, second.alpha)
        np.testing.assert_array_equal(first.d.values, second.d.values)


class TestPredict:

    @pytest.fixture
    def model(self, separable_target):
        return trainer.train(separable_target, None,
                             TrainConfig(variant=Variant.SVM_BASELINE, kernel_count=4))

    def test_empty_input(self, model):
        labels, scores = trainer.predict(model, np.empty((0, 2)))
        assert labels.shape == (0,) and scores.shape == (0,)

    def test_dim_mismatch(self, model):
        with pytest.raises(DimMismatchError):
            trainer.predict(model, np.zeros((2, 3)))

    def test_single_row(self, model, separable_target):
        labels, scores = trainer.predict(model, separable_target.features[7])
        assert labels.tolist() == [1]
        assert scores[0] >= 0


class TestTrainingRecord:

    def test_dict_round_trip(self):
        record = TrainingRecord(2, 0.5, 0.75, 1e-3, 4, 12, True, False)
        assert TrainingRecord.from_dict(record.to_dict()) == record
        assert record.to_dict()['L'] == 0.75
