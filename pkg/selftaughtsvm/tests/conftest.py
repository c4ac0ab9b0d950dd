import logging

import numpy as np
import pytest

from selftaughtsvm import dataset, scenarios
from selftaughtsvm.adaptation import LabelVector
from selftaughtsvm.config import TrainConfig
from selftaughtsvm.dataset import Dataset, Role
from selftaughtsvm.logs import PACKAGE_LOGGER


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260418)


@pytest.fixture
def random_psd(rng):
    '''
    Returns a function making a random PSD matrix of a given size
    '''
    def make(n, rank=None):
        factor = rng.normal(size=(n, rank or n))
        return factor @ factor.T / (rank or n)
    return make


@pytest.fixture
def separable_target() -> Dataset:
    '''
    5 + 5 points far apart relative to their spread
    '''
    return dataset.generate_clouds(dataset.clouds_spec(
        [(0.0, 0.0), (6.0, 0.0)], 0.3, [5, 5], seed=3))


@pytest.fixture
def separable_source() -> Dataset:
    return dataset.generate_clouds(dataset.clouds_spec(
        [(0.0, 0.5), (6.0, 0.5)], 0.3, [20, 20], seed=4), Role.SOURCE)


@pytest.fixture
def figure2_data() -> scenarios.ScenarioData:
    '''
    The two-cloud shift scenario with a small source block
    '''
    return scenarios.figure2(0, n_source=30, n_test=20)


@pytest.fixture
def quick_config() -> TrainConfig:
    '''
    Few kernels and few outer iterations; enough to exercise every path
    '''
    return TrainConfig(kernel_count=4, max_outer=3, max_inner=20)


@pytest.fixture
def four_point_labels() -> LabelVector:
    '''
    Target labels 1, 0 over source labels 1, 0
    '''
    return LabelVector([1.0, 0.0, 1.0, 0.0], 2)


@pytest.fixture
def target_csv(tmp_path):
    path = tmp_path / 'target.csv'
    path.write_text('f1,f2,label\n0,0,0\n1,1,1\n', encoding='utf-8')
    return path


@pytest.fixture(autouse=True)
def package_logger():
    '''
    Undoes configure_logging so that caplog sees package records
    '''
    logger = logging.getLogger(PACKAGE_LOGGER)
    yield logger
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
    logger.propagate = True
    logger.setLevel(logging.NOTSET)
