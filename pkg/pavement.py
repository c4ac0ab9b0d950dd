#!/usr/bin/env python3
# -*- coding: utf-8 -*-

# pavement.py is part of self-taught-svm which learns SVM classifiers
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

from paver.easy import *
from paver.setuputils import setup

options(experiments=Bunch(outdir=path('build') / 'experiments',
                          trials=10))

setup(name='self-taught-svm',
      description='SVM classifiers learned from labeled target data and '
      'unlabeled source data with multiple kernels and self-labeling',
      long_description=open('README.rst').read(),
      version='0.1.0',
      author='The self-taught-svm developers',
      packages=['selftaughtsvm'],
      scripts=['stsvm.py'],
      install_requires=['numpy', 'scipy', 'scikit-learn', 'pandas', 'joblib'],
      classifiers=[
          'Development Status :: 3 - Alpha', 'Environment :: Console',
          'Intended Audience :: Science/Research',
          'License :: OSI Approved :: GNU Affero General Public License '
          'v3 or later (AGPLv3+)', 'Programming Language :: Python',
          'Natural Language :: English', 'Operating System :: OS Independent',
          'Topic :: Scientific/Engineering :: Artificial Intelligence'
      ])


@task
@needs('generate_setup', 'minilib', 'setuptools.command.sdist')
def sdist():
    pass


@task
def test():
    sh('pytest -m "not slow" selftaughtsvm')


@task
def acceptance():
    sh('pytest -m slow selftaughtsvm')


@task
def lint():
    sh('pylint selftaughtsvm')


@task
def clean_experiments(options):
    if options.experiments.outdir.exists():
        options.experiments.outdir.rmtree()


@task
@needs('clean_experiments')
def experiments(options):
    '''
    Runs the paired scenario trials and the parameter sweeps, writing
    JSON-lines records under build/experiments
    '''
    outdir = options.experiments.outdir
    outdir.makedirs()
    n = options.experiments.trials
    sh(f'stsvm trials --scenario figure2 --n {n} --variants stsvm,stsvm-i,dtsvm,svm '
       f'--out {outdir / "figure2.jsonl"}')
    sh(f'stsvm trials --scenario unrelated --n {n} --variants stsvm,svm '
       f'--out {outdir / "unrelated.jsonl"}')
    sh(f'stsvm sweep --kernels-list 4,8,12,16 --n {n} '
       f'--out {outdir / "kernels.jsonl"}')
    sh(f'stsvm sweep --positives-list 1,2,3,4,5,6,7,8,9,10 --n {n} '
       f'--out {outdir / "positives.jsonl"}')
    sh(f'stsvm sweep --lambda-list 0,0.1,1,10 --n {n} '
       f'--out {outdir / "lambda.jsonl"}')
