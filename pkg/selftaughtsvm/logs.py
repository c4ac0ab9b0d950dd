#!/usr/bin/env python3
# -*- coding: UTF-8 -*-

# logs.py is part of self-taught-svm which learns SVM classifiers
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
Line-delimited JSON log records.

Library modules log through ``logging.getLogger(__name__)`` and attach
structured values with ``extra={'fields': {...}}``; the command line
installs ``JsonLineFormatter`` so that every record becomes one JSON
object per line on standard error.
'''

import datetime
import json
import logging
import sys

import numpy as np

PACKAGE_LOGGER = 'selftaughtsvm'


class JsonLineFormatter(logging.Formatter):
    '''
    Formats a record as ``{"time", "level", "logger", "event", ...}``
    '''

    def format(self, record):
        entry = {
            'time': datetime.datetime.fromtimestamp(
                record.created, tz=datetime.timezone.utc).isoformat(),
            'level': record.levelname.lower(),
            'logger': record.name,
            'event': record.getMessage(),
        }
        entry.update(getattr(record, 'fields', None) or {})
        if record.exc_info:
            entry['exception'] = self.formatException(record.exc_info)
        return json.dumps(entry, default=_jsonable, sort_keys=False)


def configure_logging(level='info', stream=None):
    '''
    Installs a JsonLineFormatter handler on the package logger and
    returns the logger. Calling it again replaces the handler.
    '''
    logger = logging.getLogger(PACKAGE_LOGGER)
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
    handler = logging.StreamHandler(stream if stream is not None else sys.stderr)
    handler.setFormatter(JsonLineFormatter())
    logger.addHandler(handler)
    logger.setLevel(level.upper() if isinstance(level, str) else level)
    logger.propagate = False
    return logger


def error_record(error):
    '''
    Single-line machine-parseable record for an exception
    '''
    code = getattr(error, 'code', type(error).__name__)
    return json.dumps({'level': 'error', 'error': code, 'message': str(error)})


def _jsonable(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    return str(value)
