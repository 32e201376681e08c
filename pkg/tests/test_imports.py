# -*- coding: utf-8 -*-
# Copyright (c) 2026 Contributors as noted in the AUTHORS file
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

# System imports
import importlib
from pathlib import Path

# Third-party imports
import pytest

# Local imports
import lindblad_locality


PACKAGE_FOLDER = Path(__file__).resolve().parent.parent / 'lindblad_locality'


def list_modules(package_folder, ignores=()):
    '''Dotted names of the package and of every module under it, skipping ignores.'''
    root = package_folder.parent
    for path in sorted(package_folder.rglob('*.py')):
        if '__pycache__' in path.parts:
            continue
        parts = path.relative_to(root).with_suffix('').parts
        if parts[-1] == '__init__':
            parts = parts[:-1]
        name = '.'.join(parts)
        if name not in ignores:
            yield name


@pytest.mark.parametrize('module_name', list_modules(PACKAGE_FOLDER))
def test_imports(module_name):
    assert importlib.import_module(module_name)


@pytest.mark.parametrize('name', lindblad_locality.__all__)
def test_public_names(name):
    assert getattr(lindblad_locality, name) is not None
