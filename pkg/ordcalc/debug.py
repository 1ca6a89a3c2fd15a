# Copyright (c) 2015, Yahoo Inc.
# Copyrights licensed under the New BSD License
# See the accompanying LICENSE.txt file for terms.
"""
Ordcalc Debug Utilities

This module contains utility functions useful for troubleshooting ordcalc
installations.

This module can be run from the command line using the following command::

    python -m ordcalc.debug

or through ``ordcalc debug``.  This will output information like the
following::

    $ python -m ordcalc.debug
    Ordcalc debug information:
        Version: 0.1.0
        Module Path: /tmp/venv/lib/python3.12/site-packages/ordcalc

        Dependencies:
            click = 8.1.7
            lark = 1.2.2
            psutil = 6.0.0

        Settings:
            closure_samples = 100000
            ...

        Source Code Information
            Git Source URL: https://github.com/ordcalc/ordcalc/tree/2ebd1b4d
            Git Hash: 2ebd1b4d9c9ad41c78e8048fda3c69d2917c0348
            Git Version: 0.1.0
            Git Origin: https://github.com/ordcalc/ordcalc.git
            Git Branch: main
"""
import os
from importlib.metadata import PackageNotFoundError, version

from .__init__ import __version__, __git_version__, __source_url__, \
    __git_hash__, __git_origin__, __git_branch__
from .configuration import describe


DEPENDENCIES = ('click', 'lark', 'psutil')


def dependency_versions():
    """
    Installed versions of the runtime dependencies, None for missing ones
    """
    found = {}
    for name in DEPENDENCIES:
        try:
            found[name] = version(name)
        except PackageNotFoundError:  # pragma: no cover
            found[name] = None
    return found


def debug_info_list():
    """
    Return a list with the debug information
    :return:
    """
    info = []
    info.append("Ordcalc debug information:")
    info.append('\tVersion: %s' % __version__)
    info.append('\tModule Path: %s' % os.path.dirname(__file__))
    info.append('\n\tDependencies:')
    for name, installed in dependency_versions().items():
        info.append('\t\t%s = %s' % (name, installed or 'not installed'))
    info.append('\n\tSettings:')
    for line in describe().splitlines():
        info.append('\t\t%s' % line)
    info.append('')
    info.append('\tSource Code Information')
    if __git_version__:  # pragma: no cover
        info.append('\t\tGit Source URL: %s' % __source_url__)
        info.append('\t\tGit Hash: %s' % __git_hash__)
        info.append('\t\tGit Version: %s' % __git_version__)
        info.append('\t\tGit Origin: %s' % __git_origin__)
        info.append('\t\tGit Branch: %s' % __git_branch__)
    return info


def debug_info():
    """
    Return a multi-line string with the debug information
    :return:
    """
    return os.linesep.join(debug_info_list())


def print_debug_info():
    """
    Display information about the ordcalc build on stdout.
    :return:
    """
    print(debug_info())


if __name__ == '__main__':  # pragma: no cover
    print_debug_info()
