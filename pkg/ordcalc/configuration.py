# Copyright (c) 2015, Yahoo Inc.
# Copyrights licensed under the New BSD License
# See the accompanying LICENSE.txt file for terms.
"""
This module contains the default settings of the ordcalc commands and sweeps
and functions to combine them with explicit arguments.
"""
import dataclasses
import logging
import os
from copy import copy

import psutil


logger = logging.getLogger(__name__)  # pylint: disable=C0103


SEED_VARIABLE = 'ORDCALC_SEED'
FORMATS = ('text', 'json')

DEFAULT_SETTINGS = {
    'format': 'text',
    'seed': 0,
    'theta_size': 9,
    'psi_size': 8,
    'closure_samples': 100000,
    'max_dec': 5,
    'shift': 'minimal',
    'jobs': None,
}


def default_jobs():
    """
    Number of worker processes for parallel checks and sweeps

    Returns
    -------
    int
        Physical cores, else logical cores, else 1
    """
    return psutil.cpu_count(logical=False) or psutil.cpu_count() or 1


def environment_seed():
    """
    The seed from the ORDCALC_SEED environment variable, None when unset
    """
    value = os.environ.get(SEED_VARIABLE)
    if value is None or not value.strip():
        return None
    try:
        return int(value)
    except ValueError:
        logger.warning('Ignoring %s=%r, not an integer', SEED_VARIABLE, value)
        return None


def settings(**kwargs):
    """
    Get settings based on the defaults and the arguments passed

    Parameters
    ----------
    **kwargs
        Setting overrides.  A value of None keeps the default.  A missing seed
        is taken from the environment, a missing jobs count from
        :func:`default_jobs`.

    Returns
    -------
    dict
        The effective settings
    """
    new_settings = copy(DEFAULT_SETTINGS)
    new_settings.update({key: value for key, value in kwargs.items() if value is not None})
    if kwargs.get('seed') is None:
        seed = environment_seed()
        if seed is not None:
            new_settings['seed'] = seed
    if new_settings['jobs'] is None:
        new_settings['jobs'] = default_jobs()
    return new_settings


def config_line(setting, value):
    """
    Generate a single line describing a setting

    Parameters
    ----------
    setting : str
        The setting name

    value : object
        The value

    Returns
    -------
    str
    """
    if isinstance(value, str):
        value = repr(value)
    return '{setting} = {value}'.format(setting=setting, value=value)


def describe(**kwargs):
    """
    The effective settings, one sorted line each
    """
    config_dict = settings(**kwargs)
    description = '\n'.join(config_line(key, config_dict[key]) for key in sorted(config_dict))
    logger.debug('Using settings:\n%s', description)
    return description


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """
    Effective configuration of one command

    Attributes:
        subcommand(str):
            The command path, for example ``resolve build``

        inputs(tuple):
            Input file paths

        size_bound(int):
            Enumeration or universe bound, None when the command has none

        seed(int):
            Seed of the randomized sweeps

        output_format(str):
            ``text`` or ``json``

        jobs(int):
            Worker processes
    """
    subcommand: str
    inputs: tuple = ()
    size_bound: int = None
    seed: int = 0
    output_format: str = 'text'
    jobs: int = 1


def run_config(subcommand, inputs=(), size_bound=None, seed=None, output_format=None, jobs=None):
    """
    Build a :class:`RunConfig` from explicit values and the defaults

    Raises
    ------
    ValueError
        A bound or the job count is not positive, or the format is unknown
    """
    config_dict = settings(seed=seed, format=output_format, jobs=jobs)
    if size_bound is not None and size_bound < 1:
        raise ValueError('size bounds must be positive, got %d' % (size_bound,))
    if config_dict['jobs'] < 1:
        raise ValueError('the job count must be positive, got %d' % (config_dict['jobs'],))
    if config_dict['format'] not in FORMATS:
        raise ValueError('format must be one of %s, got %r' % (', '.join(FORMATS), config_dict['format']))
    return RunConfig(
        subcommand=subcommand, inputs=tuple(inputs), size_bound=size_bound,
        seed=config_dict['seed'], output_format=config_dict['format'], jobs=config_dict['jobs'],
    )
