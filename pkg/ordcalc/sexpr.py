# Copyright (c) 2015, Yahoo Inc.
# Copyrights licensed under the New BSD License
# See the accompanying LICENSE.txt file for terms.
"""
Reader and printer for the s-expression wire syntax shared by the notation
systems.

:func:`read` turns text into nested tuples of atom strings, :func:`write`
turns such a tree back into canonical text (single spaces, no trailing
whitespace).  The notation modules interpret the trees.

    >>> read('(sum (mono 0 (cs (v 0))))')
    ('sum', ('mono', '0', ('cs', ('v', '0'))))
    >>> write(('v', ('v', '0')))
    '(v (v 0))'
"""
import functools
import logging

import lark

from .exceptions import ParseError


logger = logging.getLogger(__name__)  # pylint: disable=C0103


GRAMMAR = r'''
    ?start : expr

    ?expr : atom
          | list

    list : "(" expr* ")"

    atom : ATOM

    ATOM : /[^\s()]+/

    %import common.WS
    %ignore WS
'''


class _TreeBuilder(lark.Transformer):
    """
    Builds nested tuples from the lark parse tree
    """

    def list(self, items):  # pylint: disable=W0622
        return tuple(items)

    def atom(self, items):
        return str(items[0])


@functools.lru_cache(maxsize=1)
def _parser():
    logger.debug('Building s-expression parser')
    return lark.Lark(GRAMMAR, parser='lalr', transformer=_TreeBuilder())


def read(text):
    """
    Parse one s-expression

    Parameters
    ----------
    text : str
        The s-expression text

    Returns
    -------
    str or tuple
        An atom string, or a tuple of sub-expressions
    """
    try:
        return _parser().parse(text)
    except lark.exceptions.LarkError as error:
        raise ParseError('malformed s-expression %r: %s' % (text, error)) from error


def write(tree):
    """
    Canonical text for a tree produced by :func:`read`
    """
    if isinstance(tree, str):
        return tree
    return '(' + ' '.join(write(item) for item in tree) + ')'
