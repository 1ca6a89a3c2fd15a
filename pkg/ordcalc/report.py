# Copyright (c) 2015, Yahoo Inc.
# Copyrights licensed under the New BSD License
# See the accompanying LICENSE.txt file for terms.
"""
Diagnostics collected by the ordcalc checkers.

A :class:`Report` is empty (``report.ok``) when the checked object is
accepted.  Notes record things a reader should know about an accepted object
(trusted axioms, open hypotheses, truncated quantifiers) without rejecting it.
"""
import dataclasses
import json
import logging


logger = logging.getLogger(__name__)  # pylint: disable=C0103


@dataclasses.dataclass(frozen=True)
class Diagnostic:
    """
    One located problem.

    Attributes:
        path(str):
            Location of the problem inside the checked object, for example
            ``root.1.0`` for the first premise of the second premise of the
            root of a proof tree.

        message(str):
            Human readable description.

        rule(str):
            The rule or structural clause that was violated, if any.
    """
    path: str
    message: str
    rule: str = ''

    def __str__(self):
        if self.rule:
            return '%s [%s]: %s' % (self.path, self.rule, self.message)
        return '%s: %s' % (self.path, self.message)


@dataclasses.dataclass
class Report:
    """
    Result of a checker run
    """
    subject: str = ''
    diagnostics: list = dataclasses.field(default_factory=list)
    notes: list = dataclasses.field(default_factory=list)

    @property
    def ok(self):
        return not self.diagnostics

    def add(self, path, message, rule=''):
        diagnostic = Diagnostic(path, message, rule)
        logger.debug('%s: %s', self.subject or 'report', diagnostic)
        self.diagnostics.append(diagnostic)
        return diagnostic

    def note(self, message):
        self.notes.append(message)

    def extend(self, other):
        self.diagnostics.extend(other.diagnostics)
        self.notes.extend(other.notes)
        return self

    def __iter__(self):
        return iter(self.diagnostics)

    def to_dict(self):
        return {
            'subject': self.subject,
            'accepted': self.ok,
            'diagnostics': [dataclasses.asdict(d) for d in self.diagnostics],
            'notes': list(self.notes),
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)

    def render(self):
        """
        Multi-line text rendering used by the command line
        """
        lines = [
            '%s: %s' % (self.subject or 'result', 'accepted' if self.ok else 'rejected')
        ]
        lines.extend('  ' + str(d) for d in self.diagnostics)
        lines.extend('  note: ' + n for n in self.notes)
        return '\n'.join(lines)
