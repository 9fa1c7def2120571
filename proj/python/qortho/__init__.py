"""Python access to the qortho C++ core."""

import json
from fractions import Fraction

from . import _qortho
from ._qortho import ModelSolution, pochhammer_inf

__all__ = ["ModelSolution", "pochhammer_inf", "recurrence", "exact_recurrence", "run", "verify"]


def _exact(values):
    return [None if v is None else Fraction(v) for v in values]


def recurrence(weight="unit", q="1/2", alpha="0", n_max=16, bits=None):
    """Recurrence table at working precision; values are decimal strings."""
    return json.loads(_qortho.recurrence(weight, str(q), str(alpha), n_max, bits))


def exact_recurrence(weight="unit", q="1/2", alpha="0", n_max=10):
    """Rational recurrence table with a, b, gamma as Fractions."""
    table = json.loads(_qortho.exact_recurrence(weight, str(q), str(alpha), n_max))
    for key in ("a", "b", "gamma"):
        table[key] = _exact(table[key])
    return table


def run(command, claim="", **options):
    """Same artifact as the command line tool, as a dict with a "passed" flag."""
    return json.loads(_qortho.run_json(command, claim, **options))


def verify(claim, **options):
    return run("verify", claim, **options)
