"""Fourier entropy and influence of boolean functions.

Thin wrapper over the compiled ``_fei`` module. Experiment records and FEI
reports come back as plain dictionaries with the same fields as the JSON
documents the ``fei`` command-line tool prints.
"""

import json

from ._fei import (
    CapacityError,
    DomainError,
    FeiError,
    InvalidSpectrumError,
    NotBooleanError,
    ParseError,
    Spectrum,
    TruthTable,
    __version__,
    arity_cap,
    chebyshev_bound,
    coefficient_naive,
    cyclic_invariant_count,
    cyclic_invariant_enumerate,
    entropy,
    fraction_bound,
    influence_combinatorial,
    influence_coord,
    influence_total,
    named_function,
    random_function,
    set_arity_cap,
    spectrum_of,
    symmetric_enumerate,
    truth_table_of,
)
from . import _fei


def fei_report(tt, c=2.0):
    return json.loads(_fei._fei_report(tt, c))


def exhaustive_stats(n, epsilon=1.0, threads=0):
    return json.loads(_fei._exhaustive_stats(n, epsilon, threads))


def fourth_moment_table(n):
    return json.loads(_fei._fourth_moment_table(n))


def monte_carlo(n, trials, seed, epsilon=1.0, threads=0):
    return json.loads(_fei._monte_carlo(n, trials, seed, epsilon, threads))


def family_scan(family, c=2.0, threads=0):
    return json.loads(_fei._family_scan(family, c, threads))


__all__ = [name for name in dir() if not name.startswith("_")]
