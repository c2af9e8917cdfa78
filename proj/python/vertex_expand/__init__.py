"""Free-fermion expansion of staggered six-vertex models."""

import json
from fractions import Fraction

from . import _core
from ._core import (
    Error,
    baxter_free_energy,
    baxter_series,
    baxter_series_converged,
    constrained_ratio,
    dF0_dbetas,
    first_order_free_energy,
    j_of_betaeps,
    kt_threshold,
    log_partition_pfaffian,
    matching_sum,
    partition_enumerate,
    run_suite,
    singular_exponent,
    singular_exponent_u,
    transfer_matrix_free_energy,
    za_ratio,
    zb_ratio,
)


def _fractions(items):
    return [Fraction(s) for s in items]


def stirling_correction(order):
    return _fractions(_core.stirling_correction(order))


def bernoulli_numbers(k_max):
    return _fractions(_core.bernoulli_numbers(k_max))


def t_of_betas(order):
    return _fractions(_core.t_of_betas(order))


def _log_series(raw):
    q, power = raw["prefactor"]
    return {
        "coefficients": _fractions(raw["coefficients"]),
        "bracket": _fractions(raw["bracket"]),
        # value q * pi**-power
        "prefactor": (Fraction(q), power),
        "log_power": raw["log_power"],
    }


def singular_t_series(order):
    return _log_series(_core.singular_t_series(order))


def singular_betas_series(order):
    return _log_series(_core.singular_betas_series(order))


def b2_series(order):
    return _log_series(_core.b2_series(order))


def exponent_u_expansion(order):
    """Coefficient of U^k as {pi_power: Fraction}."""
    return [{k: Fraction(v) for k, v in term.items()} for term in _core.exponent_u_expansion(order)]


def verify_first_order():
    return json.loads(_core.verify_first_order())
