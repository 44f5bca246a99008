"""Two-layer feasibility through the SU(4) monodromy inequalities.

``A ~ B k C`` for some local ``k`` iff the LogSpecs of ``B``, ``C`` and
``A^-1`` satisfy the 72 multiplicative Horn inequalities of SU(4), for at
least one choice of rho-representatives of the three gates.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .. import weyl
from ..config import TOL
from ..errors import InequalityTableUnavailable
from .qlr import horn_inequalities

N_INEQUALITIES = 72


@lru_cache(maxsize=None)
def inequality_table():
    """72 x 13 array ``[c_alpha(4) | c_beta(4) | c_gamma(4) | d]``.

    Row means ``c_alpha . alpha + c_beta . beta + c_gamma . gamma <= d``.

    Raises:
        InequalityTableUnavailable: when the generated table fails its self-check.
    """
    rows = []
    for i_set, j_set, k_set, d in horn_inequalities(4):
        row = np.zeros(13)
        row[list(i_set)] = 1.0
        row[[4 + j for j in j_set]] = 1.0
        row[[8 + k for k in k_set]] = 1.0
        row[12] = d
        rows.append(row)
    table = np.array(rows)
    _self_check(table)
    table.setflags(write=False)
    return table


def _horn_ok(table, alpha, beta, gamma, eps):
    v = np.concatenate([alpha, beta, gamma])
    return bool(np.all(table[:, :12] @ v <= table[:, 12] + eps))


def _self_check(table):
    if table.shape != (N_INEQUALITIES, 13):
        raise InequalityTableUnavailable(f"expected 72 inequalities, got {table.shape[0]}")
    # I * I = I and a few known two-layer facts (B gate reaches SWAP, CNOT does not).
    checks = [
        ((0.5, 0.5, 0.5), (0.5, 0.25, 0.0), (0.5, 0.25, 0.0), True),
        ((0.5, 0.5, 0.5), (0.5, 0.0, 0.0), (0.5, 0.0, 0.0), False),
        ((0.5, 0.5, 0.0), (0.5, 0.0, 0.0), (0.5, 0.0, 0.0), True),
        ((0.0, 0.0, 0.0), (0.3, 0.2, 0.1), (0.7, 0.2, 0.1), True),
        ((0.0, 0.0, 0.0), (0.3, 0.2, 0.1), (0.3, 0.2, 0.1), False),
        ((0.5, 0.5, 0.5), (0.5, 0.5, 0.0), (0.5, 0.0, 0.0), True),
    ]
    for target, b1, b2, expected in checks:
        got = _feasible(table, target, b1, b2, TOL.geometry)
        if got != expected:
            raise InequalityTableUnavailable(
                f"self-check failed for target={target}, basis=({b1}, {b2})"
            )


def _inverse(spec):
    return weyl.normalize_logspec(-np.asarray(spec, dtype=float))


def _feasible(table, target, b1, b2, eps):
    alphas = [np.array(_inverse(s)) for s in weyl.logspec_variants(target)]
    betas = [np.array(s) for s in weyl.logspec_variants(b1)]
    gammas = [np.array(s) for s in weyl.logspec_variants(b2)]
    return any(
        _horn_ok(table, a, b, g, eps)
        for a, b, g in itertools.product(alphas, betas, gammas)
    )


def two_layer_feasible(target, b1, b2, eps=TOL.geometry) -> bool:
    """Whether ``target`` has a depth-2 circuit with two-qubit layers ``b1, b2``.

    All arguments are Weyl-chamber coordinates; every rho-representative
    combination (1 to 8 of them) is tried.
    """
    return _feasible(inequality_table(), weyl.canonicalize(target),
                     weyl.canonicalize(b1), weyl.canonicalize(b2), eps)


def n_variant_sets(target, b1, b2):
    """How many copies of the inequality system a query checks (1, 2, 4 or 8)."""
    return (len(weyl.logspec_variants(target)) * len(weyl.logspec_variants(b1))
            * len(weyl.logspec_variants(b2)))
