"""Bivariate (p,q)-Bleimann-Butzer-Hahn operators.

Thin Python surface over the C++ core: (p,q)-calculus primitives, the
univariate and bivariate operators, closed-form moments and the
convergence/rate analysis helpers.
"""

from ._pqbbh import (
    PqParams,
    OperatorSpec,
    GeneralizedSpec,
    apply2,
    apply2_composed,
    classical_apply,
    corpus_names,
    corpus_modulus,
    corpus_eval,
    default_schedule,
    delta_n,
    euler_product,
    euler_sum,
    euler_weight_log,
    generalized_apply2,
    korovkin_table,
    moment_closed,
    moment_direct,
    node,
    pq_apply,
    pq_binomial,
    pq_factorial,
    pq_integer,
    q_apply,
    split_identity_residual,
    sup_error,
    test_function,
    weights,
)

__all__ = [
    "PqParams",
    "OperatorSpec",
    "GeneralizedSpec",
    "apply2",
    "apply2_composed",
    "classical_apply",
    "corpus_names",
    "corpus_modulus",
    "corpus_eval",
    "default_schedule",
    "delta_n",
    "euler_product",
    "euler_sum",
    "euler_weight_log",
    "generalized_apply2",
    "korovkin_table",
    "moment_closed",
    "moment_direct",
    "node",
    "pq_apply",
    "pq_binomial",
    "pq_factorial",
    "pq_integer",
    "q_apply",
    "split_identity_residual",
    "sup_error",
    "test_function",
    "weights",
]
