"""Nonconvex low rank toolkit: scalar prox, GSVT and matrix completion."""

from ._core import (
    ConvergenceError,
    DataError,
    DomainError,
    NumericalError,
    Penalty,
    __version__,
    brute_force_prox,
    complete,
    gen_lowrank,
    gsvt,
    nmae,
    prox,
    rel_err,
    singular_values,
    weighted_svt,
)

__all__ = [
    "ConvergenceError",
    "DataError",
    "DomainError",
    "NumericalError",
    "Penalty",
    "__version__",
    "brute_force_prox",
    "complete",
    "gen_lowrank",
    "gsvt",
    "nmae",
    "prox",
    "rel_err",
    "singular_values",
    "weighted_svt",
]
