"""Derived report quantities for a verified instance (p, n).

Bundles the decomposition and final-type summary with the downstream
consequences: measured Cartier iterate ranks, the elliptic-rank bound, the
two Selmer ranks for a constant elliptic curve over the function field, the
dimension partition the Dieudonne factors force on any product decomposition
of the Jacobian, and whether the final-type stratum sits inside the
supersingular locus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import derham as derham_mod
from . import eo as eo_mod
from .errors import VerificationFailure

DEFAULT_MAX_GENUS = 10**6


@dataclass(frozen=True)
class ReportBundle:
    p: int
    n: int
    q: int
    genus: int
    decomposition: tuple[eo_mod.FactorReport, ...]
    eo: eo_mod.EOType
    cartier_ranks: tuple[int, ...]  # measured rank of the i-th V iterate, i=1..n
    elliptic_rank_bound: int
    selmer_rank_ordinary: int
    selmer_rank_supersingular: int
    partition_eta_d: tuple[tuple[int, int], ...]  # (factor dim in g units, count)
    supersingular_locus_contained: bool


def supersingular_count(p: int, n: int) -> int:
    """(p(p-1)/2)^n: bound for the elliptic rank and the supersingular
    Selmer rank when n is odd."""
    return (p * (p - 1) // 2) ** n


def applications_report(p: int, n: int) -> ReportBundle:
    """Compute the report bundle; refuses a cell that fails verification."""
    verdict = eo_mod.verify_main_theorem(p, n)
    if not verdict.verified:
        raise VerificationFailure(
            f"cell p={p} n={n} failed verification: {'; '.join(verdict.mismatches)}"
        )
    ops = derham_mod.build_operators(p, n)
    eo = verdict.eo
    g = derham_mod.genus(p, n)

    partition: dict[int, int] = {}
    for factor in verdict.factors:
        half_dim = factor.dimension // 2
        partition[half_dim] = partition.get(half_dim, 0) + factor.multiplicity
    eta_d = tuple(sorted(partition.items()))
    if sum(dim * count for dim, count in eta_d) != g:
        raise VerificationFailure("factor dimension partition does not sum to g")

    s = math.ceil(g / 2)
    return ReportBundle(
        p=p,
        n=n,
        q=p**n,
        genus=g,
        decomposition=verdict.factors,
        eo=eo,
        cartier_ranks=tuple(derham_mod.cartier_rank(ops, i) for i in range(1, n + 1)),
        elliptic_rank_bound=0 if n % 2 == 0 else supersingular_count(p, n),
        selmer_rank_ordinary=2 * derham_mod.cartier_rank_formula(p, n, 1),
        selmer_rank_supersingular=0 if n % 2 == 0 else supersingular_count(p, n),
        partition_eta_d=eta_d,
        supersingular_locus_contained=eo.nu_at(s) == 0,
    )
