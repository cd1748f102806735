"""Transfer for finite cyclic covers and the rational monomorphism check.

The transfer sends a cochain on the cover to the base cochain whose value on
a simplex is the sum over its lifts. Every base simplex has exactly
``sheets`` lifts, so ``transfer ∘ pullback = sheets * id`` already on
cochains.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .complex import apply_coboundary, induced_chain_map, int_matrix
from .covers import CyclicCover
from .errors import NonComposable
from .homology import FgAbelianGroup, cohomology, induced_cohomology_map
from .snf import matrix_rank


def transfer_cochain_map(cover: CyclicCover, k: int) -> np.ndarray:
    """Matrix of the transfer C^k(total) -> C^k(base)."""
    base, total = cover.base, cover.total
    M = int_matrix(base.n_simplices(k), total.n_simplices(k))
    pi = cover.projection
    for j, s in enumerate(total.simplices_of(k)):
        M[base.index(pi.image(s)), j] = 1
    return M


def cochain_pullback_matrix(cover: CyclicCover, k: int) -> np.ndarray:
    """Matrix of the projection's pullback C^k(base) -> C^k(total)."""
    return induced_chain_map(cover.projection, k).T.copy()


def transfer_commutes(cover: CyclicCover, k: int) -> bool:
    """Whether ``δ_base ∘ transfer == transfer ∘ δ_total`` on k-cochains (exact)."""
    mu_k = transfer_cochain_map(cover, k)
    mu_k1 = transfer_cochain_map(cover, k + 1)
    for j in range(cover.total.n_simplices(k)):
        e = np.zeros(cover.total.n_simplices(k), dtype=object)
        e[j] = 1
        lhs = apply_coboundary(cover.base, k, mu_k[:, j])
        rhs = mu_k1.dot(apply_coboundary(cover.total, k, e)) if mu_k1.size else lhs * 0
        if any(int(a) != int(b) for a, b in zip(lhs, rhs)):
            return False
    return True


def _fraction_matrix(M) -> list:
    return [[str(Fraction(int(x))) for x in row] for row in np.asarray(M, dtype=object).tolist()]


@dataclass
class TransferReport:
    degree: int
    sheets: int
    pi_star: np.ndarray
    mu_star: np.ndarray
    composite: np.ndarray
    cochain_identity: bool
    verdict: bool
    pi_star_rank: int = 0
    cover: CyclicCover | None = field(default=None, repr=False)

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "n": self.sheets,
            "pi_star": _fraction_matrix(self.pi_star),
            "mu_star": _fraction_matrix(self.mu_star),
            "composite": _fraction_matrix(self.composite),
            "cochain_identity": self.cochain_identity,
            "pi_star_rank": self.pi_star_rank,
            "verdict": self.verdict,
        }


def verify_transfer_identity(cover: CyclicCover, k: int,
                             base_group: FgAbelianGroup | None = None,
                             total_group: FgAbelianGroup | None = None) -> TransferReport:
    """``μ* ∘ π* == sheets * id`` on rational k-th cohomology.

    ``π*`` has a column per base generator and ``μ*`` a column per cover
    generator; a true verdict makes ``π*`` injective.
    """
    Hb = base_group or cohomology(cover.base, k, "Q")
    Ht = total_group or cohomology(cover.total, k, "Q")
    N = cover.sheets
    mu = transfer_cochain_map(cover, k)
    pi_sharp = cochain_pullback_matrix(cover, k)
    cochain_ok = bool(np.array_equal(mu.dot(pi_sharp) if mu.size else mu[:, :0],
                                     N * np.eye(mu.shape[0], dtype=int).astype(object)))
    pi_star = induced_cohomology_map(cover.projection, k, "Q", source_group=Ht, target_group=Hb)
    mu_star = int_matrix(Hb.free_rank, Ht.free_rank)
    for j, rep in enumerate(Ht.basis):
        mu_star[:, j] = Hb.coordinates(mu.dot(rep))
    composite = mu_star.dot(pi_star) if Ht.free_rank else int_matrix(Hb.free_rank, Hb.free_rank)
    target = N * np.eye(Hb.free_rank, dtype=int).astype(object)
    verdict = bool(np.array_equal(composite, target)) and cochain_ok
    return TransferReport(k, N, pi_star, mu_star, composite, cochain_ok, verdict,
                          matrix_rank(pi_star), cover)


@dataclass
class MonomorphismCertificate:
    degree: int
    stages: int
    composite: np.ndarray
    rank: int
    source_rank: int
    injective: bool
    dimensions: list

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "stages": self.stages,
            "composite": _fraction_matrix(self.composite),
            "rank": self.rank,
            "source_rank": self.source_rank,
            "injective": self.injective,
            "dimensions": self.dimensions,
        }


def monomorphism_certificate(covers: Sequence[CyclicCover], k: int) -> MonomorphismCertificate:
    """Composite pullback on rational H^k along a chain of covers, with its rank."""
    if not covers:
        raise NonComposable("need at least one cover")
    for i in range(1, len(covers)):
        if covers[i].base != covers[i - 1].total:
            raise NonComposable(f"cover {i} does not sit over the total space of cover {i - 1}")
    groups = [cohomology(covers[0].base, k, "Q")] + [cohomology(c.total, k, "Q") for c in covers]
    composite = np.eye(groups[0].free_rank, dtype=int).astype(object)
    for c, lower, upper in zip(covers, groups, groups[1:]):
        step = induced_cohomology_map(c.projection, k, "Q", source_group=upper, target_group=lower)
        composite = step.dot(composite)
    rank = matrix_rank(composite)
    dims = [covers[0].base.dim] + [c.total.dim for c in covers]
    return MonomorphismCertificate(k, len(covers), composite, rank, groups[0].free_rank,
                                   rank == groups[0].free_rank, dims)
