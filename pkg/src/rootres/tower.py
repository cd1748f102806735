"""Finite towers of cyclic covers resolving first-cohomology classes.

Stage ``k + 1`` is the fiber product of the cyclic covers of stage ``k``
for the selected classes at that stage's exponent. Stages are numbered
from 1; ``covers[k - 1]`` is the bonding map from stage ``k + 1`` to stage
``k``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .complex import (
    SimplicialComplex, SimplicialMap, apply_coboundary, complex_from_json, complex_to_json,
    full_subcomplex, label_to_json,
)
from .covers import build_cover, pullback_divisibility_certificate
from .errors import DomainMismatch, ExplosionGuard, RootResError
from .functions import from_cocycle
from .homology import (
    DivisibilityWitness, NotDivisible, cochain_from_json, cochain_to_json, cohomology,
    divisible_by, pullback_cochain,
)
from .transfer import MonomorphismCertificate, monomorphism_certificate

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10 ** 6


@dataclass
class StageRecord:
    n: int
    rule: str
    classes: list                       # cocycle vectors on this stage
    witnesses: list = field(default_factory=list)   # PullbackCertificate per class
    note: str = ""

    def to_json(self, K: SimplicialComplex) -> dict:
        return {
            "n": self.n,
            "rule": self.rule,
            "classes": [cochain_to_json(K, 1, c) for c in self.classes],
            "resolved_exactly": [w.exact for w in self.witnesses],
            "note": self.note,
        }


@dataclass
class Tower:
    stages: list
    covers: list
    schedule: list

    def __len__(self):
        return len(self.stages)

    def bonding(self, i: int) -> SimplicialMap:
        """Projection from stage ``i + 1`` to stage ``i`` (1-based)."""
        return self.covers[i - 1].projection

    def projection_map(self, j: int, i: int) -> dict:
        """Vertex map of the composite bonding from stage ``j`` down to stage ``i``."""
        if not 1 <= i <= j <= len(self.stages):
            raise RootResError(f"no map from stage {j} to stage {i}")
        vm = {x: x for x in self.stages[j - 1].vertices}
        for k in range(j - 1, i - 1, -1):
            step = self.covers[k - 1].projection.vertex_map
            vm = {x: step[y] for x, y in vm.items()}
        return vm

    def to_json(self) -> dict:
        return {
            "stages": [
                {"index": i + 1, "counts": [len(level) for level in K.simplices],
                 "dim": K.dim, "euler": K.euler_characteristic()}
                for i, K in enumerate(self.stages)
            ],
            "seed": complex_to_json(self.stages[0]),
            "bondings": [
                {"exponents": list(c.exponents), "sheets": c.sheets, "components": c.components,
                 "cocycles": [cochain_to_json(c.base, 1, c.cocycle_vector(i)) for i in range(len(c.exponents))]}
                for c in self.covers
            ],
            "schedule": [rec.to_json(K) for rec, K in zip(self.schedule, self.stages)],
        }


def _normalize_schedule(schedule) -> list:
    out = []
    for entry in schedule:
        n, rule = entry if isinstance(entry, (tuple, list)) else (entry, "basis")
        if int(n) < 2:
            raise RootResError(f"exponent must be at least 2, got {n!r}")
        out.append((int(n), rule))
    if not out:
        raise RootResError("empty schedule")
    return out


def build_tower(seed: SimplicialComplex, schedule: Sequence, length: int,
                budget: int = DEFAULT_BUDGET) -> Tower:
    """Tower of ``length`` stages over ``seed``.

    ``schedule`` entries are ``(n, rule)``; stage ``k`` uses entry
    ``(k - 1) mod len(schedule)``. ``rule`` is ``"basis"`` (every free H^1
    generator; the zero class when there are none) or an explicit list of
    cocycles on that stage.
    """
    schedule = _normalize_schedule(schedule)
    if length < 1:
        raise RootResError("a tower has at least one stage")
    stages, covers, records = [seed], [], []
    for k in range(1, length):
        X = stages[-1]
        n, rule = schedule[(k - 1) % len(schedule)]
        note = ""
        # every rule selects at least one class, so the stage has >= n sheets
        if n * X.total_simplices() > budget:
            raise ExplosionGuard(k + 1, n * X.total_simplices(), budget)
        if isinstance(rule, str):
            if rule != "basis":
                raise RootResError(f"unknown selection rule {rule!r}")
            H = cohomology(X, 1)
            classes = list(H.basis[: H.free_rank])
            if not classes:
                classes = [np.zeros(X.n_simplices(1), dtype=object)]
                note = "H^1 = 0: trivial cocycle, stage is a disjoint union of copies"
            rule_name = "basis"
        else:
            classes = [_explicit_class(X, c) for c in rule]
            rule_name = "explicit"
        sheets = n ** len(classes)
        size = sheets * X.total_simplices()
        if size > budget:
            raise ExplosionGuard(k + 1, size, budget)
        cover = build_cover(X, classes, [n] * len(classes))
        rec = StageRecord(n, rule_name, classes, note=note)
        for i, c in enumerate(classes):
            rec.witnesses.append(pullback_divisibility_certificate(cover, from_cocycle(X, c), factor=i))
        log.debug("stage %d: %d sheets, %d simplices", k + 1, sheets, cover.total.total_simplices())
        stages.append(cover.total)
        covers.append(cover)
        records.append(rec)
    records.append(StageRecord(0, "final", []))
    return Tower(stages, covers, records)


def _explicit_class(X: SimplicialComplex, c):
    if isinstance(c, dict):
        if all(isinstance(k, str) for k in c):
            return cochain_from_json(X, 1, c)
        x = np.zeros(X.n_simplices(1), dtype=object)
        for (u, v), val in c.items():
            x[X.index((u, v) if u < v else (v, u))] += val if u < v else -val
        return x
    return np.array([int(v) for v in c], dtype=object)


@dataclass
class DivisibilityTrace:
    stage: int
    n: int
    subset: tuple
    resolved_at: int | None
    witness: DivisibilityWitness | None = None
    exact: bool = False
    pairings: list = field(default_factory=list)   # (stage, obstruction pairing) while unresolved
    length: int = 0

    @property
    def resolved(self) -> bool:
        return self.resolved_at is not None

    def to_json(self) -> dict:
        return {
            "stage": self.stage,
            "n": self.n,
            "subset": [label_to_json(v) for v in self.subset],
            "resolved_at": self.resolved_at if self.resolved else "unresolved within tower",
            "exact": self.exact,
            "obstruction_pairings": [{"stage": j, "pairing": p} for j, p in self.pairings],
            "tower_length": self.length,
        }


def tower_divisibility_check(T: Tower, i: int, subset, c, n: int) -> DivisibilityTrace:
    """First stage ``j > i`` where the pullback of ``c`` to the preimage of ``A_i`` is n-divisible.

    ``subset`` spans the full subcomplex ``A_i`` of stage ``i`` (``None``
    for the whole stage); ``c`` is an integer 1-cocycle on ``A_i``.
    """
    if not 1 <= i < len(T.stages):
        raise RootResError(f"stage {i} has no later stages in a tower of length {len(T.stages)}")
    X = T.stages[i - 1]
    subset = tuple(X.vertices if subset is None else sorted(subset))
    try:
        A, _ = full_subcomplex(X, subset)
        x = _explicit_class(A, c)
    except (KeyError, ValueError) as exc:
        raise DomainMismatch(f"class is not a cochain on the chosen subcomplex: {exc}") from exc
    if len(x) != A.n_simplices(1) or any(apply_coboundary(A, 1, x)):
        raise DomainMismatch("class is not a 1-cocycle on the chosen subcomplex")
    trace = DivisibilityTrace(i, n, subset, None, length=len(T.stages))
    keep = set(subset)
    for j in range(i + 1, len(T.stages) + 1):
        vm = T.projection_map(j, i)
        pre = [y for y in T.stages[j - 1].vertices if vm[y] in keep]
        Aj, _ = full_subcomplex(T.stages[j - 1], pre)
        restricted = SimplicialMap(Aj, A, {y: vm[y] for y in Aj.vertices})
        pulled = pullback_cochain(restricted, 1, x) if Aj.n_simplices(1) else np.zeros(0, dtype=object)
        res = divisible_by((Aj, 1, pulled), n)
        if isinstance(res, NotDivisible):
            trace.pairings.append((j, res.pairing))
            continue
        rhs = n * res.quotient + apply_coboundary(Aj, 0, res.correction)
        trace.resolved_at = j
        trace.witness = res
        trace.exact = all(int(a) == int(b) for a, b in zip(pulled, rhs))
        return trace
    return trace


@dataclass
class DimensionWitness:
    degree: int
    certificate: MonomorphismCertificate | None
    dimensions: list
    injective: bool
    rank: int

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "injective": self.injective,
            "rank": self.rank,
            "dimensions": self.dimensions,
            "dimension_nonincreasing": all(a >= b for a, b in zip(self.dimensions, self.dimensions[1:])),
            "certificate": None if self.certificate is None else self.certificate.to_json(),
        }


def dimension_witness(T: Tower, m: int) -> DimensionWitness:
    """Injectivity of the composite pullback on rational H^m from the seed to the top stage."""
    seed = T.stages[0]
    H = cohomology(seed, m, "Q")
    if m > seed.dim or H.free_rank == 0:
        raise RootResError(f"seed has no rational cohomology in degree {m}")
    dims = [K.dim for K in T.stages]
    if not T.covers:
        return DimensionWitness(m, None, dims, True, H.free_rank)
    cert = monomorphism_certificate(T.covers, m)
    return DimensionWitness(m, cert, dims, cert.injective, cert.rank)


def tower_from_json(doc: dict) -> Tower:
    """Rebuild a tower from its seed and recorded bonding cocycles."""
    seed = complex_from_json(doc["seed"])
    stages, covers, records = [seed], [], []
    for b in doc.get("bondings", []):
        X = stages[-1]
        classes = [cochain_from_json(X, 1, c) for c in b["cocycles"]]
        cover = build_cover(X, classes, b["exponents"])
        rec = StageRecord(b["exponents"][0], "explicit", classes)
        for i, c in enumerate(classes):
            rec.witnesses.append(pullback_divisibility_certificate(cover, from_cocycle(X, c), factor=i))
        stages.append(cover.total)
        covers.append(cover)
        records.append(rec)
    records.append(StageRecord(0, "final", []))
    return Tower(stages, covers, records)
