"""Exact and approximate n-th roots, obstructions, and the closedness audit."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import kernels
from .complex import (
    SimplicialComplex, apply_boundary, apply_coboundary, bfs_forest,
    full_subcomplex, label_to_json, validate_complex,
)
from .errors import CocycleViolation, InvalidModulus, MeshTooCoarse, RootResError
from .functions import (
    DEFAULT_SEED, TWO_PI_I, LogFunction, SampledFunction, audit_samples,
    log_function_to_json, make_log_function, power_audit,
    sample_sampled_function,
)
from .homology import (
    DivisibilityWitness, NotDivisible, cochain_to_json, cohomology,
    divisible_by, group_is_n_divisible, pairing,
)

ROOT_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class RootCertificate:
    """``root**n == f`` pointwise, from ``w_f = n*w_root + δm``."""

    f: LogFunction
    root: LogFunction
    n: int
    witness: DivisibilityWitness
    audit_error: float
    seed: int = DEFAULT_SEED

    def __bool__(self):
        return True

    def verify(self, tol: float = ROOT_TOLERANCE) -> bool:
        K = self.f.complex
        lhs = self.f.winding_vector()
        quotient = self.root.winding_vector()
        if any(int(a) != int(b) for a, b in zip(quotient, self.witness.quotient)):
            return False
        rhs = self.n * quotient + apply_coboundary(K, 0, self.witness.correction)
        exact = all(int(a) == int(b) for a, b in zip(lhs, rhs))
        return exact and power_audit(self.root, self.f, self.n, seed=self.seed) < tol

    def to_json(self) -> dict:
        K = self.f.complex
        return {
            "kind": "root",
            "n": self.n,
            "root": log_function_to_json(self.root),
            "witness": self.witness.to_json(K, 1),
            "audit_error": self.audit_error,
            "seed": self.seed,
        }


@dataclass(frozen=True, eq=False)
class ObstructionCertificate:
    """An integer 1-cycle on which the winding class pairs nonzero mod n."""

    complex: SimplicialComplex
    cycle: np.ndarray
    pairing: int
    n: int

    def __bool__(self):
        return False

    def verify(self, winding=None) -> bool:
        closed = not any(apply_boundary(self.complex, 1, self.cycle))
        ok = closed and self.pairing % self.n != 0
        if winding is not None:
            ok = ok and pairing(winding, self.cycle) == self.pairing
        return ok

    def to_json(self) -> dict:
        return {
            "kind": "obstruction",
            "cycle": cochain_to_json(self.complex, 1, self.cycle),
            "pairing": int(self.pairing),
            "n": self.n,
        }


def _check_n(n):
    if int(n) != n or n < 2:
        raise InvalidModulus(f"exponent must be an integer >= 2, got {n!r}")


def root_from_witness(f: LogFunction, witness: DivisibilityWitness) -> LogFunction:
    """``log' = (log + 2πi m) / n`` with windings ``w'``."""
    K, n = f.complex, witness.n
    m = dict(zip(K.vertices, witness.correction))
    logs = {v: (f.vertex_log[v] + TWO_PI_I * int(m[v])) / n for v in K.vertices}
    return LogFunction(K, logs, {e: int(q) for e, q in zip(K.edges, witness.quotient)})


def exact_root(f: LogFunction, n: int, seed: int = DEFAULT_SEED):
    """An n-th root of ``f`` with certificate, or an obstruction certificate."""
    _check_n(n)
    K = f.complex
    result = divisible_by((K, 1, f.winding_vector()), n)
    if isinstance(result, NotDivisible):
        return ObstructionCertificate(K, result.cycle, result.pairing, n)
    g = root_from_witness(f, result)
    return RootCertificate(f, g, n, result, power_audit(g, f, n, seed=seed), seed)


# ---- approximate roots ------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ObstructionOnA:
    """The lifted class on the region ``|F| >= eps`` is not n-divisible."""

    region: SimplicialComplex
    lifted: LogFunction
    certificate: ObstructionCertificate
    eps: float

    def __bool__(self):
        return False

    def to_json(self) -> dict:
        doc = self.certificate.to_json()
        doc.update(kind="obstruction_on_A", eps=self.eps,
                   region=[label_to_json(v) for v in self.region.vertices])
        return doc


@dataclass(frozen=True, eq=False)
class ApproxRoot:
    """``g`` with ``|F - g**n|`` audited below ``bound`` everywhere sampled."""

    F: SampledFunction
    root: SampledFunction
    n: int
    eps: float
    measured_error: float
    bound: float
    region: SimplicialComplex
    exact: RootCertificate
    refinements: int = 0
    seed: int = DEFAULT_SEED

    def __bool__(self):
        return True

    def to_json(self) -> dict:
        from .functions import sampled_to_json
        return {
            "kind": "approx_root",
            "n": self.n,
            "eps": self.eps,
            "measured_error": self.measured_error,
            "bound": self.bound,
            "refinements": self.refinements,
            "seed": self.seed,
            "root": sampled_to_json(self.root),
        }


def _round_half_to_zero(x: float) -> int:
    f = math.floor(x)
    frac = x - f
    if frac > 0.5:
        return f + 1
    if frac < 0.5 or f >= 0:
        return f
    return f + 1


def unwrap_log(F: SampledFunction, vertices) -> LogFunction:
    """Lift ``F`` on the full subcomplex over ``vertices`` (all nonzero) to a LogFunction.

    Phases are unwrapped along a breadth-first spanning forest so forest
    edges carry winding 0; other edges get the nearest integer to
    ``(phase_u - phase_v) / 2π`` (ties toward 0). Raises
    :class:`CocycleViolation` if the result is not a cocycle, which happens
    only when the phase varies too much across some triangle.
    """
    A, _ = full_subcomplex(F.complex, vertices)
    phase = {}
    for v, p in bfs_forest(A):
        theta = cmath.phase(F.vertex_value[v])
        if p is not None:
            d = theta - phase[p]
            theta = phase[p] + d - 2 * math.pi * _round_half_to_zero(d / (2 * math.pi))
        phase[v] = theta
    logs = {v: complex(math.log(abs(F.vertex_value[v])), phase[v]) for v in A.vertices}
    winding = {(u, v): _round_half_to_zero((phase[u] - phase[v]) / (2 * math.pi)) for u, v in A.edges}
    return make_log_function(A, logs, winding)


def oscillation(F: SampledFunction):
    """Largest ``(oscillation, simplex)`` over all simplices of dimension >= 1."""
    worst, where = 0.0, None
    for k in range(1, F.complex.dim + 1):
        for s in F.complex.simplices_of(k):
            vals = [complex(F.vertex_value[v]) for v in s]
            for a, b in combinations(vals, 2):
                d = abs(a - b)
                if d > worst:
                    worst, where = d, s
    return worst, where


def approx_root(F: SampledFunction, n: int, eps: float, refine: bool = False,
                max_refinements: int = 8, seed: int = DEFAULT_SEED):
    """Approximate n-th root of a sampled function that may vanish.

    The region ``A`` is the full subcomplex on vertices with ``|F| >= eps``.
    ``F|A`` is lifted to a LogFunction and rooted exactly; remaining
    vertices get values of modulus ``|F(v)|**(1/n)`` aligned with a
    neighbouring root value. The returned ``bound`` is ``3*eps``.

    With ``refine=True`` the complex (dimension <= 2) is midpoint-subdivided
    until every simplex oscillates by less than ``eps/2``; otherwise a
    coarser mesh raises :class:`MeshTooCoarse` (after the obstruction test,
    which does not depend on the mesh).
    """
    _check_n(n)
    if not eps > 0:
        raise RootResError("eps must be positive")
    refinements = 0
    if refine:
        while oscillation(F)[0] >= eps / 2:
            if refinements >= max_refinements:
                break
            F = midpoint_subdivide(F)
            refinements += 1
    K = F.complex
    inside = [v for v in K.vertices if abs(complex(F.vertex_value[v])) >= eps]
    try:
        lifted = unwrap_log(F, inside)
    except CocycleViolation as exc:
        raise MeshTooCoarse(exc.triangle, oscillation(F)[0], eps / 2) from exc
    exact = exact_root(lifted, n, seed)
    if isinstance(exact, ObstructionCertificate):
        return ObstructionOnA(lifted.complex, lifted, exact, eps)
    osc, where = oscillation(F)
    if osc >= eps / 2:
        raise MeshTooCoarse(where, osc, eps / 2)

    g = {v: complex(cmath.exp(exact.root.vertex_log[v])) for v in inside}
    nbrs = K.neighbours()
    for v in K.vertices:
        if v in g:
            continue
        z = complex(F.vertex_value[v])
        r = abs(z) ** (1.0 / n)
        anchor = next((u for u in nbrs[v] if u in exact.root.vertex_log), None)
        if anchor is not None:
            gu = g[anchor]
            g[v] = gu / abs(gu) * r
        elif z == 0:
            g[v] = 0j
        else:
            g[v] = cmath.rect(r, cmath.phase(z) / n)
    root = SampledFunction(K, g)
    measured = sampled_power_error(root, F, n, seed)
    bound = 3.0 * eps
    if not measured < bound:
        raise RootResError(f"audited error {measured:.4g} exceeds the {bound:.4g} contract")
    return ApproxRoot(F, root, n, eps, measured, bound, lifted.complex, exact, refinements, seed)


def sampled_power_error(g: SampledFunction, F: SampledFunction, n: int, seed: int = DEFAULT_SEED) -> float:
    samples = audit_samples(F.complex, seed)
    G = sample_sampled_function(g, samples)
    Fv = sample_sampled_function(F, samples)
    worst = 0.0
    for a, b in zip(G, Fv):
        if a.size:
            worst = max(worst, float(kernels.power_residual(a, b, n).max()))
    return worst


def midpoint_subdivide(F: SampledFunction) -> SampledFunction:
    """Split every edge at its midpoint (triangles into four); values interpolate.

    The refined complex is relabelled by integers in sorted order of the
    old labels (vertices first, then edge midpoints).
    """
    K = F.complex
    if K.dim > 2:
        raise RootResError("midpoint subdivision is implemented for dimension <= 2")
    old = [("v", v) for v in K.vertices] + [("e", e) for e in K.edges]
    new_id = {key: i for i, key in enumerate(old)}

    def vid(v):
        return new_id[("v", v)]

    def mid(a, b):
        return new_id[("e", (a, b) if a < b else (b, a))]

    simplices = [[vid(v)] for v in K.vertices]
    for a, b in K.edges:
        simplices += [[vid(a), mid(a, b)], [mid(a, b), vid(b)]]
    for a, b, c in K.simplices_of(2):
        ab, ac, bc = mid(a, b), mid(a, c), mid(b, c)
        simplices += [[vid(a), ab, ac], [vid(b), ab, bc], [vid(c), ac, bc], [ab, ac, bc]]
    L = validate_complex(simplices)
    values = {vid(v): complex(F.vertex_value[v]) for v in K.vertices}
    for a, b in K.edges:
        values[mid(a, b)] = 0.5 * (complex(F.vertex_value[a]) + complex(F.vertex_value[b]))
    return SampledFunction(L, values)


# ---- closedness audit ---------------------------------------------------------

@dataclass
class AuditEntry:
    subset: tuple
    h1_free_rank: int
    h1_torsion: tuple
    divisible: bool
    certificate: ObstructionCertificate | None = None

    def to_json(self) -> dict:
        doc = {
            "subset": [label_to_json(v) for v in self.subset],
            "H1": {"free_rank": self.h1_free_rank, "torsion": list(self.h1_torsion)},
            "divisible": self.divisible,
        }
        if self.certificate is not None:
            doc["certificate"] = self.certificate.to_json()
        return doc


@dataclass
class AuditReport:
    n: int
    max_subset_size: int
    entries: list = field(default_factory=list)

    @property
    def first_failure(self) -> AuditEntry | None:
        return next((e for e in self.entries if not e.divisible), None)

    @property
    def passed(self) -> bool:
        return self.first_failure is None

    def to_json(self) -> dict:
        fail = self.first_failure
        return {
            "n": self.n,
            "max_subset_size": self.max_subset_size,
            "scope": ("full subcomplexes on vertex subsets of size <= max_subset_size; "
                      "H^1 of a finite complex is free, so n-divisible iff H^1 = 0"),
            "verdict": "no obstruction found up to cap" if fail is None else "obstruction",
            "first_failure": None if fail is None else fail.to_json(),
            "entries": [e.to_json() for e in self.entries],
        }


def closedness_audit(K: SimplicialComplex, n: int, max_subset_size: int | None = None) -> AuditReport:
    """n-divisibility of H^1 on every full subcomplex up to the size cap."""
    _check_n(n)
    cap = len(K.vertices) if max_subset_size is None else max_subset_size
    if cap > len(K.vertices) or cap < 0:
        raise RootResError(f"max_subset_size must lie in [0, {len(K.vertices)}]")
    report = AuditReport(n, cap)
    for size in range(cap + 1):
        for subset in combinations(K.vertices, size):
            A, _ = full_subcomplex(K, subset)
            H = cohomology(A, 1)
            ok = group_is_n_divisible(H, n)
            cert = None
            if not ok:
                res = divisible_by((A, 1, H.basis[0]), n)
                cert = ObstructionCertificate(A, res.cycle, res.pairing, n)
            report.entries.append(AuditEntry(subset, H.free_rank, H.torsion, ok, cert))
    report.entries.sort(key=lambda e: (len(e.subset), e.subset))
    return report
