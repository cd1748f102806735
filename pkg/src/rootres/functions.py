"""Nonvanishing functions in the log model, and sampled complex functions.

A :class:`LogFunction` on a complex K stores a complex logarithm per vertex
and an integer winding per edge. On a simplex with base vertex ``v0`` and
barycentric coordinates ``t`` its value is

    exp(sum_j t_j * (log_j + 2*pi*i * w[v0, vj]))

which is well defined because the windings form a cocycle. The cohomology
class of the windings is the homotopy class of the function.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from . import kernels
from .complex import (
    SimplicialComplex, SimplicialMap, edge_key, label_key, parse_edge_key,
    parse_label_key,
)
from .errors import CocycleViolation, InvalidCoordinates, RootResError
from .homology import CohomologyClass, cohomology, cohomology_class

TWO_PI_I = 2j * math.pi
DEFAULT_SEED = 20240611
SAMPLES_PER_SIMPLEX = 10


@dataclass(frozen=True, eq=False)
class LogFunction:
    complex: SimplicialComplex
    vertex_log: Mapping
    winding: Mapping  # sorted edge -> int

    def w(self, u, v) -> int:
        if u == v:
            return 0
        if u < v:
            return self.winding[(u, v)]
        return -self.winding[(v, u)]

    def winding_vector(self) -> np.ndarray:
        return np.array([self.winding[e] for e in self.complex.edges], dtype=object)

    def lifted_logs(self, k: int) -> np.ndarray:
        """``(S, k+1)`` array of ``log_j + 2πi w[v0, vj]`` for every k-simplex."""
        simplices = self.complex.simplices_of(k)
        out = np.empty((len(simplices), k + 1), dtype=np.complex128)
        for s, simplex in enumerate(simplices):
            v0 = simplex[0]
            for j, v in enumerate(simplex):
                out[s, j] = self.vertex_log[v] + TWO_PI_I * self.w(v0, v)
        return out

    def __call__(self, simplex, barycentric, base=None) -> complex:
        return evaluate(self, simplex, barycentric, base)


def make_log_function(K: SimplicialComplex, vertex_log: Mapping, winding: Mapping | None = None) -> LogFunction:
    """Validated :class:`LogFunction`.

    ``winding`` may key edges in either orientation; missing edges are 0.
    Raises :class:`CocycleViolation` naming the first offending triangle.
    """
    logs = {}
    for v in K.vertices:
        if v not in vertex_log:
            raise RootResError(f"no logarithm given for vertex {v!r}")
        logs[v] = complex(vertex_log[v])
    w = {e: 0 for e in K.edges}
    for (u, v), value in (winding or {}).items():
        if int(value) != value:
            raise RootResError(f"winding on {(u, v)!r} is not an integer")
        e, sign = ((u, v), 1) if u < v else ((v, u), -1)
        if e not in w:
            raise RootResError(f"{(u, v)!r} is not an edge of the complex")
        w[e] = sign * int(value)
    for a, b, c in K.simplices_of(2):
        value = w[(b, c)] - w[(a, c)] + w[(a, b)]
        if value:
            raise CocycleViolation((a, b, c), value)
    return LogFunction(K, logs, w)


def from_cocycle(K: SimplicialComplex, cochain, vertex_log: Mapping | None = None) -> LogFunction:
    """LogFunction with the given edge cochain as windings (logs default to 0)."""
    logs = vertex_log or {v: 0j for v in K.vertices}
    return make_log_function(K, logs, {e: int(x) for e, x in zip(K.edges, cochain)})


def evaluate(f: LogFunction, simplex, barycentric, base=None) -> complex:
    simplex = tuple(simplex)
    t = [float(x) for x in barycentric]
    if simplex not in f.complex:
        raise InvalidCoordinates(f"{simplex!r} is not a simplex of the complex")
    if len(t) != len(simplex) or any(x < -1e-12 for x in t) or abs(sum(t) - 1.0) > 1e-9:
        raise InvalidCoordinates(f"{barycentric!r} are not barycentric coordinates on {simplex!r}")
    v0 = simplex[0] if base is None else base
    if v0 not in simplex:
        raise InvalidCoordinates(f"base vertex {base!r} is not in {simplex!r}")
    acc = sum(tj * (f.vertex_log[v] + TWO_PI_I * f.w(v0, v)) for tj, v in zip(t, simplex))
    return cmath.exp(acc)


def winding_class(f: LogFunction) -> CohomologyClass:
    return cohomology_class(cohomology(f.complex, 1), f.winding_vector())


def multiply(f: LogFunction, g: LogFunction) -> LogFunction:
    if f.complex != g.complex:
        raise RootResError("functions live on different complexes")
    return LogFunction(
        f.complex,
        {v: f.vertex_log[v] + g.vertex_log[v] for v in f.complex.vertices},
        {e: f.winding[e] + g.winding[e] for e in f.complex.edges},
    )


def power(f: LogFunction, k: int) -> LogFunction:
    return LogFunction(
        f.complex,
        {v: k * f.vertex_log[v] for v in f.complex.vertices},
        {e: k * f.winding[e] for e in f.complex.edges},
    )


def inverse(f: LogFunction) -> LogFunction:
    return power(f, -1)


def constant(K: SimplicialComplex, value: complex = 1.0) -> LogFunction:
    log = cmath.log(value)
    return LogFunction(K, {v: log for v in K.vertices}, {e: 0 for e in K.edges})


def pullback(f: LogFunction, phi: SimplicialMap) -> LogFunction:
    """``f ∘ phi``; every edge of the source must map to an edge or a vertex."""
    if phi.target != f.complex:
        raise RootResError("map target is not the function's complex")
    vm = phi.vertex_map
    return LogFunction(
        phi.source,
        {v: f.vertex_log[vm[v]] for v in phi.source.vertices},
        {(u, v): f.w(vm[u], vm[v]) for u, v in phi.source.edges},
    )


# ---- sampled functions ----------------------------------------------------

@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Simplexwise-affine interpolation of vertex values (zeros allowed)."""

    complex: SimplicialComplex
    vertex_value: Mapping

    def values(self, k: int) -> np.ndarray:
        simplices = self.complex.simplices_of(k)
        out = np.empty((len(simplices), k + 1), dtype=np.complex128)
        for s, simplex in enumerate(simplices):
            out[s] = [self.vertex_value[v] for v in simplex]
        return out

    def __call__(self, simplex, barycentric) -> complex:
        return sum(float(t) * complex(self.vertex_value[v]) for t, v in zip(barycentric, simplex))


def radial_retract(F: SampledFunction, eps: float) -> SampledFunction:
    """Push vertex values of modulus below ``eps`` out to modulus ``eps``.

    Zero goes to ``+eps``.
    """
    if eps <= 0:
        raise RootResError("eps must be positive")
    out = {}
    for v, z in F.vertex_value.items():
        z = complex(z)
        r = abs(z)
        if r >= eps:
            out[v] = z
        elif r == 0:
            out[v] = complex(eps)
        else:
            out[v] = z * (eps / r)
    return SampledFunction(F.complex, out)


# ---- audit samples ----------------------------------------------------------

def audit_samples(K: SimplicialComplex, seed: int = DEFAULT_SEED,
                  per_simplex: int = SAMPLES_PER_SIMPLEX) -> list[np.ndarray]:
    """Barycentric sample points per dimension, ``T[k]`` of shape ``(S_k, m_k, k+1)``.

    Vertices for k = 0; the midpoint plus ``per_simplex`` random points for
    edges; ``per_simplex`` random points for higher simplices.
    """
    rng = np.random.default_rng(seed)
    out = []
    for k in range(K.dim + 1):
        S = K.n_simplices(k)
        if k == 0:
            out.append(np.ones((S, 1, 1)))
            continue
        T = rng.dirichlet(np.ones(k + 1), size=(S, per_simplex))
        if k == 1:
            mid = np.full((S, 1, 2), 0.5)
            T = np.concatenate([mid, T], axis=1)
        out.append(T)
    return out


def sample_log_function(f: LogFunction, samples: list[np.ndarray]) -> list[np.ndarray]:
    return [kernels.exp_affine(f.lifted_logs(k), T) for k, T in enumerate(samples)]


def sample_sampled_function(F: SampledFunction, samples: list[np.ndarray]) -> list[np.ndarray]:
    return [kernels.affine(F.values(k), T) for k, T in enumerate(samples)]


def power_audit(root: LogFunction, f: LogFunction, n: int, samples=None,
                projection: SimplicialMap | None = None, seed: int = DEFAULT_SEED) -> float:
    """Largest ``|root**n - f|`` over the audit samples of ``root``'s complex.

    With ``projection`` given, ``f`` lives downstairs and is compared as
    ``f ∘ projection``.
    """
    target = pullback(f, projection) if projection is not None else f
    samples = samples or audit_samples(root.complex, seed)
    G = sample_log_function(root, samples)
    F = sample_log_function(target, samples)
    worst = 0.0
    for g, fv in zip(G, F):
        if g.size:
            worst = max(worst, float(kernels.power_residual(g, fv, n).max()))
    return worst


# ---- JSON -------------------------------------------------------------------

def log_function_to_json(f: LogFunction) -> dict:
    return {
        "logs": {label_key(v): [z.real, z.imag] for v, z in ((v, complex(f.vertex_log[v])) for v in f.complex.vertices)},
        "winding": {edge_key(u, v): int(f.winding[(u, v)]) for u, v in f.complex.edges if f.winding[(u, v)]},
    }


def log_function_from_json(K: SimplicialComplex, doc: Mapping) -> LogFunction:
    logs = {parse_label_key(k): complex(*v) for k, v in doc.get("logs", {}).items()}
    winding = {parse_edge_key(k): v for k, v in doc.get("winding", {}).items()}
    return make_log_function(K, logs, winding)


def sampled_to_json(F: SampledFunction) -> dict:
    return {"values": {label_key(v): [complex(z).real, complex(z).imag] for v, z in F.vertex_value.items()}}


def sampled_from_json(K: SimplicialComplex, doc: Mapping) -> SampledFunction:
    values = {parse_label_key(k): complex(*v) for k, v in doc.get("values", {}).items()}
    missing = [v for v in K.vertices if v not in values]
    if missing:
        raise RootResError(f"no value given for vertices {missing[:5]!r}")
    return SampledFunction(K, values)
