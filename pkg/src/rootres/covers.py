"""Cyclic covers classified by winding cocycles, and their fiber products.

A cover built from cocycles ``w_1..w_r`` with exponents ``n_1..n_r`` has
vertices ``(v, a_1, ..., a_r)`` with ``a_i`` in ``Z/n_i``. A base simplex
``(v0, ..., vk)`` with label ``a`` lifts to the simplex whose vertex ``vj``
carries label ``a_i + w_i[v0, vj] mod n_i``. With one factor this is the
space of n-th roots of a log-model function; with several it is their
fiber product over the base.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

import numpy as np

from .complex import (
    SimplicialComplex, SimplicialMap, apply_coboundary, bfs_forest,
    complex_from_json, complex_to_json, label_key, label_to_json, map_to_json,
    edge_key, parse_edge_key,
)
from .errors import MismatchedCover, RootResError
from .functions import TWO_PI_I, LogFunction, pullback
from .homology import DivisibilityWitness


def _as_cocycle(K: SimplicialComplex, w) -> dict:
    if isinstance(w, LogFunction):
        return dict(w.winding)
    if isinstance(w, dict):
        out = {e: 0 for e in K.edges}
        for (u, v), x in w.items():
            if u < v:
                out[(u, v)] = int(x)
            else:
                out[(v, u)] = -int(x)
        return out
    return {e: int(x) for e, x in zip(K.edges, w)}


def _w(cocycle: dict, u, v) -> int:
    if u == v:
        return 0
    return cocycle[(u, v)] if u < v else -cocycle[(v, u)]


@dataclass(frozen=True, eq=False)
class CyclicCover:
    base: SimplicialComplex
    total: SimplicialComplex
    projection: SimplicialMap
    decks: tuple
    exponents: tuple
    cocycles: tuple
    components: int = 0
    predicted_components: int = 0

    @property
    def sheets(self) -> int:
        out = 1
        for n in self.exponents:
            out *= n
        return out

    @property
    def exponent(self) -> int:
        if len(self.exponents) != 1:
            raise RootResError("cover has several factors; use .exponents")
        return self.exponents[0]

    @property
    def deck(self) -> SimplicialMap:
        return self.decks[0]

    @property
    def classifying_cocycle(self) -> dict:
        return self.cocycles[0]

    def cocycle_vector(self, i: int = 0) -> np.ndarray:
        return np.array([self.cocycles[i][e] for e in self.base.edges], dtype=object)

    def to_json(self) -> dict:
        doc = {
            "base": complex_to_json(self.base),
            "total": complex_to_json(self.total),
            "projection": map_to_json(self.projection)["vertex_map"],
            "deck": map_to_json(self.decks[0])["vertex_map"] if self.decks else {},
            "n": self.sheets if len(self.exponents) != 1 else self.exponents[0],
            "cocycle": _cocycle_json(self.cocycles[0]) if self.cocycles else {},
            "components": self.components,
        }
        if len(self.exponents) != 1:
            doc["exponents"] = list(self.exponents)
            doc["cocycles"] = [_cocycle_json(c) for c in self.cocycles]
        return doc


def _cocycle_json(c: dict) -> dict:
    return {edge_key(u, v): x for (u, v), x in c.items() if x}


def build_cover(base: SimplicialComplex, cocycles: Sequence, exponents: Sequence[int]) -> CyclicCover:
    """Fiber product over ``base`` of the cyclic covers of the given cocycles."""
    exponents = tuple(int(n) for n in exponents)
    if len(cocycles) != len(exponents):
        raise RootResError("need one exponent per cocycle")
    if any(n < 1 for n in exponents):
        raise RootResError("exponents must be positive")
    cocycles = tuple(_as_cocycle(base, w) for w in cocycles)
    for c in cocycles:
        if any(apply_coboundary(base, 1, [c[e] for e in base.edges])):
            raise RootResError("classifying cochain is not a cocycle")
    labels = list(product(*[range(n) for n in exponents]))

    def lift(simplex, a):
        v0 = simplex[0]
        return tuple(
            (v,) + tuple((ai + _w(c, v0, v)) % n for ai, c, n in zip(a, cocycles, exponents))
            for v in simplex
        )

    levels = tuple(
        tuple(sorted(lift(s, a) for s in level for a in labels))
        for level in base.simplices
    )
    total = SimplicialComplex(tuple(s[0] for s in levels[0]) if levels else (), levels)
    projection = SimplicialMap(total, base, {x: x[0] for x in total.vertices})
    decks = []
    for i, n in enumerate(exponents):
        vm = {x: x[:1 + i] + ((x[1 + i] + 1) % n,) + x[2 + i:] for x in total.vertices}
        decks.append(SimplicialMap(total, total, vm))
    return CyclicCover(
        base, total, projection, tuple(decks), exponents, cocycles,
        components=len(total.components()),
        predicted_components=predicted_component_count(base, cocycles, exponents),
    )


def build_cyclic_cover(f, n: int) -> CyclicCover:
    """n-sheeted cover of ``f.complex`` classified by the windings of ``f``."""
    if n < 2:
        raise RootResError("exponent must be at least 2")
    return build_cover(f.complex, [f.winding], [n])


def predicted_component_count(base: SimplicialComplex, cocycles, exponents) -> int:
    """Sum over base components of ``sheets / |image of H_1 in prod Z/n_i|``.

    The image is generated by the cocycle values on fundamental cycles of a
    spanning forest.
    """
    cocycles = [_as_cocycle(base, c) for c in cocycles]
    forest = bfs_forest(base)
    parent = dict(forest)
    root_of, potential = {}, [dict() for _ in cocycles]
    for v, p in forest:
        root_of[v] = v if p is None else root_of[p]
        for c, pot in zip(cocycles, potential):
            pot[v] = 0 if p is None else pot[p] + _w(c, p, v)
    gens: dict = {r: [] for r, p in forest if p is None}
    for u, v in base.edges:
        if parent.get(v) == u or parent.get(u) == v:
            continue
        g = tuple((_w(c, u, v) - (pot[v] - pot[u])) % n
                  for c, pot, n in zip(cocycles, potential, exponents))
        if any(g):
            gens[root_of[u]].append(g)
    sheets = 1
    for n in exponents:
        sheets *= n
    total = 0
    for r, gs in gens.items():
        seen = {tuple(0 for _ in exponents)}
        frontier = list(seen)
        while frontier:
            x = frontier.pop()
            for g in gs:
                y = tuple((a + b) % n for a, b, n in zip(x, g, exponents))
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        total += sheets // len(seen)
    return total


@dataclass(frozen=True, eq=False)
class LiftedRoot:
    """``g`` on the cover with ``g**n == f ∘ projection``.

    ``labels`` are the integer lifts used for the sheet index and satisfy
    ``w_{f∘π} == n * w_g + δ(labels)``.
    """

    cover: CyclicCover
    root: LogFunction
    labels: dict
    n: int
    factor: int = 0

    def labels_vector(self) -> np.ndarray:
        return np.array([self.labels[x] for x in self.cover.total.vertices], dtype=object)


def lift_root(cover: CyclicCover, f: LogFunction, factor: int = 0) -> LiftedRoot:
    """The root upstairs: the sheet coordinate of factor ``factor``."""
    if f.complex != cover.base:
        raise MismatchedCover("function does not live on the cover's base")
    if dict(f.winding) != cover.cocycles[factor]:
        raise MismatchedCover("cover was not classified by this function's windings")
    n = cover.exponents[factor]
    total, pi = cover.total, cover.projection.vertex_map
    lift = {}
    for x, p in bfs_forest(total):
        lift[x] = x[1 + factor] if p is None else lift[p] + f.w(pi[p], pi[x])
    logs = {x: (f.vertex_log[pi[x]] + TWO_PI_I * lift[x]) / n for x in total.vertices}
    winding = {}
    for x, y in total.edges:
        num = f.w(pi[x], pi[y]) - lift[y] + lift[x]
        if num % n:
            raise MismatchedCover(f"lifted labels inconsistent on {(x, y)!r}")
        winding[(x, y)] = num // n
    return LiftedRoot(cover, LogFunction(total, logs, winding), lift, n, factor)


@dataclass(frozen=True, eq=False)
class PullbackCertificate:
    """``w_{f∘π} == n * w_g + δ(labels)`` on the cover's total complex."""

    cover: CyclicCover
    lifted: LiftedRoot
    pulled_back: np.ndarray
    witness: DivisibilityWitness
    exact: bool

    def to_json(self) -> dict:
        return {
            "n": self.witness.n,
            "exact": self.exact,
            "witness": self.witness.to_json(self.cover.total, 1),
        }


def pullback_divisibility_certificate(cover: CyclicCover, f: LogFunction, factor: int = 0) -> PullbackCertificate:
    lifted = lift_root(cover, f, factor)
    total = cover.total
    pulled = pullback(f, cover.projection).winding_vector()
    quotient = lifted.root.winding_vector()
    labels = lifted.labels_vector()
    rhs = lifted.n * quotient + apply_coboundary(total, 0, labels)
    exact = all(int(a) == int(b) for a, b in zip(pulled, rhs))
    return PullbackCertificate(cover, lifted, pulled, DivisibilityWitness(lifted.n, quotient, labels), exact)


# ---- fiber products and the naturality square ---------------------------------

@dataclass(frozen=True, eq=False)
class FiberProduct:
    cover: CyclicCover
    to_first: SimplicialMap
    to_second: SimplicialMap


def fiber_product(c1: CyclicCover, c2: CyclicCover) -> FiberProduct:
    if c1.base != c2.base:
        raise RootResError("covers live over different bases")
    fp = build_cover(c1.base, c1.cocycles + c2.cocycles, c1.exponents + c2.exponents)
    r = len(c1.exponents)
    to1 = SimplicialMap(fp.total, c1.total, {x: x[:1 + r] for x in fp.total.vertices})
    to2 = SimplicialMap(fp.total, c2.total, {x: x[:1] + x[1 + r:] for x in fp.total.vertices})
    return FiberProduct(fp, to1, to2)


@dataclass
class NaturalIsoReport:
    ok: bool
    n: int
    vertices: int
    iso: SimplicialMap | None = None
    components: int = 0
    mismatch: str | None = None
    tower_cover: CyclicCover | None = field(default=None, repr=False)
    product: FiberProduct | None = field(default=None, repr=False)

    def to_json(self) -> dict:
        doc = {"ok": self.ok, "n": self.n, "vertices": self.vertices, "components": self.components}
        if self.mismatch:
            doc["mismatch"] = self.mismatch
        if self.iso is not None:
            doc["iso"] = {label_key(k): label_to_json(v) for k, v in self.iso.vertex_map.items()}
        return doc


def natural_iso_check(base: SimplicialComplex, f1: LogFunction, f2: LogFunction, n: int) -> NaturalIsoReport:
    """Compare the cover of the cover with the fiber product of the two covers.

    The candidate isomorphism sends ``((v, a1), a2)`` to ``(v, a1, a2)``; it
    must be a bijection on simplices of every dimension and commute with the
    projections to the base.
    """
    if f1.complex != base or f2.complex != base:
        raise RootResError("functions must live on the given base")
    first = build_cyclic_cover(f1, n)
    upstairs = build_cyclic_cover(pullback(f2, first.projection), n)
    fp = fiber_product(first, build_cyclic_cover(f2, n))
    relabel = {x: x[0] + x[1:] for x in upstairs.total.vertices}
    size = len(upstairs.total.vertices)
    report = NaturalIsoReport(False, n, size, tower_cover=upstairs, product=fp,
                              components=fp.cover.components)
    if sorted(relabel.values()) != list(fp.cover.total.vertices):
        report.mismatch = "vertex sets differ"
        return report
    for k, level in enumerate(upstairs.total.simplices):
        image = sorted(tuple(sorted(relabel[x] for x in s)) for s in level)
        if tuple(image) != fp.cover.total.simplices_of(k):
            bad = next((s for s in image if s not in fp.cover.total), image[0] if image else None)
            report.mismatch = f"dimension {k}: {bad!r}"
            return report
    iso = SimplicialMap(upstairs.total, fp.cover.total, relabel)
    down_tower = first.projection.compose(upstairs.projection)
    down_fp = fp.cover.projection.compose(iso)
    if down_tower.vertex_map != down_fp.vertex_map:
        report.mismatch = "square does not commute"
        return report
    report.ok = True
    report.iso = iso
    return report


# ---- JSON -------------------------------------------------------------------------

def cover_from_json(doc: dict) -> CyclicCover:
    """Rebuild a cover from its base and cocycle(s); a stored total must match."""
    if "base" not in doc:
        raise RootResError("cover document needs a 'base' complex")
    base = complex_from_json(doc["base"])
    if "cocycles" in doc:
        raw = doc["cocycles"]
        exponents = doc["exponents"]
    else:
        raw = [doc.get("cocycle", {})]
        exponents = [doc["n"]]
    cocycles = [{parse_edge_key(k): v for k, v in c.items()} for c in raw]
    cover = build_cover(base, cocycles, exponents)
    if "total" in doc and complex_from_json(doc["total"]) != cover.total:
        raise RootResError("stored total complex does not match the classifying data")
    return cover
