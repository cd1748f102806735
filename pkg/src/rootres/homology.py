"""Simplicial (co)homology with integer and rational coefficients.

A group is computed as ``ker(out) / im(in)`` in two Smith decompositions:
one of ``out`` for an integer kernel basis (with an exact left inverse),
one of the incoming map written in kernel coordinates. Generators are the
kernel-basis images of the second decomposition's basis, free generators
first, then torsion; invariant factors equal to 1 are dropped.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import gcd
from typing import Literal

import numpy as np

from .complex import (
    SimplicialComplex, SimplicialMap, bfs_forest, boundary_matrix, coboundary_matrix,
    induced_chain_map, int_matrix, label_key, label_to_json, parse_label_key,
)
from .errors import InvalidModulus
from .snf import NO_SOLUTION, exact_dot, integer_solve, smith_normal_form

Coefficients = Literal["Z", "Q"]


@dataclass(frozen=True, eq=False)
class FgAbelianGroup:
    """``Z^free_rank ⊕ Z/d1 ⊕ ... ⊕ Z/dt`` with representatives.

    ``basis`` holds one integer (co)chain vector per generator, free
    generators first. ``ambient`` records where they live:
    ``(complex, degree, "cochain" | "chain")``.
    """

    free_rank: int
    torsion: tuple
    basis: tuple
    ambient: tuple
    coefficients: str = "Z"
    # coordinates of a (co)cycle x are (_coord @ x)[_keep], torsion entries reduced
    _coord: np.ndarray = field(default=None, repr=False)
    _keep: tuple = field(default=(), repr=False)

    @property
    def complex(self) -> SimplicialComplex:
        return self.ambient[0]

    @property
    def degree(self) -> int:
        return self.ambient[1]

    @property
    def order_of_generators(self) -> tuple:
        """0 for free generators, ``d_i`` for torsion ones."""
        return (0,) * self.free_rank + tuple(self.torsion)

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def coordinates(self, x) -> np.ndarray:
        """Coordinates of a (co)cycle in the generator basis.

        For rational groups only the free coordinates are returned.
        """
        x = np.asarray(x, dtype=object)
        n_gen = self.free_rank + (len(self.torsion) if self.coefficients == "Z" else 0)
        if self._coord is None or not len(self._keep):
            return np.zeros(n_gen, dtype=object)
        y = self._coord.dot(x) if x.size else np.zeros(self._coord.shape[0], dtype=object)
        y = np.array([int(y[i]) for i in self._keep], dtype=object)
        if self.coefficients == "Q":
            return y[: self.free_rank]
        for i, d in enumerate(self.torsion):
            y[self.free_rank + i] %= d
        return y

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    def __repr__(self):
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.torsion]
        return f"FgAbelianGroup({' ⊕ '.join(parts) or '0'})"


@dataclass(frozen=True, eq=False)
class CohomologyClass:
    group: FgAbelianGroup
    coordinates: np.ndarray
    representative: np.ndarray

    def is_zero(self) -> bool:
        return not any(self.coordinates)

    def to_json(self) -> dict:
        return {
            "coordinates": [int(c) for c in self.coordinates],
            "representative": cochain_to_json(self.group.complex, self.group.degree, self.representative),
        }


def _subquotient(out_map: np.ndarray, in_map: np.ndarray, ambient, coefficients: str) -> FgAbelianGroup:
    """``ker(out_map) / im(in_map)`` where ``out_map @ in_map == 0``."""
    dim = out_map.shape[1]
    if out_map.shape[0] and dim:
        d_out = smith_normal_form(out_map)
        r = d_out.rank
        Z = d_out.V[:, r:]
        left = d_out.Vinv[r:, :]
    else:
        Z = np.eye(dim, dtype=int).astype(object)
        left = Z.copy()
    z = Z.shape[1]
    if z == 0:
        return FgAbelianGroup(0, (), (), ambient, coefficients, None, ())
    C = exact_dot(left, in_map) if in_map.shape[1] else int_matrix(z, 0)
    if C.shape[1]:
        d_in = smith_normal_form(C)
        U, Uinv, diag = d_in.U, d_in.Uinv, d_in.diagonal
    else:
        U = Uinv = np.eye(z, dtype=int).astype(object)
        diag = ()
    gens = exact_dot(Z, Uinv)
    coord = exact_dot(U, left)
    torsion_idx = [i for i, d in enumerate(diag) if d > 1]
    free_idx = list(range(len(diag), z))
    keep = tuple(free_idx + (torsion_idx if coefficients == "Z" else []))
    torsion = tuple(diag[i] for i in torsion_idx) if coefficients == "Z" else ()
    basis = tuple(np.array([int(v) for v in gens[:, i]], dtype=object) for i in keep)
    return FgAbelianGroup(len(free_idx), torsion, basis, ambient, coefficients, coord, keep)


def homology(K: SimplicialComplex, k: int, coefficients: Coefficients = "Z") -> FgAbelianGroup:
    """``H_k(K)`` with cycle representatives."""
    return _subquotient(boundary_matrix(K, k), boundary_matrix(K, k + 1), (K, k, "chain"), coefficients)


def cohomology(K: SimplicialComplex, k: int, coefficients: Coefficients = "Z") -> FgAbelianGroup:
    """``H^k(K)`` with cocycle representatives."""
    incoming = coboundary_matrix(K, k - 1) if k >= 1 else int_matrix(K.n_simplices(0), 0)
    return _subquotient(coboundary_matrix(K, k), incoming, (K, k, "cochain"), coefficients)


def cohomology_class(group: FgAbelianGroup, cochain) -> CohomologyClass:
    x = np.asarray(cochain, dtype=object)
    K, k = group.complex, group.degree
    if x.size and any(coboundary_matrix(K, k).dot(x)):
        raise ValueError("cochain is not a cocycle")
    return CohomologyClass(group, group.coordinates(x), x)


def pullback_cochain(phi: SimplicialMap, k: int, cochain) -> np.ndarray:
    """``phi^#`` on k-cochains (transpose of the chain map)."""
    M = induced_chain_map(phi, k)
    x = np.asarray(cochain, dtype=object)
    if M.shape[0] == 0:
        return np.zeros(M.shape[1], dtype=object)
    return M.T.dot(x)


def induced_cohomology_map(phi: SimplicialMap, k: int, coefficients: Coefficients = "Z",
                           source_group: FgAbelianGroup | None = None,
                           target_group: FgAbelianGroup | None = None) -> np.ndarray:
    """Matrix of ``phi^*: H^k(target) -> H^k(source)`` in generator coordinates.

    Columns are indexed by target generators, rows by source generators.
    Torsion rows are reduced modulo their order.
    """
    tgt = target_group or cohomology(phi.target, k, coefficients)
    src = source_group or cohomology(phi.source, k, coefficients)
    n_src = src.free_rank + (len(src.torsion) if coefficients == "Z" else 0)
    n_tgt = tgt.free_rank + (len(tgt.torsion) if coefficients == "Z" else 0)
    out = int_matrix(n_src, n_tgt)
    for j in range(n_tgt):
        out[:, j] = src.coordinates(pullback_cochain(phi, k, tgt.basis[j]))
    return out


def pairing(cochain, chain) -> int:
    return int(sum(int(a) * int(b) for a, b in zip(cochain, chain)))


# ---- divisibility -------------------------------------------------------

@dataclass(frozen=True)
class DivisibilityWitness:
    """``c == n * quotient + δ(correction)`` exactly."""

    n: int
    quotient: np.ndarray
    correction: np.ndarray

    def to_json(self, K: SimplicialComplex, k: int = 1) -> dict:
        return {
            "n": self.n,
            "quotient": cochain_to_json(K, k, self.quotient),
            "correction": cochain_to_json(K, k - 1, self.correction),
        }


@dataclass(frozen=True)
class NotDivisible:
    """Obstruction: an integer cycle whose pairing with the class is nonzero mod n."""

    n: int
    cycle: np.ndarray | None
    pairing: int | None

    def __bool__(self):
        return False


def divisible_by(c: CohomologyClass | tuple, n: int, method: str = "auto"):
    """Solve ``c = n*w' + δm`` over the integers.

    ``c`` is a :class:`CohomologyClass` or a ``(complex, degree, cochain)``
    triple. Returns a :class:`DivisibilityWitness` or a :class:`NotDivisible`
    carrying a cycle ``z`` with ``<c, z>`` nonzero mod ``n``.

    Degree 1 is solved by eliminating along a spanning forest (``"tree"``);
    any degree can use a Smith decomposition of ``[n*I | δ]`` (``"snf"``).
    """
    if n < 2:
        raise InvalidModulus(f"modulus must be at least 2, got {n}")
    if isinstance(c, CohomologyClass):
        K, k, x = c.group.complex, c.group.degree, c.representative
    else:
        K, k, x = c
    x = np.asarray(x, dtype=object)
    if method == "auto":
        method = "tree" if k == 1 else "snf"
    if method == "tree":
        if k != 1:
            raise ValueError("the spanning-forest solve handles degree 1 only")
        return _divisible_tree(K, x, n)
    return _divisible_snf(K, k, x, n)


def _divisible_snf(K, k, x, n):
    m = K.n_simplices(k)
    delta = coboundary_matrix(K, k - 1) if k >= 1 else int_matrix(m, 0)
    system = np.concatenate([n * np.eye(m, dtype=int).astype(object), delta], axis=1)
    sol = integer_solve(system, x) if m else np.zeros(delta.shape[1], dtype=object)
    if sol is not NO_SOLUTION:
        sol = np.asarray(sol, dtype=object)
        return DivisibilityWitness(n, sol[:m], sol[m:])
    cycle = obstruction_cycle(K, k, x, n)
    if cycle is None:
        return NotDivisible(n, None, None)
    return NotDivisible(n, cycle, pairing(x, cycle))


def _oriented(K, x, u, v):
    return int(x[K.index((u, v))]) if u < v else -int(x[K.index((v, u))])


def _divisible_tree(K, x, n):
    # gauge x to vanish on a spanning forest: x = x' + δ(potential)
    forest = bfs_forest(K)
    parent = dict(forest)
    potential = {}
    for v, p in forest:
        potential[v] = 0 if p is None else potential[p] + _oriented(K, x, p, v)
    reduced = [int(x[i]) - (potential[v] - potential[u]) for i, (u, v) in enumerate(K.edges)]
    correction = np.array([potential[v] for v in K.vertices], dtype=object)
    bad = next((i for i, r in enumerate(reduced) if r % n), None)
    if bad is None:
        return DivisibilityWitness(n, np.array([r // n for r in reduced], dtype=object), correction)
    u, v = K.edges[bad]
    z = fundamental_cycle(K, parent, u, v)
    return NotDivisible(n, z, pairing(x, z))


def fundamental_cycle(K: SimplicialComplex, parent: dict, u, v) -> np.ndarray:
    """Integer 1-cycle: edge ``u -> v`` closed by the forest path ``v -> u``."""
    z = np.zeros(K.n_simplices(1), dtype=object)

    def step(a, b):
        if a < b:
            z[K.index((a, b))] += 1
        else:
            z[K.index((b, a))] -= 1

    def to_root(w):
        path = [w]
        while parent[path[-1]] is not None:
            path.append(parent[path[-1]])
        return path

    pv, pu = to_root(v), to_root(u)
    while len(pv) > 1 and len(pu) > 1 and pv[-2] == pu[-2]:
        pv.pop()
        pu.pop()
    step(u, v)
    for a, b in zip(pv, pv[1:]):
        step(a, b)
    down = pu[::-1]
    for a, b in zip(down, down[1:]):
        step(a, b)
    return z


def obstruction_cycle(K: SimplicialComplex, k: int, cochain, n: int):
    """First basis cycle of ``ker ∂_k`` pairing nonzero mod ``n`` with ``cochain``."""
    bd = boundary_matrix(K, k) if k >= 1 else int_matrix(0, K.n_simplices(0))
    m = bd.shape[1]
    if bd.shape[0]:
        d = smith_normal_form(bd)
        Z = d.V[:, d.rank:]
    else:
        Z = np.eye(m, dtype=int).astype(object)
    for j in range(Z.shape[1]):
        z = np.array([int(v) for v in Z[:, j]], dtype=object)
        if pairing(cochain, z) % n:
            return z
    return None


def group_is_n_divisible(G: FgAbelianGroup, n: int) -> bool:
    """Whether multiplication by ``n`` is onto ``G``."""
    if n < 2:
        raise InvalidModulus(f"modulus must be at least 2, got {n}")
    return G.free_rank == 0 and all(gcd(n, d) == 1 for d in G.torsion)


# ---- serialization ------------------------------------------------------

def cochain_to_json(K: SimplicialComplex, k: int, x) -> dict:
    out = {}
    for s, v in zip(K.simplices_of(k), x):
        if v:
            out[_simplex_key(s)] = int(v)
    return out


def cochain_from_json(K: SimplicialComplex, k: int, doc: dict) -> np.ndarray:
    x = np.zeros(K.n_simplices(k), dtype=object)
    for key, value in doc.items():
        s = parse_label_key(key) if k >= 1 else (parse_label_key(key),)
        order = sorted(range(len(s)), key=lambda i: s[i])
        sign = _sign_of(order)
        x[K.index(tuple(s[i] for i in order))] += sign * int(value)
    return x


def _sign_of(order) -> int:
    sign = 1
    order = list(order)
    for i in range(len(order)):
        for j in range(i + 1, len(order)):
            if order[i] > order[j]:
                sign = -sign
    return sign


def _simplex_key(s) -> str:
    if len(s) == 1:
        return label_key(s[0])
    return json.dumps([label_to_json(v) for v in s], separators=(",", ":"))
