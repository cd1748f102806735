"""Finite abstract simplicial complexes, simplicial maps and integer
(co)boundary matrices.

Simplices are stored as sorted vertex tuples; the sorted order is the
orientation, so face ``i`` of a simplex carries the sign ``(-1)**i``.
Integer matrices are numpy arrays of ``dtype=object`` holding Python ints,
which keeps every entry exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Hashable, Iterable, Mapping

import numpy as np

from .errors import InvalidSimplex, InvalidMap

Vertex = Hashable
Simplex = tuple


def int_matrix(rows: int, cols: int) -> np.ndarray:
    """Zero integer matrix with exact (Python int) entries."""
    return np.zeros((rows, cols), dtype=object)


def as_int_matrix(data) -> np.ndarray:
    m = np.array(data, dtype=object)
    if m.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    return np.vectorize(int, otypes=[object])(m) if m.size else m


@dataclass(frozen=True, eq=False)
class SimplicialComplex:
    """Finite abstract simplicial complex in canonical form.

    ``simplices[k]`` is the sorted tuple of k-simplices, each a sorted
    vertex tuple. Construct through :func:`validate_complex` unless the
    input is already face-closed and canonical.
    """

    vertices: tuple
    simplices: tuple
    _index: tuple = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(
            self, "_index",
            tuple({s: i for i, s in enumerate(level)} for level in self.simplices),
        )

    @property
    def dim(self) -> int:
        return len(self.simplices) - 1

    def n_simplices(self, k: int) -> int:
        if 0 <= k < len(self.simplices):
            return len(self.simplices[k])
        return 0

    def simplices_of(self, k: int) -> tuple:
        if 0 <= k < len(self.simplices):
            return self.simplices[k]
        return ()

    def index(self, simplex) -> int:
        s = tuple(simplex)
        return self._index[len(s) - 1][s]

    def __contains__(self, simplex) -> bool:
        s = tuple(simplex)
        k = len(s) - 1
        return 0 <= k < len(self._index) and s in self._index[k]

    @property
    def edges(self) -> tuple:
        return self.simplices_of(1)

    def total_simplices(self) -> int:
        return sum(len(level) for level in self.simplices)

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * len(level) for k, level in enumerate(self.simplices))

    def __eq__(self, other):
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.vertices == other.vertices and self.simplices == other.simplices

    def __hash__(self):
        return hash((self.vertices, self.simplices))

    def __repr__(self):
        counts = [len(level) for level in self.simplices]
        return f"SimplicialComplex(dim={self.dim}, counts={counts})"

    def neighbours(self) -> dict:
        adj = {v: [] for v in self.vertices}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return {v: sorted(ns) for v, ns in adj.items()}

    def components(self) -> list[list]:
        """Connected components as sorted vertex lists, ordered by their least vertex."""
        parent = {v: v for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in self.edges:
            ru, rv = find(u), find(v)
            if ru != rv:
                if rv < ru:
                    ru, rv = rv, ru
                parent[rv] = ru
        groups: dict = {}
        for v in self.vertices:
            groups.setdefault(find(v), []).append(v)
        return sorted(groups.values(), key=lambda g: g[0])


def _canonical(simplex_sets: Iterable[Iterable]) -> SimplicialComplex:
    by_dim: dict[int, set] = {}
    for s in simplex_sets:
        by_dim.setdefault(len(s) - 1, set()).add(tuple(s))
    top = max(by_dim, default=-1)
    levels = tuple(tuple(sorted(by_dim.get(k, ()))) for k in range(top + 1))
    vertices = tuple(s[0] for s in levels[0]) if levels else ()
    return SimplicialComplex(vertices, levels)


def validate_complex(raw: Iterable[Iterable[Vertex]], vertices: Iterable[Vertex] = ()) -> SimplicialComplex:
    """Face closure of ``raw`` in canonical form.

    Extra isolated ``vertices`` may be supplied. Raises
    :class:`InvalidSimplex` when a simplex repeats a vertex.
    """
    closed: set = set()
    for s in raw:
        s = list(s)
        if len(set(s)) != len(s):
            raise InvalidSimplex(f"repeated vertex in simplex {s!r}")
        if not s:
            continue
        s = tuple(sorted(s))
        if s in closed:
            continue
        for r in range(1, len(s) + 1):
            closed.update(combinations(s, r))
    closed.update((v,) for v in vertices)
    return _canonical(closed)


def from_maximal(simplices: Iterable[Iterable[Vertex]]) -> SimplicialComplex:
    return validate_complex(simplices)


def boundary_matrix(K: SimplicialComplex, k: int) -> np.ndarray:
    """Matrix of the simplicial boundary C_k -> C_{k-1}.

    ``k = 0`` gives the zero map to the empty group (no augmentation);
    out-of-range ``k`` gives a correctly shaped empty matrix.
    """
    rows = K.n_simplices(k - 1) if k >= 1 else 0
    cols = K.n_simplices(k)
    M = int_matrix(rows, cols)
    if k < 1 or cols == 0:
        return M
    lower = K._index[k - 1]
    for j, s in enumerate(K.simplices_of(k)):
        for i in range(len(s)):
            M[lower[s[:i] + s[i + 1:]], j] = (-1) ** i
    return M


def coboundary_matrix(K: SimplicialComplex, k: int) -> np.ndarray:
    """Matrix of the coboundary C^k -> C^{k+1} (transpose of the (k+1)-boundary)."""
    return boundary_matrix(K, k + 1).T.copy()


@dataclass(frozen=True, eq=False)
class SimplicialMap:
    source: SimplicialComplex
    target: SimplicialComplex
    vertex_map: Mapping

    def __post_init__(self):
        vm = dict(self.vertex_map)
        object.__setattr__(self, "vertex_map", vm)
        missing = [v for v in self.source.vertices if v not in vm]
        if missing:
            raise InvalidMap(f"vertex map undefined on {missing[:5]!r}")
        for level in self.source.simplices:
            for s in level:
                image = tuple(sorted(set(vm[v] for v in s)))
                if image not in self.target:
                    raise InvalidMap(f"image of {s!r} is not a simplex of the target: {image!r}")

    def __call__(self, v):
        return self.vertex_map[v]

    def image(self, simplex) -> tuple:
        return tuple(sorted(set(self.vertex_map[v] for v in simplex)))

    def compose(self, other: "SimplicialMap") -> "SimplicialMap":
        """``self ∘ other``."""
        vm = {v: self.vertex_map[w] for v, w in other.vertex_map.items()}
        return SimplicialMap(other.source, self.target, vm)


def identity_map(K: SimplicialComplex) -> SimplicialMap:
    return SimplicialMap(K, K, {v: v for v in K.vertices})


def full_subcomplex(K: SimplicialComplex, S: Iterable[Vertex]) -> tuple[SimplicialComplex, SimplicialMap]:
    S = set(S)
    unknown = S.difference(K.vertices)
    if unknown:
        raise InvalidSimplex(f"vertices not in complex: {sorted(unknown)[:5]!r}")
    levels = []
    for level in K.simplices:
        kept = tuple(s for s in level if all(v in S for v in s))
        if not kept:
            break
        levels.append(kept)
    sub = SimplicialComplex(tuple(s[0] for s in levels[0]) if levels else (), tuple(levels))
    return sub, SimplicialMap(sub, K, {v: v for v in sub.vertices})


def induced_chain_map(phi: SimplicialMap, k: int) -> np.ndarray:
    """Matrix of the chain map C_k(source) -> C_k(target).

    A simplex whose image has fewer vertices maps to zero; otherwise the
    sign is that of the permutation sorting the image vertices.
    """
    src, tgt = phi.source, phi.target
    M = int_matrix(tgt.n_simplices(k), src.n_simplices(k))
    if k < 0:
        return M
    vm = phi.vertex_map
    for j, s in enumerate(src.simplices_of(k)):
        img = [vm[v] for v in s]
        if len(set(img)) < len(img):
            continue
        M[tgt.index(tuple(sorted(img))), j] = _perm_sign(img)
    return M


def _perm_sign(seq) -> int:
    order = sorted(range(len(seq)), key=lambda i: seq[i])
    sign, seen = 1, [False] * len(order)
    for i in range(len(order)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


# ---- JSON ---------------------------------------------------------------

def label_to_json(v) -> Any:
    if isinstance(v, tuple):
        return [label_to_json(x) for x in v]
    return v


def label_from_json(v) -> Vertex:
    if isinstance(v, list):
        return tuple(label_from_json(x) for x in v)
    return v


def label_key(v) -> str:
    """String key for a vertex label (used for JSON object keys)."""
    if isinstance(v, str):
        return v
    return json.dumps(label_to_json(v), separators=(",", ":"))


def parse_label_key(key: str) -> Vertex:
    try:
        return label_from_json(json.loads(key))
    except (json.JSONDecodeError, ValueError):
        return key


def edge_key(u, v) -> str:
    return json.dumps([label_to_json(u), label_to_json(v)], separators=(",", ":"))


def parse_edge_key(key: str) -> tuple:
    u, v = json.loads(key)
    return label_from_json(u), label_from_json(v)


def complex_to_json(K: SimplicialComplex) -> dict:
    maximal = _maximal_simplices(K)
    return {
        "vertices": [label_to_json(v) for v in K.vertices],
        "simplices": [[label_to_json(v) for v in s] for s in maximal],
    }


def complex_from_json(doc: Mapping) -> SimplicialComplex:
    verts = [label_from_json(v) for v in doc.get("vertices", [])]
    simplices = [[label_from_json(v) for v in s] for s in doc.get("simplices", [])]
    return validate_complex(simplices, vertices=verts)


def map_to_json(phi: SimplicialMap) -> dict:
    return {"vertex_map": {label_key(k): label_to_json(v) for k, v in phi.vertex_map.items()}}


def map_from_json(doc: Mapping, source: SimplicialComplex, target: SimplicialComplex) -> SimplicialMap:
    vm = {parse_label_key(k): label_from_json(v) for k, v in doc["vertex_map"].items()}
    return SimplicialMap(source, target, vm)


def _maximal_simplices(K: SimplicialComplex) -> list:
    covered: set = set()
    out = []
    for k in range(K.dim, -1, -1):
        for s in K.simplices[k]:
            if s not in covered:
                out.append(s)
            for r in range(1, len(s)):
                covered.update(combinations(s, r))
    return sorted(out, key=lambda s: (len(s), s))


# ---- sparse helpers -------------------------------------------------------

def bfs_forest(K: SimplicialComplex, vertices: Iterable[Vertex] | None = None) -> list[tuple]:
    """Breadth-first spanning forest as ``(vertex, parent)`` pairs in visit order.

    Each component is rooted at its least vertex (parent ``None``);
    neighbours are visited in increasing order.
    """
    allowed = set(K.vertices if vertices is None else vertices)
    adj = K.neighbours()
    seen: set = set()
    order = []
    for root in sorted(allowed):
        if root in seen:
            continue
        seen.add(root)
        order.append((root, None))
        queue = [root]
        head = 0
        while head < len(queue):
            u = queue[head]
            head += 1
            for v in adj[u]:
                if v in allowed and v not in seen:
                    seen.add(v)
                    order.append((v, u))
                    queue.append(v)
    return order


def apply_boundary(K: SimplicialComplex, k: int, chain) -> np.ndarray:
    """``∂_k`` applied to a k-chain without forming the matrix."""
    out = np.zeros(K.n_simplices(k - 1) if k >= 1 else 0, dtype=object)
    if k < 1:
        return out
    lower = K._index[k - 1]
    for s, c in zip(K.simplices_of(k), chain):
        if c:
            for i in range(len(s)):
                out[lower[s[:i] + s[i + 1:]]] += (-1) ** i * int(c)
    return out


def apply_coboundary(K: SimplicialComplex, k: int, cochain) -> np.ndarray:
    """``δ_k`` applied to a k-cochain without forming the matrix."""
    out = np.zeros(K.n_simplices(k + 1), dtype=object)
    if K.n_simplices(k + 1) == 0:
        return out
    lower = K._index[k]
    for j, s in enumerate(K.simplices_of(k + 1)):
        acc = 0
        for i in range(len(s)):
            acc += (-1) ** i * cochain[lower[s[:i] + s[i + 1:]]]
        out[j] = int(acc)
    return out
