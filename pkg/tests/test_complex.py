import numpy as np
import pytest

import oracles
from corpus import OCTAHEDRON_MAX, TORUS7_MAX, c3, ngon, octahedron, torus7, triangle
from rootres.complex import (
    SimplicialMap, apply_boundary, apply_coboundary, bfs_forest, boundary_matrix, coboundary_matrix,
    complex_from_json, complex_to_json, full_subcomplex, identity_map, induced_chain_map,
    validate_complex,
)
from rootres.errors import InvalidMap, InvalidSimplex


def test_face_closure():
    K = c3()
    assert K.vertices == (0, 1, 2) and K.edges == ((0, 1), (0, 2), (1, 2))
    T = triangle()
    assert [len(level) for level in T.simplices] == [3, 3, 1]
    E = validate_complex([])
    assert E.vertices == () and E.dim == -1 and E.total_simplices() == 0


def test_repeated_vertex_rejected():
    with pytest.raises(InvalidSimplex):
        validate_complex([[0, 0, 1]])


def test_boundary_examples():
    d1 = boundary_matrix(c3(), 1)
    assert d1.shape == (3, 3) and oracles.rank(d1.tolist()) == 2
    assert all(sum(d1[:, j]) == 0 for j in range(3))
    d2 = boundary_matrix(triangle(), 2)
    # edges are ordered (0,1), (0,2), (1,2)
    assert d2[:, 0].tolist() == [1, -1, 1]
    assert boundary_matrix(c3(), 0).shape == (0, 3)
    assert coboundary_matrix(triangle(), 1).tolist() == [[1, -1, 1]]
    assert coboundary_matrix(validate_complex([]), 0).shape == (0, 0)


@pytest.mark.parametrize("maximal", [TORUS7_MAX, OCTAHEDRON_MAX])
def test_boundary_matches_oracle(maximal):
    K = validate_complex(maximal)
    faces = oracles.closure(maximal)
    for k in (1, 2):
        assert boundary_matrix(K, k).tolist() == oracles.boundary(faces, k)
    assert not boundary_matrix(K, 1).dot(boundary_matrix(K, 2)).any()


def test_sparse_boundary_agrees_with_matrix():
    K = torus7()
    rng = np.random.default_rng(0)
    x = np.array(rng.integers(-3, 4, K.n_simplices(2)), dtype=object)
    assert list(apply_boundary(K, 2, x)) == list(boundary_matrix(K, 2).dot(x))
    y = np.array(rng.integers(-3, 4, K.n_simplices(1)), dtype=object)
    assert list(apply_coboundary(K, 1, y)) == list(coboundary_matrix(K, 1).dot(y))


def test_full_subcomplex():
    A, inc = full_subcomplex(c3(), [0, 1])
    assert A.edges == ((0, 1),)
    K = torus7()
    B, inc = full_subcomplex(K, K.vertices)
    assert B == K and inc.vertex_map == {v: v for v in K.vertices}
    eq, _ = full_subcomplex(octahedron(), [0, 1, 2, 3])
    # no two of 0/1 or 2/3 are adjacent, so this is the 4-cycle 0-2-1-3
    assert len(eq.edges) == 4 and eq.dim == 1


def test_simplicial_map_validation():
    K = c3()
    with pytest.raises(InvalidMap):
        SimplicialMap(triangle(), K, {0: 0, 1: 1, 2: 2})  # triangle has no image
    with pytest.raises(InvalidMap):
        SimplicialMap(K, K, {0: 0, 1: 1})


def test_induced_chain_maps():
    K = c3()
    assert (induced_chain_map(identity_map(K), 1) == np.eye(3, dtype=int)).all()
    const = SimplicialMap(K, K, {v: 0 for v in K.vertices})
    assert not induced_chain_map(const, 1).any()
    wrap = SimplicialMap(ngon(12), K, {i: i % 3 for i in range(12)})
    M = induced_chain_map(wrap, 1)
    # edge (0,2) is traversed as 2 -> 0 on each lap, so its preimages carry -1
    assert [sorted(set(M[i, :].tolist()) - {0}) for i in range(3)] == [[1], [-1, 1], [1]]
    assert [int(sum(abs(x) for x in M[i, :])) for i in range(3)] == [4, 4, 4]


def test_chain_map_commutes_with_boundary():
    wrap = SimplicialMap(ngon(12), c3(), {i: i % 3 for i in range(12)})
    lhs = boundary_matrix(c3(), 1).dot(induced_chain_map(wrap, 1))
    rhs = induced_chain_map(wrap, 0).dot(boundary_matrix(ngon(12), 1))
    assert (lhs == rhs).all()


def test_json_round_trip():
    for K in (c3(), torus7(), validate_complex([[0, 1]], vertices=[5])):
        assert complex_from_json(complex_to_json(K)) == K


def test_bfs_forest_roots_and_parents():
    K = validate_complex([[0, 1], [1, 2], [3, 4]])
    forest = bfs_forest(K)
    roots = [v for v, p in forest if p is None]
    assert roots == [0, 3]
    parent = dict(forest)
    for v, p in forest:
        if p is not None:
            assert (min(v, p), max(v, p)) in K.edges


def test_components_and_euler():
    K = validate_complex([[0, 1], [2, 3, 4]])
    assert K.components() == [[0, 1], [2, 3, 4]]
    assert torus7().euler_characteristic() == 0
    assert octahedron().euler_characteristic() == 2
