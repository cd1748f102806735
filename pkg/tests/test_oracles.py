"""The reference oracles agree with hand-derivable values before they judge anything."""

import oracles
from corpus import C3_MAX, OCTAHEDRON_MAX, RP2_MAX, TORUS7_MAX, TRIANGLE_MAX


def test_rank_and_det():
    assert oracles.rank([[1, 2], [2, 4]]) == 1
    assert oracles.rank([[0, 0, 0]]) == 0
    assert oracles.det([[2, 4], [6, 8]]) == -8
    assert oracles.det([[0, 1], [1, 0]]) == -1


def test_invariant_factors_two_ways():
    for M in ([[2, 4], [6, 8]], [[6, 0], [0, 4]], [[1, 0, 0], [0, 0, 0]], [[3, 9, 6], [12, 3, 0]]):
        assert [d for d in oracles.invariant_factors(M) if d > 1] == oracles.torsion_of(M)
    assert oracles.invariant_factors([[2, 4], [6, 8]]) == [2, 4]
    assert oracles.invariant_factors([[6, 0], [0, 4]]) == [2, 12]


def test_boundary_squares_to_zero():
    faces = oracles.closure(TORUS7_MAX)
    d1, d2 = oracles.boundary(faces, 1), oracles.boundary(faces, 2)
    for i in range(len(d1)):
        for j in range(len(d2[0])):
            assert sum(d1[i][k] * d2[k][j] for k in range(len(d2))) == 0


def test_known_homology():
    assert oracles.betti_and_torsion(C3_MAX, 1) == (1, [])
    assert oracles.betti_and_torsion(TRIANGLE_MAX, 1) == (0, [])
    assert oracles.betti_and_torsion(TORUS7_MAX, 1) == (2, [])
    assert oracles.betti_and_torsion(OCTAHEDRON_MAX, 2) == (1, [])
    assert oracles.betti_and_torsion(RP2_MAX, 1) == (0, [2])


def test_enumeration_oracles():
    assert oracles.solve_by_enumeration([[2]], [4]).tolist() == [[2]]
    assert len(oracles.solve_by_enumeration([[2]], [3])) == 0
    edges = [(0, 1), (0, 2), (1, 2)]
    assert oracles.n_divisible_by_enumeration(edges, [0, 1, 2], [2, 0, 0], 2)
    assert not oracles.n_divisible_by_enumeration(edges, [0, 1, 2], [1, 0, 0], 2)
