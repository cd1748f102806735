import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from rootres.snf import NO_SOLUTION, exact_dot, integer_solve, matrix_rank, smith_normal_form


def _obj(M):
    return np.array(M, dtype=object).reshape(len(M), len(M[0]) if M else 0)


def _check_decomposition(M):
    A = _obj(M)
    d = smith_normal_form(A)
    m, n = A.shape
    assert (d.U.dot(A).dot(d.V) == d.S).all()
    assert (d.U.dot(d.Uinv) == np.eye(m, dtype=int)).all()
    assert (d.V.dot(d.Vinv) == np.eye(n, dtype=int)).all()
    for i in range(m):
        for j in range(n):
            if i != j:
                assert d.S[i, j] == 0
    diag = list(d.diagonal)
    assert all(x > 0 for x in diag)
    assert all(b % a == 0 for a, b in zip(diag, diag[1:]))
    return d


def test_worked_example():
    d = _check_decomposition([[2, 4], [6, 8]])
    assert d.diagonal == (2, 4)


def test_identity_and_zero():
    assert smith_normal_form(_obj([[1, 0, 0], [0, 1, 0], [0, 0, 1]])).diagonal == (1, 1, 1)
    d = smith_normal_form(_obj([[0, 0, 0], [0, 0, 0]]))
    assert d.diagonal == () and d.rank == 0


def test_empty_matrix():
    d = smith_normal_form(np.zeros((0, 3), dtype=object))
    assert d.S.shape == (0, 3) and d.V.shape == (3, 3)


small = st.lists(st.lists(st.integers(-9, 9), min_size=1, max_size=4), min_size=1, max_size=4).filter(
    lambda rows: len({len(r) for r in rows}) == 1)


@settings(max_examples=150, deadline=None)
@given(small)
def test_matches_determinantal_divisors(M):
    d = _check_decomposition(M)
    assert list(d.diagonal) == oracles.invariant_factors(M)
    assert d.rank == oracles.rank(M) == matrix_rank(_obj(M))


@pytest.mark.parametrize("A,b", [
    ([[2]], [4]),
    ([[2]], [3]),
    ([[2, 4], [6, 8]], [2, 6]),
    ([[2, 4], [6, 8]], [1, 0]),
    ([[1, 1, 1]], [5]),
    ([[3, 5, 0, 1], [0, 2, 4, 0]], [7, 6]),
])
def test_integer_solve_examples(A, b):
    x = integer_solve(_obj(A), b)
    hits = oracles.solve_by_enumeration(A, b)
    if x is NO_SOLUTION:
        assert len(hits) == 0
    else:
        assert list(_obj(A).dot(np.array(x, dtype=object))) == list(b)


def test_integer_solve_exhaustive_small_systems():
    """Every system with <= 4 columns from a fixed random family agrees with enumeration."""
    rng = np.random.default_rng(3)
    for _ in range(60):
        rows, cols = int(rng.integers(1, 4)), int(rng.integers(1, 5))
        A = rng.integers(-4, 5, size=(rows, cols)).tolist()
        if rng.random() < 0.5:
            truth = rng.integers(-3, 4, size=cols)
            b = (np.array(A) @ truth).tolist()
        else:
            b = rng.integers(-6, 7, size=rows).tolist()
        x = integer_solve(_obj(A), b)
        hits = oracles.solve_by_enumeration(A, b, box=8 if cols == 4 else 10)
        if x is NO_SOLUTION:
            assert len(hits) == 0, (A, b)
        else:
            assert list(_obj(A).dot(np.array(x, dtype=object))) == list(b)


def test_integer_solve_is_deterministic():
    A = _obj([[1, 1, 1]])
    assert list(integer_solve(A, [5])) == list(integer_solve(A, [5]))


def test_exact_dot_falls_back_for_big_entries():
    big = 2 ** 70
    A = _obj([[big, 1], [0, 1]])
    B = _obj([[big], [1]])
    assert exact_dot(A, B).tolist() == [[big * big + 1], [1]]
    small_a = _obj([[1, 2], [3, 4]])
    assert exact_dot(small_a, small_a).tolist() == [[7, 10], [15, 22]]


def test_no_solution_is_falsy():
    assert not NO_SOLUTION
    assert repr(NO_SOLUTION) == "NoSolution"


def test_large_unimodular_products_stay_exact():
    # entries of transforms can grow; products must never overflow silently
    M = [[(i + 1) * (j + 2) % 7 - 3 for j in range(6)] for i in range(6)]
    _check_decomposition(M)
    for perm in itertools.islice(itertools.permutations(range(3)), 4):
        _check_decomposition([[1 if perm[i] == j else 0 for j in range(3)] for i in range(3)])
