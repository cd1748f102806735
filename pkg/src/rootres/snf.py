"""Smith normal form over the integers and integer linear solving.

All arithmetic is on Python ints (arbitrary precision). Matrices come in as
anything ``numpy.array(..., dtype=object)`` accepts and go out as object
arrays.

Pivot rule: the nonzero entry of least absolute value in the active
submatrix, ties broken by row-major position. Within the elimination of a
pivot row/column the same rule is applied to that row/column.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ A @ V == S`` with ``U``, ``V`` unimodular and ``S`` diagonal.

    ``Uinv`` and ``Vinv`` are the exact inverses; ``diagonal`` lists the
    nonzero invariant factors ``d1 | d2 | ...`` (all positive).
    """

    U: np.ndarray
    S: np.ndarray
    V: np.ndarray
    Uinv: np.ndarray
    Vinv: np.ndarray
    diagonal: tuple

    @property
    def rank(self) -> int:
        return len(self.diagonal)


def _identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _to_rows(A):
    A = np.asarray(A, dtype=object)
    if A.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    return [[int(x) for x in row] for row in A.tolist()], A.shape


def _obj(rows, shape):
    out = np.zeros(shape, dtype=object)
    for i, row in enumerate(rows):
        out[i, :] = row
    return out


class _Work:
    """Mutable elimination state; every operation on ``A`` is mirrored on the
    transforms so that ``U A0 V = A`` holds throughout."""

    def __init__(self, A, m, n):
        self.A, self.m, self.n = A, m, n
        self.U, self.Ui = _identity(m), _identity(m)
        self.V, self.Vi = _identity(n), _identity(n)

    # row i += c * row j
    def add_row(self, i, j, c):
        if c == 0:
            return
        for M in (self.A, self.U):
            ri, rj = M[i], M[j]
            for k, x in enumerate(rj):
                if x:
                    ri[k] += c * x
        for row in self.Ui:
            if row[i]:
                row[j] -= c * row[i]

    def swap_rows(self, i, j):
        if i == j:
            return
        for M in (self.A, self.U):
            M[i], M[j] = M[j], M[i]
        for row in self.Ui:
            row[i], row[j] = row[j], row[i]

    def neg_row(self, i):
        for M in (self.A, self.U):
            M[i] = [-x for x in M[i]]
        for row in self.Ui:
            row[i] = -row[i]

    # col i += c * col j
    def add_col(self, i, j, c):
        if c == 0:
            return
        for M in (self.A, self.V):
            for row in M:
                if row[j]:
                    row[i] += c * row[j]
        ri, rj = self.Vi[j], self.Vi[i]
        for k, x in enumerate(rj):
            if x:
                ri[k] -= c * x

    def swap_cols(self, i, j):
        if i == j:
            return
        for M in (self.A, self.V):
            for row in M:
                row[i], row[j] = row[j], row[i]
        self.Vi[i], self.Vi[j] = self.Vi[j], self.Vi[i]


def _find_pivot(A, t, m, n):
    best, pos = 0, None
    for i in range(t, m):
        row = A[i]
        for j in range(t, n):
            x = row[j]
            if x:
                ax = x if x > 0 else -x
                if pos is None or ax < best:
                    best, pos = ax, (i, j)
                    if ax == 1:
                        return pos
    return pos


def smith_normal_form(A) -> SmithDecomposition:
    rows, (m, n) = _to_rows(A)
    w = _Work(rows, m, n)
    A = w.A
    t = 0
    while t < min(m, n):
        pos = _find_pivot(A, t, m, n)
        if pos is None:
            break
        w.swap_rows(t, pos[0])
        w.swap_cols(t, pos[1])
        while True:
            # clear column t
            while True:
                p = A[t][t]
                for i in range(t + 1, m):
                    if A[i][t]:
                        w.add_row(i, t, -(A[i][t] // p))
                rest = [(abs(A[i][t]), i) for i in range(t + 1, m) if A[i][t]]
                if not rest:
                    break
                w.swap_rows(t, min(rest)[1])
            # clear row t
            while True:
                p = A[t][t]
                for j in range(t + 1, n):
                    if A[t][j]:
                        w.add_col(j, t, -(A[t][j] // p))
                rest = [(abs(A[t][j]), j) for j in range(t + 1, n) if A[t][j]]
                if not rest:
                    break
                w.swap_cols(t, min(rest)[1])
            if any(A[i][t] for i in range(t + 1, m)):
                continue
            # enforce divisibility of the remaining block by the pivot
            p = A[t][t]
            if p == 1 or p == -1:
                break
            bad = None
            for i in range(t + 1, m):
                row = A[i]
                for j in range(t + 1, n):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            w.add_row(t, bad, 1)
        if A[t][t] < 0:
            w.neg_row(t)
        t += 1
    diag = tuple(A[i][i] for i in range(t))
    return SmithDecomposition(
        U=_obj(w.U, (m, m)), S=_obj(A, (m, n)), V=_obj(w.V, (n, n)),
        Uinv=_obj(w.Ui, (m, m)), Vinv=_obj(w.Vi, (n, n)), diagonal=diag,
    )


class NoSolution:
    """Returned by :func:`integer_solve` when ``A x = b`` has no integer solution."""

    __slots__ = ()

    def __repr__(self):
        return "NoSolution"

    def __bool__(self):
        return False


NO_SOLUTION = NoSolution()


def integer_solve(A, b, snf: SmithDecomposition | None = None):
    """Some integer ``x`` with ``A @ x == b``, or :data:`NO_SOLUTION`.

    Free parameters are set to zero, so the answer is deterministic.
    """
    A = np.asarray(A, dtype=object)
    b = [int(x) for x in b]
    m, n = A.shape
    if len(b) != m:
        raise ValueError(f"right-hand side has length {len(b)}, expected {m}")
    d = snf or smith_normal_form(A)
    c = _matvec(d.U, b)
    y = [0] * n
    for i, di in enumerate(d.diagonal):
        q, r = divmod(c[i], di)
        if r:
            return NO_SOLUTION
        y[i] = q
    if any(c[d.rank:]):
        return NO_SOLUTION
    return np.array(_matvec(d.V, y), dtype=object)


def _matvec(M, x):
    M = np.asarray(M, dtype=object)
    if M.shape[1] == 0:
        return [0] * M.shape[0]
    return [int(v) for v in exact_dot(M, np.array(x, dtype=object))]


_INT64_SAFE = 2 ** 62


def _max_abs(M) -> int:
    if M.size == 0:
        return 0
    return max(abs(int(M.max())), abs(int(M.min())))


def exact_dot(A, B) -> np.ndarray:
    """Exact integer product of object arrays.

    Uses int64 arithmetic when the entry bounds prove no intermediate sum
    can overflow, and Python ints otherwise.
    """
    A = np.asarray(A, dtype=object)
    B = np.asarray(B, dtype=object)
    inner = A.shape[-1]
    if A.size and B.size and _max_abs(A) * _max_abs(B) * max(inner, 1) < _INT64_SAFE:
        out = A.astype(np.int64).dot(B.astype(np.int64))
        return out.astype(object)
    out = A.dot(B)
    return np.asarray(out, dtype=object)


def matrix_rank(A) -> int:
    """Exact rank of an integer (or rational, after clearing denominators) matrix."""
    A = np.asarray(A, dtype=object)
    if A.size == 0:
        return 0
    return smith_normal_form(A).rank
