"""Batched evaluation kernels for sampled audits.

Each kernel has a numba ``@njit`` body and a pure-numpy body with identical
semantics. The numba path is used when numba imports and the environment
variable ``ROOTRES_DISABLE_NUMBA`` is unset or ``0``.

Shapes: ``L``/``V`` are ``(S, d)`` per-simplex vertex data, ``T`` is
``(S, m, d)`` barycentric samples; results are ``(S, m)``.
"""

from __future__ import annotations

import math
import os

import numpy as np

_DISABLED = os.environ.get("ROOTRES_DISABLE_NUMBA", "0") not in ("", "0")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


def _exp_affine_np(L, T):
    return np.exp(np.einsum("smd,sd->sm", T, L))


def _affine_np(V, T):
    return np.einsum("smd,sd->sm", T, V)


def _power_residual_np(G, F, n):
    return np.abs(G ** n - F)


if HAVE_NUMBA:
    @njit(cache=True, nogil=True)
    def _exp_affine_nb(L, T):
        S, m, d = T.shape
        out = np.empty((S, m), dtype=np.complex128)
        for s in range(S):
            for i in range(m):
                acc = 0j
                for j in range(d):
                    acc += T[s, i, j] * L[s, j]
                out[s, i] = np.exp(acc)
        return out

    @njit(cache=True, nogil=True)
    def _affine_nb(V, T):
        S, m, d = T.shape
        out = np.empty((S, m), dtype=np.complex128)
        for s in range(S):
            for i in range(m):
                acc = 0j
                for j in range(d):
                    acc += T[s, i, j] * V[s, j]
                out[s, i] = acc
        return out

    @njit(cache=True, nogil=True)
    def _power_residual_nb(G, F, n):
        # real arithmetic with square-and-multiply
        S, m = G.shape
        out = np.empty((S, m), dtype=np.float64)
        for s in range(S):
            for i in range(m):
                br, bi = G[s, i].real, G[s, i].imag
                zr, zi = 1.0, 0.0
                k = n
                while k > 0:
                    if k & 1:
                        zr, zi = zr * br - zi * bi, zr * bi + zi * br
                    br, bi = br * br - bi * bi, 2.0 * br * bi
                    k >>= 1
                dr, di = zr - F[s, i].real, zi - F[s, i].imag
                # sqrt rather than hypot: hypot here blocks vectorization and
                # audit magnitudes are far from the overflow range
                out[s, i] = math.sqrt(dr * dr + di * di)
        return out


def _want(use_numba) -> bool:
    if use_numba is None:
        return HAVE_NUMBA
    if use_numba and not HAVE_NUMBA:
        raise RuntimeError("numba kernels requested but numba is unavailable or disabled")
    return bool(use_numba)


def _prep(X, T):
    return (np.ascontiguousarray(X, dtype=np.complex128),
            np.ascontiguousarray(T, dtype=np.float64))


def exp_affine(L, T, use_numba: bool | None = None) -> np.ndarray:
    """``exp(sum_j T[s,i,j] * L[s,j])``."""
    L, T = _prep(L, T)
    if T.size == 0:
        return np.zeros(T.shape[:2], dtype=np.complex128)
    if _want(use_numba):
        return _exp_affine_nb(L, T)
    return _exp_affine_np(L, T)


def affine(V, T, use_numba: bool | None = None) -> np.ndarray:
    """``sum_j T[s,i,j] * V[s,j]``."""
    V, T = _prep(V, T)
    if T.size == 0:
        return np.zeros(T.shape[:2], dtype=np.complex128)
    if _want(use_numba):
        return _affine_nb(V, T)
    return _affine_np(V, T)


def power_residual(G, F, n: int, use_numba: bool | None = None) -> np.ndarray:
    """``|G**n - F|`` elementwise; the numba body uses square-and-multiply."""
    G = np.ascontiguousarray(G, dtype=np.complex128)
    F = np.ascontiguousarray(F, dtype=np.complex128)
    if G.size == 0:
        return np.zeros(G.shape, dtype=np.float64)
    if _want(use_numba):
        return _power_residual_nb(G, F, int(n))
    return _power_residual_np(G, F, int(n))
