"""Integer inner loops of the construction, with numba and numpy backends.

The numba versions are used when numba imports and ``RAMPQSS_NO_NUMBA`` is
unset (or ``0``). Both backends return identical arrays; the numpy path is
the reference and the tests compare the two. ``count_unique`` dispatches to
numpy either way, because a jitted sort is slower than numpy's.

Kernels
-------
eval_codewords   evaluate every polynomial in F^k at the evaluation points
equal_key_pairs  all ordered index pairs (i, j) with key[i] == key[j]
count_unique     sorted unique int64 keys with multiplicities
"""

from __future__ import annotations

import os

import numpy as np

_FLAG = os.environ.get("RAMPQSS_NO_NUMBA", "").strip().lower()
_DISABLED = _FLAG not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError("disabled by RAMPQSS_NO_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "numpy"


# --- numpy reference --------------------------------------------------------


def _coeff_digits(q: int, k: int) -> np.ndarray:
    """All of F^k in lexicographic order, first coordinate most significant."""
    idx = np.arange(q**k, dtype=np.int64)
    powers = q ** np.arange(k - 1, -1, -1, dtype=np.int64)
    return (idx[:, None] // powers[None, :]) % q


def eval_codewords_numpy(q: int, k: int, codes: np.ndarray) -> np.ndarray:
    digits = _coeff_digits(q, k)
    n = codes.shape[0]
    mat = np.zeros((k, n), dtype=np.int64)
    for j in range(n):
        x = int(codes[j])
        if x == q:
            mat[k - 1, j] = 1
        else:
            mat[:, j] = [pow(x, p, q) for p in range(k)]
    return (digits @ mat) % q


def equal_key_pairs_numpy(keys: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    keys = np.asarray(keys, dtype=np.int64)
    order = np.argsort(keys, kind="stable")
    _, starts, sizes = np.unique(keys[order], return_index=True, return_counts=True)
    # each sorted position p belongs to a group of size g starting at st
    g_of = np.repeat(sizes, sizes)
    st_of = np.repeat(starts, sizes)
    left = np.repeat(order, g_of)
    first_pair = np.cumsum(g_of) - g_of
    offs = np.arange(left.size, dtype=np.int64) - np.repeat(first_pair, g_of)
    right = order[np.repeat(st_of, g_of) + offs]
    return left, right


def count_unique_numpy(keys: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    u, c = np.unique(np.asarray(keys, dtype=np.int64), return_counts=True)
    return u, c.astype(np.int64)


# --- numba ------------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def _eval_codewords_nb(q, k, codes):
        m = q**k
        n = codes.shape[0]
        out = np.empty((m, n), dtype=np.int64)
        c = np.empty(k, dtype=np.int64)
        for row in range(m):
            r = row
            for i in range(k - 1, -1, -1):
                c[i] = r % q
                r //= q
            for j in range(n):
                x = codes[j]
                if x == q:
                    out[row, j] = c[k - 1]
                else:
                    acc = 0
                    for i in range(k - 1, -1, -1):
                        acc = (acc * x + c[i]) % q
                    out[row, j] = acc
        return out

    @njit(cache=True)
    def _equal_key_pairs_nb(keys):
        order = np.argsort(keys, kind="mergesort")
        n = keys.shape[0]
        total = 0
        i = 0
        while i < n:
            j = i
            while j < n and keys[order[j]] == keys[order[i]]:
                j += 1
            total += (j - i) * (j - i)
            i = j
        left = np.empty(total, dtype=np.int64)
        right = np.empty(total, dtype=np.int64)
        pos = 0
        i = 0
        while i < n:
            j = i
            while j < n and keys[order[j]] == keys[order[i]]:
                j += 1
            for a in range(i, j):
                for b in range(i, j):
                    left[pos] = order[a]
                    right[pos] = order[b]
                    pos += 1
            i = j
        return left, right

    @njit(cache=True)
    def _count_unique_nb(keys):
        n = keys.shape[0]
        if n == 0:
            return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
        s = np.sort(keys)
        distinct = 1
        for i in range(1, n):
            if s[i] != s[i - 1]:
                distinct += 1
        u = np.empty(distinct, dtype=np.int64)
        c = np.zeros(distinct, dtype=np.int64)
        pos = 0
        u[0] = s[0]
        for i in range(n):
            if s[i] != u[pos]:
                pos += 1
                u[pos] = s[i]
            c[pos] += 1
        return u, c

    def eval_codewords_numba(q: int, k: int, codes: np.ndarray) -> np.ndarray:
        return _eval_codewords_nb(np.int64(q), np.int64(k), np.ascontiguousarray(codes, dtype=np.int64))

    def equal_key_pairs_numba(keys: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return _equal_key_pairs_nb(np.ascontiguousarray(keys, dtype=np.int64))

    def count_unique_numba(keys: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return _count_unique_nb(np.ascontiguousarray(keys, dtype=np.int64))

    eval_codewords = eval_codewords_numba
    equal_key_pairs = equal_key_pairs_numba
    # numpy's vectorised sort beats the jitted one here; see benchmarks/bench_kernels.py
    count_unique = count_unique_numpy
else:
    eval_codewords = eval_codewords_numpy
    equal_key_pairs = equal_key_pairs_numpy
    count_unique = count_unique_numpy
