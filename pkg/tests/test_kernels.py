import os
import subprocess
import sys

import numpy as np
import pytest

from rampqss import _kernels
from rampqss.gf import FieldElement, INFINITY, poly_eval

needs_numba = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba backend disabled")


def _oracle_codewords(q, k, codes):
    rows = []
    for r in range(q**k):
        c = [FieldElement((r // q ** (k - 1 - i)) % q, q) for i in range(k)]
        rows.append([poly_eval(c, INFINITY if x == q else FieldElement(x, q)).value for x in codes])
    return np.array(rows)


@pytest.mark.parametrize("q, k, codes", [(3, 2, [1, 2, 3]), (5, 3, [0, 1, 4, 5]), (7, 3, [1, 2, 3, 4, 5])])
def test_eval_codewords_numpy_matches_horner(q, k, codes):
    codes = np.array(codes)
    np.testing.assert_array_equal(_kernels.eval_codewords_numpy(q, k, codes), _oracle_codewords(q, k, codes))


@needs_numba
@pytest.mark.parametrize("q, k, codes", [(3, 2, [1, 2, 3]), (5, 3, [0, 1, 4, 5]), (7, 3, [1, 2, 3, 4, 5])])
def test_eval_codewords_backends_agree(q, k, codes):
    codes = np.array(codes, dtype=np.int64)
    np.testing.assert_array_equal(
        _kernels.eval_codewords_numba(q, k, codes), _kernels.eval_codewords_numpy(q, k, codes)
    )


def _brute_pairs(keys):
    return sorted((i, j) for i in range(len(keys)) for j in range(len(keys)) if keys[i] == keys[j])


@pytest.mark.parametrize("seed", range(5))
def test_equal_key_pairs_numpy_brute_force(seed):
    keys = np.random.default_rng(seed).integers(0, 6, size=30)
    left, right = _kernels.equal_key_pairs_numpy(keys)
    assert sorted(zip(left.tolist(), right.tolist())) == _brute_pairs(keys.tolist())


@needs_numba
@pytest.mark.parametrize("seed", range(5))
def test_kernel_backends_identical(seed):
    keys = np.random.default_rng(seed).integers(0, 9, size=200).astype(np.int64)
    ln, rn = _kernels.equal_key_pairs_numba(keys)
    lp, rp = _kernels.equal_key_pairs_numpy(keys)
    np.testing.assert_array_equal(ln, lp)
    np.testing.assert_array_equal(rn, rp)
    un, cn = _kernels.count_unique_numba(keys)
    up, cp = _kernels.count_unique_numpy(keys)
    np.testing.assert_array_equal(un, up)
    np.testing.assert_array_equal(cn, cp)


def test_empty_inputs():
    empty = np.zeros(0, dtype=np.int64)
    for fn in (_kernels.count_unique, _kernels.equal_key_pairs):
        a, b = fn(empty)
        assert a.size == 0 and b.size == 0


def test_env_flag_selects_numpy_backend():
    code = (
        "from rampqss import _kernels, access, scheme;"
        "s = scheme.build_scheme(scheme.SchemeParams(5, 3, 2, 4));"
        "acc = access.access_structure(s, with_info=False);"
        "print(_kernels.BACKEND, sorted({(len(x), r.cls.value) for x, r in acc.items()}))"
    )
    env = dict(os.environ, RAMPQSS_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True).stdout
    assert out.strip() == "numpy [(1, 0), (2, 1), (3, 2), (4, 2)]"
