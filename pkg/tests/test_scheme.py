import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rampqss.errors import (
    DuplicatePointsError,
    FieldTooSmallError,
    NotPrimeError,
    NotPureSchemeError,
    ParameterError,
)
from rampqss.gf import INFINITY, FieldElement, poly_eval
from rampqss.qlin import basis_state, partial_trace, projector, random_density, random_pure_state
from rampqss.scheme import (
    SchemeParams,
    build_scheme,
    decode_sparse,
    default_points,
    encode,
    encode_sparse,
    enumerate_coset,
    gram_counts,
    isometry_matrix,
    reduced_entropy,
    reduced_spectrum,
    reduced_state,
    share_channel,
)

from conftest import PARAMS, SMALL, scheme_for


def _share_values(scheme, c):
    q = scheme.q
    cs = [FieldElement(v, q) for v in c]
    return tuple(
        poly_eval(cs, INFINITY if x is INFINITY else FieldElement(x, q)).value for x in scheme.params.eval_points
    )


def _label(values, shares, q):
    out = 0
    for i in shares:
        out = out * q + values[i]
    return out


def _gram_oracle(scheme, X, a, b):
    """Brute-force codeword-pair count straight from polynomial evaluation."""
    q, k, L = scheme.q, scheme.k, scheme.L
    ys = [i for i in range(scheme.n) if i not in X]
    words = []
    for c in itertools.product(range(q), repeat=k):
        v = _share_values(scheme, c)
        s = 0
        for d in c[:L]:
            s = s * q + d
        words.append((s, _label(v, X, q), _label(v, ys, q)))
    g = np.zeros((q**L, q**L), dtype=np.int64)
    for s, xa, ya in words:
        if ya != a:
            continue
        for t, xb, yb in words:
            if yb == b and xa == xb:
                g[s, t] += 1
    return g


class TestParams:
    def test_default_scheme(self):
        s = scheme_for(5, 3, 2)
        assert (s.secret_dim, s.share_dims, s.C) == (25, (5, 5, 5, 5), 5)

    def test_default_points(self):
        assert default_points(5, 4) == (1, 2, 3, 4)
        assert default_points(3, 3) == (1, 2, INFINITY)

    @pytest.mark.parametrize(
        "args, err",
        [
            ((4, 2, 1, 3), NotPrimeError),
            ((5, 3, 2, 5), NotPureSchemeError),
            ((3, 3, 1, 5), FieldTooSmallError),
            ((5, 2, 3, 1), ParameterError),
            ((5, 3, 2, 4, (1, 1, 2, 3)), DuplicatePointsError),
            ((5, 3, 2, 4, (1, 2, 3)), ParameterError),
            ((5, 3, 2, 4, (1, 2, 3, 7)), ParameterError),
        ],
    )
    def test_errors_are_distinguishable(self, args, err):
        with pytest.raises(err):
            SchemeParams(*args)

    def test_pure_scheme_message(self):
        with pytest.raises(NotPureSchemeError, match="2k - L"):
            SchemeParams(5, 3, 2, 5)

    def test_dict_round_trip(self):
        p = SchemeParams(3, 2, 1, 3)
        assert p.to_dict()["eval_points"] == [1, 2, "inf"]
        assert SchemeParams.from_dict(p.to_dict()) == p


class TestCoset:
    def test_example(self):
        s = scheme_for(3, 2, 1)
        assert [tuple(x.value for x in c) for c in enumerate_coset(s, (1,))] == [(1, 0), (1, 1), (1, 2)]

    @pytest.mark.parametrize("qkl", PARAMS)
    def test_cosets_partition_coefficient_space(self, qkl):
        s = scheme_for(*qkl)
        seen = set()
        for idx in range(s.secret_dim):
            coset = enumerate_coset(s, idx)
            assert len(coset) == s.C
            seen.update(tuple(x.value for x in c) for c in coset)
        assert len(seen) == s.q**s.k


class TestEncode:
    def test_example_with_explicit_points(self):
        s = build_scheme(SchemeParams(3, 2, 1, 3, (0, 1, 2)))
        v = encode(s, basis_state(0, 3))
        expected = np.zeros(27)
        # |000>, |012>, |021>
        expected[[0, 5, 7]] = 1 / math.sqrt(3)
        np.testing.assert_allclose(v, expected, atol=1e-15)

    @pytest.mark.parametrize("qkl", PARAMS)
    def test_codewords_match_horner(self, qkl):
        s = scheme_for(*qkl)
        rng = np.random.default_rng(1)
        for r in rng.choice(s.q**s.k, size=min(40, s.q**s.k), replace=False):
            c = [(int(r) // s.q ** (s.k - 1 - i)) % s.q for i in range(s.k)]
            assert tuple(s.codewords[r]) == _share_values(s, c)

    @pytest.mark.parametrize("qkl", PARAMS)
    def test_disjoint_supports_and_injectivity(self, qkl):
        s = scheme_for(*qkl)
        assert np.unique(s.share_index).size == s.share_index.size

    @pytest.mark.parametrize("qkl", SMALL)
    def test_isometry(self, qkl):
        s = scheme_for(*qkl)
        v = isometry_matrix(s)
        np.testing.assert_allclose(v.conj().T @ v, np.eye(s.secret_dim), atol=1e-14)

    def test_norm_preserved(self, rng):
        s = scheme_for(5, 3, 2)
        for _ in range(20):
            psi = random_pure_state(25, rng)
            assert np.linalg.norm(encode(s, psi)) == pytest.approx(1.0, abs=1e-12)

    def test_sparse_round_trip(self, rng):
        s = scheme_for(5, 3, 1)
        psi = random_pure_state(5, rng)
        amps = encode_sparse(s, psi)
        assert len(amps) == s.q**s.k
        np.testing.assert_allclose(decode_sparse(s, amps), encode(s, psi))

    def test_wrong_dimension(self):
        with pytest.raises(ParameterError):
            encode(scheme_for(5, 3, 2), np.ones(5))


class TestReducedState:
    def test_k_shares_of_uniform_secret_are_maximally_mixed(self):
        s = scheme_for(5, 3, 2)
        for xs in itertools.combinations(range(4), 3):
            np.testing.assert_allclose(reduced_state(s, np.eye(25) / 25, xs), np.eye(125) / 125, atol=1e-15)

    @pytest.mark.parametrize("qkl", SMALL)
    def test_three_paths_agree(self, qkl, rng):
        s = scheme_for(*qkl)
        rho = random_density(s.secret_dim, rng)
        v = isometry_matrix(s)
        glob = v @ rho @ v.conj().T
        for m in range(1, s.n + 1):
            for xs in itertools.combinations(range(s.n), m):
                direct = reduced_state(s, rho, xs)
                np.testing.assert_allclose(direct, partial_trace(glob, s.share_dims, xs), atol=1e-13)
                np.testing.assert_allclose(direct, share_channel(s, xs)(rho), atol=1e-13)

    def test_spectrum_on_large_subset(self, rng):
        s = scheme_for(7, 3, 1)
        psi = random_pure_state(7, rng)
        w = reduced_spectrum(s, psi, range(5))
        assert w[0] == pytest.approx(1.0) and np.sum(w[1:]) == pytest.approx(0.0, abs=1e-12)
        # complementary sides of a pure state share their spectrum
        assert reduced_entropy(s, psi, (0, 1, 2)) == pytest.approx(reduced_entropy(s, psi, (3, 4)), abs=1e-10)

    @pytest.mark.parametrize("qkl", SMALL)
    def test_share_channel_trace_preserving(self, qkl):
        s = scheme_for(*qkl)
        for xs in [(0,), tuple(range(s.n - 1))]:
            assert share_channel(s, xs).tp_defect() < 1e-13


class TestGramCounts:
    @pytest.mark.parametrize("qkl", PARAMS)
    def test_full_set_is_scalar(self, qkl):
        s = scheme_for(*qkl)
        np.testing.assert_array_equal(gram_counts(s, range(s.n), 0, 0), s.C * np.eye(s.secret_dim, dtype=int))

    @pytest.mark.parametrize("qkl, X", [((3, 2, 1), (0, 1)), ((3, 2, 1), (2,)), ((3, 2, 2), (0,)), ((5, 3, 2), (1, 3))])
    def test_against_brute_force(self, qkl, X):
        s = scheme_for(*qkl)
        dy = s.q ** (s.n - len(X))
        for a in range(dy):
            for b in range(dy):
                np.testing.assert_array_equal(gram_counts(s, X, a, b), _gram_oracle(s, X, a, b))

    def test_against_float_isometry(self):
        s = scheme_for(3, 2, 1)
        v = isometry_matrix(s)
        X, ys = (0, 1), (2,)
        for a in range(3):
            for b in range(3):
                op = np.kron(np.eye(9), np.outer(basis_state(a, 3), basis_state(b, 3)))
                np.testing.assert_allclose(s.C * v.conj().T @ op @ v, gram_counts(s, X, a, b), atol=1e-13)

    def test_qualified_pair_is_scalar(self):
        s = scheme_for(3, 2, 1)
        for a in range(3):
            for b in range(3):
                g = gram_counts(s, (0, 1), a, b)
                assert np.array_equal(g, g[0, 0] * np.eye(3, dtype=int))

    def test_intermediate_pair_is_not_scalar(self):
        s = scheme_for(5, 3, 2)
        gs = [gram_counts(s, (0, 1), a, b) for a in range(25) for b in range(25)]
        assert any(not np.array_equal(g, g[0, 0] * np.eye(25, dtype=int)) for g in gs)


@settings(max_examples=20, deadline=None)
@given(qkl=st.sampled_from(SMALL), seed=st.integers(0, 2**32 - 1))
def test_encoding_is_linear(qkl, seed):
    s = scheme_for(*qkl)
    rng = np.random.default_rng(seed)
    a, b = random_pure_state(s.secret_dim, rng), random_pure_state(s.secret_dim, rng)
    z = complex(rng.normal(), rng.normal())
    np.testing.assert_allclose(encode(s, a + z * b), encode(s, a) + z * encode(s, b), atol=1e-13)


def test_reduced_state_of_pure_vs_projector(rng):
    s = scheme_for(5, 3, 1)
    psi = random_pure_state(5, rng)
    np.testing.assert_allclose(reduced_state(s, psi, (0, 3)), reduced_state(s, projector(psi), (0, 3)), atol=1e-14)
