import itertools

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from rampqss.errors import DuplicatePointsError, ParameterError, SingularMatrixError
from rampqss.gf import (
    INFINITY,
    FieldElement,
    FieldMatrix,
    full_column_rank,
    invert_linear_map,
    poly_eval,
    rank,
    vandermonde,
)
from rampqss.scheme import default_points


def fe(values, q):
    return [FieldElement(v, q) for v in values]


class TestPolyEval:
    def test_zero_polynomial(self):
        for x in range(5):
            assert poly_eval(fe([0, 0, 0], 5), FieldElement(x, 5)) == 0

    def test_constant(self):
        for x in range(7):
            assert poly_eval(fe([4, 0, 0], 7), FieldElement(x, 7)).value == 4

    def test_hand_example(self):
        # 1 + 2*2 + 3*4 = 17 = 2 mod 5
        assert poly_eval(fe([1, 2, 3], 5), FieldElement(2, 5)) == FieldElement(2, 5)

    def test_infinity_reads_leading_coefficient(self):
        assert poly_eval(fe([1, 2, 3], 5), INFINITY).value == 3

    def test_modulus_mismatch(self):
        with pytest.raises(ParameterError):
            poly_eval(fe([1, 2], 5), FieldElement(1, 7))


class TestVandermonde:
    def test_single_point_power_zero(self):
        assert vandermonde([3], 0, 0, 5).tolist() == [[1]]

    def test_two_points(self):
        assert vandermonde([1, 2], 0, 1, 5).tolist() == [[1, 1], [1, 2]]

    def test_shifted_rows(self):
        assert vandermonde([1, 2, 3], 1, 2, 5).tolist() == [[1, 2, 3], [1, 4, 4]]

    def test_empty_row_range(self):
        assert vandermonde([1, 2], 3, 2, 5).shape == (0, 2)

    def test_duplicates_rejected(self):
        with pytest.raises(DuplicatePointsError):
            vandermonde([1, 1], 0, 1, 5)

    def test_infinity_column(self):
        m = vandermonde([1, INFINITY], 0, 2, 5)
        assert m.tolist() == [[1, 0], [1, 0], [1, 1]]
        # the leading power may be set explicitly for partial row ranges
        assert vandermonde([INFINITY], 0, 1, 5, degree=2).tolist() == [[0], [0]]


class TestInverse:
    def test_identity(self):
        i3 = FieldMatrix.identity(3, 7)
        assert invert_linear_map(i3) == i3

    @pytest.mark.parametrize(
        "q, m, expected",
        [(5, [[1, 1], [1, 2]], [[2, 4], [4, 1]]), (3, [[1, 1], [1, 2]], [[2, 2], [2, 1]])],
    )
    def test_examples(self, q, m, expected):
        inv = invert_linear_map(FieldMatrix(m, q))
        assert inv.tolist() == expected
        assert (FieldMatrix(m, q) @ inv) == FieldMatrix.identity(2, q)

    def test_singular_reports_rank(self):
        with pytest.raises(SingularMatrixError) as err:
            invert_linear_map(FieldMatrix([[1, 2], [2, 4]], 5))
        assert err.value.rank == 1

    @pytest.mark.parametrize("q", [3, 5, 7])
    def test_random_matrices_against_sympy_determinant(self, q):
        rng = np.random.default_rng(q)
        inverted = 0
        while inverted < 100:
            size = int(rng.integers(1, 5))
            a = rng.integers(0, q, size=(size, size))
            det = int(sympy.Matrix(a.tolist()).det()) % q
            m = FieldMatrix(a, q)
            if det == 0:
                with pytest.raises(SingularMatrixError):
                    invert_linear_map(m)
                continue
            inv = invert_linear_map(m)
            assert m @ inv == FieldMatrix.identity(size, q)
            assert inv @ m == FieldMatrix.identity(size, q)
            inverted += 1


class TestRank:
    def test_zero_matrix(self):
        assert not full_column_rank(FieldMatrix(np.zeros((3, 2)), 5))

    @pytest.mark.parametrize("q, k", [(3, 2), (5, 3), (7, 3), (7, 4)])
    def test_square_vandermonde(self, q, k):
        for pts in itertools.combinations(range(q), k):
            assert full_column_rank(vandermonde(pts, 0, k - 1, q))

    def test_shifted_example(self):
        m = vandermonde([1, 2], 1, 2, 5)
        assert m.tolist() == [[1, 2], [1, 4]]
        assert full_column_rank(m)

    @pytest.mark.parametrize("q, k, L", [(3, 2, 1), (5, 3, 1), (5, 3, 2), (7, 3, 1), (7, 3, 2), (7, 4, 2)])
    def test_high_rows_injective_with_default_points(self, q, k, L):
        # c -> c M_{k-1}^L(X) is injective (rank k - L) whenever |X| >= k - L
        n = 2 * k - L
        pts = default_points(q, n)
        for m in range(k - L, n + 1):
            for xs in itertools.combinations(pts, m):
                v = vandermonde(xs, L, k - 1, q, degree=k - 1)
                assert rank(v) == k - L
                if m == k - L:
                    assert full_column_rank(v) and full_column_rank(v.T)

    def test_zero_point_breaks_injectivity(self):
        # p_c(0) = c_1, so the high rows vanish at x = 0
        assert rank(vandermonde([0], 2, 2, 5)) == 0


@pytest.mark.parametrize("q", [2, 3, 5, 7, 11, 13])
def test_field_axioms_exhaustive(q):
    els = [FieldElement(v, q) for v in range(q)]
    for a in els:
        assert a + (-a) == 0
        for b in els:
            assert a + b == b + a and a * b == b * a
            if b.value:
                assert (a * b) * b.inverse() == a
                assert a / b * b == a


@settings(max_examples=60, deadline=None)
@given(
    q=st.sampled_from([5, 7, 11]),
    data=st.data(),
)
def test_poly_eval_matches_row_vector_product(q, data):
    k = data.draw(st.integers(1, 4))
    m = data.draw(st.integers(1, k))
    pts = data.draw(st.lists(st.integers(0, q - 1), min_size=m, max_size=m, unique=True))
    c = data.draw(st.lists(st.integers(0, q - 1), min_size=k, max_size=k))
    direct = [poly_eval(fe(c, q), FieldElement(x, q)).value for x in pts]
    via_matrix = (FieldMatrix([c], q) @ vandermonde(pts, 0, k - 1, q)).tolist()[0]
    assert direct == via_matrix
