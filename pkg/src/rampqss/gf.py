"""Exact arithmetic over a prime field GF(q).

Elements are plain integers in ``[0, q)`` wherever arrays are involved; the
:class:`FieldElement` wrapper exists for scalar code that wants operator
overloading with modulus checking.

Evaluation points may also be :data:`INFINITY`, the point at infinity of the
projective line. For a polynomial of degree < k, ``p(INFINITY)`` is its
coefficient of ``x**(k-1)``. Using it lets a scheme avoid the point 0, which
would hand the constant coefficient (a secret digit) to a single share.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import DuplicatePointsError, NotPrimeError, ParameterError, SingularMatrixError

__all__ = [
    "INFINITY",
    "FieldElement",
    "FieldMatrix",
    "is_prime",
    "poly_eval",
    "vandermonde",
    "invert_linear_map",
    "full_column_rank",
    "rank",
    "point_code",
]


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFINITY"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q < 4:
        return True
    if q % 2 == 0:
        return False
    f = 3
    while f * f <= q:
        if q % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldElement:
    value: int
    modulus: int

    def __post_init__(self):
        if not is_prime(self.modulus):
            raise NotPrimeError(f"modulus {self.modulus} is not prime")
        object.__setattr__(self, "value", int(self.value) % self.modulus)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.modulus != self.modulus:
                raise ParameterError(f"modulus mismatch: {self.modulus} vs {other.modulus}")
            return other.value
        if isinstance(other, (int, np.integer)):
            return int(other)
        return NotImplemented

    def _new(self, v: int) -> "FieldElement":
        return FieldElement(v, self.modulus)

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.value - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(o - self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.value * o)

    __rmul__ = __mul__

    def __neg__(self):
        return self._new(-self.value)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return self._new(pow(self.value, e, self.modulus))

    def inverse(self) -> "FieldElement":
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self._new(pow(self.value, self.modulus - 2, self.modulus))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * self._new(o).inverse()

    def __int__(self) -> int:
        return self.value

    def __index__(self) -> int:
        return self.value

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.value == other.value and self.modulus == other.modulus
        if isinstance(other, (int, np.integer)):
            return self.value == int(other) % self.modulus
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.value, self.modulus))

    def __repr__(self) -> str:
        return f"GF{self.modulus}({self.value})"


def poly_eval(c: Sequence[FieldElement], x) -> FieldElement:
    """Evaluate ``sum_i c[i] * x**i`` over GF(q) (Horner).

    ``x`` may be :data:`INFINITY`, in which case the leading coefficient
    ``c[-1]`` is returned.
    """
    if not c:
        raise ParameterError("empty coefficient vector")
    q = c[0].modulus
    if any(ci.modulus != q for ci in c):
        raise ParameterError("coefficients have mixed moduli")
    if x is INFINITY:
        return c[-1]
    if isinstance(x, FieldElement) and x.modulus != q:
        raise ParameterError(f"modulus mismatch: coefficients mod {q}, point mod {x.modulus}")
    xv = int(x) % q
    acc = 0
    for ci in reversed(c):
        acc = (acc * xv + ci.value) % q
    return FieldElement(acc, q)


class FieldMatrix:
    """Immutable dense matrix over GF(q), backed by an int64 array."""

    __slots__ = ("_a", "q")

    def __init__(self, entries, q: int):
        if not is_prime(q):
            raise NotPrimeError(f"modulus {q} is not prime")
        a = np.array(entries, dtype=np.int64)
        if a.ndim != 2:
            a = a.reshape(len(a), -1) if a.size else np.zeros((0, 0), dtype=np.int64)
        a %= q
        a.setflags(write=False)
        self._a = a
        self.q = q

    @property
    def entries(self) -> np.ndarray:
        return self._a

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def T(self) -> "FieldMatrix":
        return FieldMatrix(self._a.T, self.q)

    @classmethod
    def identity(cls, size: int, q: int) -> "FieldMatrix":
        return cls(np.eye(size, dtype=np.int64), q)

    def __matmul__(self, other: "FieldMatrix") -> "FieldMatrix":
        if other.q != self.q:
            raise ParameterError("modulus mismatch")
        if self.cols != other.rows:
            raise ParameterError(f"shape mismatch {self.shape} @ {other.shape}")
        return FieldMatrix((self._a @ other._a) % self.q, self.q)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return self.q == other.q and self.shape == other.shape and bool(np.array_equal(self._a, other._a))

    def __hash__(self):
        return hash((self.q, self.shape, self._a.tobytes()))

    def tolist(self) -> list[list[int]]:
        return self._a.tolist()

    def __repr__(self) -> str:
        return f"FieldMatrix({self.tolist()}, q={self.q})"


PointLike = Union[FieldElement, int, _Infinity]


def point_code(x: PointLike, q: int) -> int:
    """Integer code of an evaluation point: ``0..q-1`` for field elements, ``q`` for INFINITY."""
    if x is INFINITY:
        return q
    if isinstance(x, FieldElement):
        if x.modulus != q:
            raise ParameterError(f"point {x!r} is not in GF({q})")
        return x.value
    v = int(x)
    if not 0 <= v < q:
        raise ParameterError(f"point {v} outside GF({q})")
    return v


def vandermonde(points: Sequence[PointLike], a: int, b: int, q: int, degree: int | None = None) -> FieldMatrix:
    """Matrix with rows ``x**a .. x**b`` and one column per point.

    Entry ``(r, j)`` is ``points[j] ** (a + r)``. ``b == a - 1`` yields an empty
    (0-row) matrix, which is what the block decoder needs when ``k == L``.
    An INFINITY column has a single 1 in the row for power ``degree``
    (default ``b``), i.e. it reads off the leading coefficient of a
    polynomial of that degree.
    """
    if b < a - 1 or a < 0:
        raise ParameterError(f"invalid power range a={a}, b={b}")
    codes = [point_code(x, q) for x in points]
    if len(set(codes)) != len(codes):
        raise DuplicatePointsError(f"evaluation points are not distinct: {list(points)}")
    top = b if degree is None else degree
    out = np.zeros((b - a + 1, len(codes)), dtype=np.int64)
    for j, x in enumerate(codes):
        for r in range(b - a + 1):
            p = a + r
            if x == q:
                out[r, j] = 1 if p == top else 0
            else:
                out[r, j] = pow(x, p, q)
    return FieldMatrix(out, q)


def _row_reduce(a: np.ndarray, q: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form with first-nonzero pivoting. Returns (rref, pivot columns)."""
    m = a.copy() % q
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            m[[r, p]] = m[[p, r]]
        inv = pow(int(m[r, c]), q - 2, q)
        m[r] = (m[r] * inv) % q
        for i in range(rows):
            if i != r and m[i, c]:
                m[i] = (m[i] - m[i, c] * m[r]) % q
        pivots.append(c)
        r += 1
    return m, pivots


def rank(M: FieldMatrix) -> int:
    if M.rows == 0 or M.cols == 0:
        return 0
    return len(_row_reduce(M.entries, M.q)[1])


def full_column_rank(M: FieldMatrix) -> bool:
    return rank(M) == M.cols


def invert_linear_map(M: FieldMatrix) -> FieldMatrix:
    """Exact inverse over GF(q) by Gauss-Jordan elimination on ``[M | I]``."""
    n, m = M.shape
    if n != m:
        raise ParameterError(f"cannot invert non-square matrix of shape {M.shape}")
    aug = np.concatenate([M.entries, np.eye(n, dtype=np.int64)], axis=1)
    red, pivots = _row_reduce(aug, M.q)
    r = sum(1 for p in pivots if p < n)
    if r < n:
        raise SingularMatrixError(r, n)
    return FieldMatrix(red[:, n:], M.q)
