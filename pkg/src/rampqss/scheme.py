"""The (k, L, n) polynomial-code encoder and its reduced share states.

A secret lives in ``H = (C^q)^{⊗L}`` and is encoded by the isometry

    V|s> = q^{-(k-L)/2} * sum_{c in D(s)} |p_c(x_1), ..., p_c(x_n)>

where ``D(s)`` is the set of coefficient vectors ``c in F^k`` whose first
``L`` entries equal ``s``. Coefficient vectors are enumerated
lexicographically (first coordinate most significant), so codeword row
``r`` belongs to secret ``r // q**(k-L)`` and each coset is a contiguous
block of rows. Shares are indexed from 0 in the library API.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _kernels
from .errors import (
    DuplicatePointsError,
    FieldTooSmallError,
    NotPrimeError,
    NotPureSchemeError,
    ParameterError,
)
from .gf import INFINITY, FieldElement, is_prime, point_code
from .qlin import DEFAULT_ZERO_THRESHOLD, KrausChannel, eig_hermitian
from .info import spectrum_entropy

__all__ = [
    "MAX_DENSE_DIM",
    "SchemeParams",
    "Scheme",
    "default_points",
    "build_scheme",
    "enumerate_coset",
    "encode",
    "encode_sparse",
    "decode_sparse",
    "reduced_state",
    "reduced_spectrum",
    "reduced_entropy",
    "share_channel",
    "isometry_matrix",
    "gram_counts",
]

# largest density-matrix side formed explicitly
MAX_DENSE_DIM = 4096


def default_points(q: int, n: int) -> tuple:
    """``1, 2, ..., n`` when ``n < q``; otherwise all nonzero elements plus INFINITY.

    The point 0 is avoided: ``p_c(0) = c_1`` is a secret digit, so a share
    evaluated there would leak the secret on its own.
    """
    if n < q:
        return tuple(range(1, n + 1))
    if n == q:
        return tuple(range(1, q)) + (INFINITY,)
    raise FieldTooSmallError(f"q = {q} is smaller than n = {n}")


def _parse_point(p, q: int):
    if p is INFINITY or (isinstance(p, str) and p.strip().lower() in ("inf", "infinity", "∞")):
        return INFINITY
    if isinstance(p, FieldElement):
        if p.modulus != q:
            raise ParameterError(f"evaluation point {p!r} is not in GF({q})")
        return p.value
    if isinstance(p, bool) or not isinstance(p, (int, np.integer)):
        raise ParameterError(f"evaluation point {p!r} is not an integer or 'inf'")
    if not 0 <= int(p) < q:
        raise ParameterError(f"evaluation point {p} outside GF({q})")
    return int(p)


@dataclass(frozen=True)
class SchemeParams:
    q: int
    k: int
    L: int
    n: int
    eval_points: tuple = ()

    def __post_init__(self):
        for name in ("q", "k", "L", "n"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise ParameterError(f"{name} must be an integer, got {v!r}")
        q, k, L, n = int(self.q), int(self.k), int(self.L), int(self.n)
        if not is_prime(q):
            raise NotPrimeError(f"q = {q} is not prime (only prime fields are supported)")
        if not 1 <= L <= k:
            raise ParameterError(f"need 1 <= L <= k, got k = {k}, L = {L}")
        if n != 2 * k - L:
            raise NotPureSchemeError(
                f"n = {n} but a pure (k, L, n) ramp scheme requires n = 2k - L = {2 * k - L}"
            )
        if q < n:
            raise FieldTooSmallError(f"field size q = {q} must be at least n = {n}")
        pts = self.eval_points if len(self.eval_points) else default_points(q, n)
        pts = tuple(_parse_point(p, q) for p in pts)
        if len(pts) != n:
            raise ParameterError(f"expected {n} evaluation points, got {len(pts)}")
        codes = [point_code(p, q) for p in pts]
        if len(set(codes)) != n:
            raise DuplicatePointsError(f"evaluation points are not distinct: {list(pts)}")
        for name, v in zip(("q", "k", "L", "n"), (q, k, L, n)):
            object.__setattr__(self, name, v)
        object.__setattr__(self, "eval_points", pts)

    @property
    def point_codes(self) -> np.ndarray:
        return np.array([point_code(p, self.q) for p in self.eval_points], dtype=np.int64)

    def to_dict(self) -> dict:
        pts = ["inf" if p is INFINITY else p for p in self.eval_points]
        return {"q": self.q, "k": self.k, "L": self.L, "n": self.n, "eval_points": pts}

    @classmethod
    def from_dict(cls, d: Mapping) -> "SchemeParams":
        if not isinstance(d, Mapping):
            raise ParameterError("scheme record must be an object")
        missing = [f for f in ("q", "k", "L", "n") if f not in d]
        if missing:
            raise ParameterError(f"scheme record is missing fields {missing}")
        pts = d.get("eval_points") or ()
        if not isinstance(pts, (list, tuple)):
            raise ParameterError("eval_points must be a list")
        return cls(d["q"], d["k"], d["L"], d["n"], tuple(pts))


class Scheme:
    """Built encoder. Immutable; create with :func:`build_scheme`.

    Attributes
    ----------
    codewords : (q**k, n) int array, share values ``p_c(x_i)`` per coefficient vector
    secret_of : (q**k,) int array, secret index ``s`` of the coset each row belongs to
    share_index : (q**k,) int array, flat basis index of ``|p_c(N)>`` in ``H_N``
    """

    def __init__(self, params: SchemeParams):
        self.params = params
        q, k, L, n = params.q, params.k, params.L, params.n
        self.C = q ** (k - L)
        self.secret_dim = q**L
        self.share_dims = (q,) * n
        cw = _kernels.eval_codewords(q, k, params.point_codes)
        self.codewords = cw
        self.secret_of = np.arange(q**k, dtype=np.int64) // self.C
        self.share_index = _digits_to_index(cw, q)
        for a in (self.codewords, self.secret_of, self.share_index):
            a.setflags(write=False)
        if np.unique(self.share_index).size != q**k:
            raise AssertionError("codewords p_c(N) are not distinct; evaluation points must be distinct")

    @property
    def q(self) -> int:
        return self.params.q

    @property
    def k(self) -> int:
        return self.params.k

    @property
    def L(self) -> int:
        return self.params.L

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def global_dim(self) -> int:
        return self.q**self.n

    @property
    def column_support(self) -> np.ndarray:
        """(q**L, q**(k-L)) array: share-basis indices in the support of ``V|s>``."""
        return self.share_index.reshape(self.secret_dim, self.C)

    def subset(self, X: Iterable[int]) -> tuple[int, ...]:
        """Normalise a share subset to a sorted tuple of 0-based indices."""
        xs = [int(i) for i in X]
        if len(set(xs)) != len(xs):
            raise ParameterError(f"repeated share index in {xs}")
        if any(i < 0 or i >= self.n for i in xs):
            raise ParameterError(f"share index out of range 0..{self.n - 1}: {xs}")
        return tuple(sorted(xs))

    def complement(self, X: Iterable[int]) -> tuple[int, ...]:
        xs = set(self.subset(X))
        return tuple(i for i in range(self.n) if i not in xs)

    def keys(self, X: Iterable[int]) -> np.ndarray:
        """Flat basis index of ``|p_c(X)>`` in ``H_X`` for every codeword row."""
        xs = self.subset(X)
        return _digits_to_index(self.codewords[:, list(xs)], self.q)

    def __repr__(self) -> str:
        p = self.params
        return f"Scheme(q={p.q}, k={p.k}, L={p.L}, n={p.n}, points={list(p.eval_points)})"


def _digits_to_index(digits: np.ndarray, q: int) -> np.ndarray:
    m = digits.shape[1]
    if m == 0:
        return np.zeros(digits.shape[0], dtype=np.int64)
    powers = q ** np.arange(m - 1, -1, -1, dtype=np.int64)
    return digits.astype(np.int64) @ powers


def build_scheme(params: SchemeParams | Mapping) -> Scheme:
    if not isinstance(params, SchemeParams):
        params = SchemeParams.from_dict(params)
    return Scheme(params)


def _secret_index(scheme: Scheme, s) -> int:
    if isinstance(s, (int, np.integer)):
        s = int(s)
        if not 0 <= s < scheme.secret_dim:
            raise ParameterError(f"secret index {s} out of range")
        return s
    digits = [int(d) for d in s]
    if len(digits) != scheme.L or any(not 0 <= d < scheme.q for d in digits):
        raise ParameterError(f"secret {s!r} is not in F^{scheme.L}")
    return int(_digits_to_index(np.array([digits]), scheme.q)[0])


def enumerate_coset(scheme: Scheme, s) -> list[tuple[FieldElement, ...]]:
    """Coefficient vectors of ``D(s)`` in lexicographic order of the free coordinates."""
    idx = _secret_index(scheme, s)
    q, k, C = scheme.q, scheme.k, scheme.C
    rows = range(idx * C, (idx + 1) * C)
    powers = [q ** (k - 1 - i) for i in range(k)]
    return [tuple(FieldElement((r // p) % q, q) for p in powers) for r in rows]


def _as_secret_vector(scheme: Scheme, psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.shape[0] != scheme.secret_dim:
        raise ParameterError(f"secret state has dimension {psi.shape[0]}, expected q^L = {scheme.secret_dim}")
    return psi


def encode(scheme: Scheme, psi: np.ndarray) -> np.ndarray:
    """Dense state vector ``V|psi>`` on the n shares (length ``q**n``)."""
    psi = _as_secret_vector(scheme, psi)
    out = np.zeros(scheme.global_dim, dtype=complex)
    out[scheme.share_index] = psi[scheme.secret_of] / math.sqrt(scheme.C)
    return out


def encode_sparse(scheme: Scheme, psi: np.ndarray) -> dict[int, complex]:
    """``{share_basis_index: amplitude}`` over the nonzero amplitudes of ``V|psi>``."""
    psi = _as_secret_vector(scheme, psi)
    amps = psi[scheme.secret_of] / math.sqrt(scheme.C)
    order = np.argsort(scheme.share_index)
    return {int(scheme.share_index[i]): complex(amps[i]) for i in order if amps[i] != 0}


def decode_sparse(scheme: Scheme, amps: Mapping[int, complex]) -> np.ndarray:
    """Dense global vector from a sparse amplitude map (inverse of :func:`encode_sparse`)."""
    out = np.zeros(scheme.global_dim, dtype=complex)
    for i, a in amps.items():
        i = int(i)
        if not 0 <= i < scheme.global_dim:
            raise ParameterError(f"share basis index {i} out of range")
        out[i] = a
    return out


def _purify(scheme: Scheme, rho_in: np.ndarray) -> np.ndarray:
    """Rows ``sqrt(w_j) <s|phi_j>`` of a purification of the input, shape (r, q**L)."""
    rho_in = np.asarray(rho_in, dtype=complex)
    if rho_in.ndim == 1:
        return _as_secret_vector(scheme, rho_in)[None, :]
    if rho_in.shape != (scheme.secret_dim, scheme.secret_dim):
        raise ParameterError(f"input state has shape {rho_in.shape}, expected q^L = {scheme.secret_dim}")
    w, u = eig_hermitian(rho_in, tol=1e-9)
    keep = w > DEFAULT_ZERO_THRESHOLD * max(float(w[0]), 0.0)
    return (u[:, keep] * np.sqrt(w[keep])).T


def _bipartite(scheme: Scheme, rho_in, X) -> tuple[np.ndarray, int]:
    """Matrix of the purified global state split as ``H_X`` x (reference ⊗ ``H_{N\\X}``)."""
    xs = scheme.subset(X)
    ys = scheme.complement(xs)
    a = _purify(scheme, rho_in)[:, scheme.secret_of] / math.sqrt(scheme.C)
    r = a.shape[0]
    dx, dy = scheme.q ** len(xs), scheme.q ** len(ys)
    xk, yk = scheme.keys(xs), scheme.keys(ys)
    psi = np.zeros((dx, r * dy), dtype=complex)
    cols = (np.arange(r)[:, None] * dy + yk[None, :]).reshape(-1)
    psi[np.tile(xk, r), cols] = a.reshape(-1)
    return psi, dx


def reduced_state(scheme: Scheme, rho_in: np.ndarray, X: Iterable[int]) -> np.ndarray:
    """``W_X(rho) = Tr_{N\\X} V rho V^*`` as a dense ``q^|X|`` square matrix.

    ``rho_in`` may be a secret state vector or density matrix.
    """
    xs = scheme.subset(X)
    if not xs:
        raise ParameterError("subset must be nonempty")
    if scheme.q ** len(xs) > MAX_DENSE_DIM:
        raise ParameterError(
            f"reduced state on {len(xs)} shares has dimension {scheme.q ** len(xs)} > {MAX_DENSE_DIM}; "
            "use reduced_spectrum / reduced_entropy"
        )
    psi, _ = _bipartite(scheme, rho_in, xs)
    return psi @ psi.conj().T


def reduced_spectrum(scheme: Scheme, rho_in: np.ndarray, X: Iterable[int]) -> np.ndarray:
    """Eigenvalues (descending) of ``W_X(rho)``, computed on whichever side of the cut is smaller."""
    xs = scheme.subset(X)
    if not xs:
        return np.array([1.0])
    psi, dx = _bipartite(scheme, rho_in, xs)
    g = psi @ psi.conj().T if dx <= psi.shape[1] else psi.conj().T @ psi
    w = np.linalg.eigvalsh(g)[::-1]
    return np.clip(w, 0.0, None)


def reduced_entropy(scheme: Scheme, rho_in: np.ndarray, X: Iterable[int]) -> float:
    """``H(W_X(rho))`` in nats."""
    return spectrum_entropy(reduced_spectrum(scheme, rho_in, X))


def isometry_matrix(scheme: Scheme) -> np.ndarray:
    """Dense ``V`` of shape ``(q**n, q**L)``."""
    if scheme.global_dim * scheme.secret_dim > 4 * 10**6:
        raise ParameterError("isometry too large to densify")
    v = np.zeros((scheme.global_dim, scheme.secret_dim), dtype=complex)
    v[scheme.share_index, scheme.secret_of] = 1 / math.sqrt(scheme.C)
    return v


def share_channel(scheme: Scheme, X: Iterable[int]) -> KrausChannel:
    """Kraus form of ``W_X``: operators ``(I_X ⊗ <a|) V`` for complement labels ``a``.

    Labels ``a`` whose operator vanishes are dropped.
    """
    xs = scheme.subset(X)
    ys = scheme.complement(xs)
    dx, dy = scheme.q ** len(xs), scheme.q ** len(ys)
    if dx * dy * scheme.secret_dim > 4 * 10**6:
        raise ParameterError("share channel too large to densify")
    ops = np.zeros((dy, dx, scheme.secret_dim), dtype=complex)
    ops[scheme.keys(ys), scheme.keys(xs), scheme.secret_of] = 1 / math.sqrt(scheme.C)
    used = np.unique(scheme.keys(ys))
    return KrausChannel(ops[used])


def kl_records(scheme: Scheme, X: Iterable[int]) -> tuple[np.ndarray, ...]:
    """Integer records ``(a, b, s, t)`` for every codeword pair with ``p_c(X) = p_d(X)``.

    ``a, b`` are complement labels of ``c, d`` and ``s, t`` their secrets, so
    ``C * <s|V^*(I_X ⊗ |a><b|)V|t>`` is the number of records equal to (a, b, s, t).
    """
    xs = scheme.subset(X)
    ys = scheme.complement(xs)
    i, j = _kernels.equal_key_pairs(scheme.keys(xs))
    yk = scheme.keys(ys)
    return yk[i], yk[j], scheme.secret_of[i], scheme.secret_of[j]


def vanishing_records(scheme: Scheme, X: Iterable[int]) -> tuple[np.ndarray, ...]:
    """Records ``(s, t, u, v)``: ``C * W_X(|s><t|)`` has count-valued entries at ``(u, v)``."""
    xs = scheme.subset(X)
    ys = scheme.complement(xs)
    i, j = _kernels.equal_key_pairs(scheme.keys(ys))
    xk = scheme.keys(xs)
    return scheme.secret_of[i], scheme.secret_of[j], xk[i], xk[j]


def gram_counts(scheme: Scheme, X: Iterable[int], a: int, b: int) -> np.ndarray:
    """Integer matrix ``G[s, t] = C * <s|V^*(I_X ⊗ |a><b|)V|t>`` (exact counting)."""
    xs = scheme.subset(X)
    dy = scheme.q ** (scheme.n - len(xs))
    if not (0 <= a < dy and 0 <= b < dy):
        raise ParameterError(f"complement labels must lie in [0, {dy})")
    ra, rb, s, t = kl_records(scheme, xs)
    sel = (ra == a) & (rb == b)
    g = np.zeros((scheme.secret_dim, scheme.secret_dim), dtype=np.int64)
    np.add.at(g, (s[sel], t[sel]), 1)
    return g
