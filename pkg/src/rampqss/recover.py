"""Recovering secrets: the permutation decoder, the Petz map, tamper checks."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .access import is_qualified
from .errors import ParameterError, SingularMatrixError
from .gf import FieldMatrix, invert_linear_map, rank, vandermonde
from .info import rel_entropy
from .qlin import KrausChannel, op_function, partial_trace, projector, trace_distance
from .scheme import Scheme, encode

__all__ = [
    "KrausChannel",
    "PermutationDecoder",
    "build_decoder",
    "decoder_for",
    "decode",
    "recover_from",
    "petz_map",
    "DivergenceReport",
    "check_divergence_equality",
    "TamperReport",
    "tamper_check",
]


@dataclass(frozen=True, eq=False)
class PermutationDecoder:
    """Basis-label permutation on the k shares of ``subset``.

    ``perm[i]`` is the output label for input label ``i``, where labels are
    base-q numbers over the shares in ascending order. After permuting, the
    first ``L`` digits hold the secret and the remaining ``k - L`` are junk.
    """

    subset: tuple[int, ...]
    perm: np.ndarray
    q: int
    k: int
    L: int
    transform: FieldMatrix

    @property
    def inverse(self) -> np.ndarray:
        return np.argsort(self.perm)

    def decode_label(self, label: int) -> tuple[int, int]:
        """Exact integer path: (secret index, junk index) for a basis label on X."""
        out = int(self.perm[label])
        junk = self.q ** (self.k - self.L)
        return out // junk, out % junk

    def to_dict(self) -> dict:
        return {
            "subset": [i + 1 for i in self.subset],
            "q": self.q,
            "k": self.k,
            "L": self.L,
            "permutation": self.perm.tolist(),
        }


def build_decoder(scheme: Scheme, X: Iterable[int]) -> PermutationDecoder:
    """Decoder for a k-subset.

    Step 1 maps the share values ``p_c(X)`` back to the coefficients ``c``
    via ``M_{k-1}^0(X)^{-1}``; step 2 multiplies by the block matrix
    ``[[I, M_{L-1}^0(Y)], [0, M_{k-1}^L(Y)]]`` with ``Y = N \\ X``, turning
    ``c`` into ``(s, p_c(Y))``. Both are invertible linear maps over F^k, so
    their product permutes computational basis labels.
    """
    xs = scheme.subset(X)
    q, k, L = scheme.q, scheme.k, scheme.L
    if len(xs) != k:
        raise ParameterError(f"decoder needs exactly k = {k} shares, got {len(xs)}")
    ys = scheme.complement(xs)
    pts = scheme.params.eval_points
    px = [pts[i] for i in xs]
    py = [pts[i] for i in ys]
    step1 = invert_linear_map(vandermonde(px, 0, k - 1, q, degree=k - 1))
    block = np.zeros((k, k), dtype=np.int64)
    block[:L, :L] = np.eye(L, dtype=np.int64)
    if k > L:
        block[:L, L:] = vandermonde(py, 0, L - 1, q, degree=k - 1).entries
        block[L:, L:] = vandermonde(py, L, k - 1, q, degree=k - 1).entries
    step2 = FieldMatrix(block, q)
    t = step1 @ step2
    labels = np.arange(q**k, dtype=np.int64)
    powers = q ** np.arange(k - 1, -1, -1, dtype=np.int64)
    digits = (labels[:, None] // powers[None, :]) % q
    perm = ((digits @ t.entries) % q) @ powers
    if np.unique(perm).size != q**k:
        raise SingularMatrixError(rank(step2), k)
    perm.setflags(write=False)
    return PermutationDecoder(xs, perm, q, k, L, t)


def decoder_for(scheme: Scheme, X: Iterable[int]) -> PermutationDecoder:
    """Decoder for a qualified set of any size, using its lexicographically smallest k-subset."""
    xs = scheme.subset(X)
    if len(xs) < scheme.k:
        raise ParameterError(f"need at least k = {scheme.k} shares, got {len(xs)}")
    return build_decoder(scheme, xs[: scheme.k])


def decode(decoder: PermutationDecoder, rho_x: np.ndarray) -> np.ndarray:
    """Permute the basis of ``rho_x`` (state on the decoder's k shares) and trace out the junk."""
    q, k, L = decoder.q, decoder.k, decoder.L
    d = q**k
    rho_x = np.asarray(rho_x)
    if rho_x.ndim == 1:
        rho_x = projector(rho_x)
    if rho_x.shape != (d, d):
        raise ParameterError(f"expected a state on {k} shares (dim {d}), got {rho_x.shape}")
    inv = decoder.inverse
    permuted = rho_x[np.ix_(inv, inv)]
    s, j = q**L, q ** (k - L)
    return np.einsum("ajbj->ab", permuted.reshape(s, j, s, j))


def recover_from(scheme: Scheme, X: Iterable[int], rho_x: np.ndarray) -> np.ndarray:
    """Decode a state on the shares ``X`` (any qualified size >= k)."""
    xs = scheme.subset(X)
    dec = decoder_for(scheme, xs)
    if len(xs) > scheme.k:
        rho_x = partial_trace(rho_x, (scheme.q,) * len(xs), range(scheme.k))
    return decode(dec, rho_x)


def petz_map(channel: KrausChannel, sigma: np.ndarray, zero_threshold: float = 1e-10) -> KrausChannel:
    """Petz reverse operation ``tau -> sigma^1/2 E^*(E(sigma)^-1/2 tau E(sigma)^-1/2) sigma^1/2``.

    Returned in Kraus form ``R_a = sigma^1/2 E_a^* E(sigma)^-1/2``; inverse
    square roots are taken on the support of ``E(sigma)``, so the map is
    trace preserving only there.
    """
    sigma = np.asarray(sigma)
    if sigma.shape != (channel.input_dim, channel.input_dim):
        raise ParameterError(f"sigma must be {channel.input_dim}-dimensional")
    s_half = op_function(sigma, np.sqrt, zero_threshold)
    e_inv_half = op_function(channel(sigma), lambda w: w**-0.5, zero_threshold)
    ops = np.einsum("ij,akj,kl->ail", s_half, channel.ops.conj(), e_inv_half, optimize=True)
    return KrausChannel(ops, check=False)


@dataclass(frozen=True)
class DivergenceReport:
    divergence_in: float
    divergence_out: float
    gap: float
    recovery_error: float
    tol: float

    @property
    def indeterminate(self) -> bool:
        return math.isinf(self.divergence_in) or math.isinf(self.divergence_out)

    @property
    def divergence_preserved(self) -> bool:
        return not self.indeterminate and self.gap <= self.tol

    @property
    def recovered(self) -> bool:
        return self.recovery_error <= self.tol

    @property
    def agree(self) -> bool:
        return self.indeterminate or self.divergence_preserved == self.recovered


def check_divergence_equality(
    rho: np.ndarray, sigma: np.ndarray, channel: KrausChannel, tol: float = 1e-8
) -> DivergenceReport:
    """Compare the relative-entropy gap under ``channel`` with the Petz recovery error for ``rho``."""
    rho = np.asarray(rho)
    if rho.ndim == 1:
        rho = projector(rho)
    if rho.shape != np.shape(sigma) or rho.shape[0] != channel.input_dim:
        raise ParameterError("rho, sigma and channel input must share one dimension")
    d_in = rel_entropy(rho, sigma)
    e_rho = channel(rho)
    d_out = rel_entropy(e_rho, channel(sigma))
    gap = d_in - d_out if not (math.isinf(d_in) or math.isinf(d_out)) else math.nan
    rec = petz_map(channel, sigma)
    err = trace_distance(rec(e_rho), rho)
    return DivergenceReport(d_in, d_out, gap, err, tol)


@dataclass(frozen=True)
class TamperReport:
    recovery_distance: float
    product_distance: float


def tamper_check(
    scheme: Scheme,
    X: Iterable[int],
    adversary: KrausChannel,
    psi: np.ndarray,
) -> TamperReport:
    """Let the complement of ``X`` apply ``adversary`` to its shares, then decode from ``X``.

    ``recovery_distance`` is the trace distance of the decoded secret to
    ``psi``; ``product_distance`` compares the joint state of the complement
    and the decoded secret with ``adversary(rho_0) ⊗ |psi><psi|``.
    """
    xs = scheme.subset(X)
    if not is_qualified(scheme, xs):
        raise ParameterError(f"subset {xs} is not qualified")
    ys = scheme.complement(xs)
    q, k, L = scheme.q, scheme.k, scheme.L
    dy = q ** len(ys)
    if adversary.input_dim != dy:
        raise ParameterError(f"adversary acts on dim {adversary.input_dim}, complement has dim {dy}")
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    dec = decoder_for(scheme, xs)
    used = list(dec.subset)
    rest = [i for i in xs if i not in used]
    g = encode(scheme, psi).reshape(scheme.share_dims).transpose(list(ys) + used + rest)
    g = g.reshape(dy, q**k, -1)
    rho_0 = np.einsum("yxr,zxr->yz", g, g.conj())
    # adversary on Y, decoder permutation on the k used shares of X
    m = adversary.ops.shape[0]
    branches = (adversary.ops.reshape(m * dy, dy) @ g.reshape(dy, -1)).reshape(m, dy, q**k, -1)
    branches = branches[:, :, dec.inverse, :]
    s = q**L
    # rows (y, secret); columns (Kraus index, junk, rest of X) are traced out
    b = branches.reshape(m, dy, s, -1).transpose(1, 2, 0, 3).reshape(dy * s, -1)
    joint = b @ b.conj().T
    secret = np.einsum("ysyu->su", joint.reshape(dy, s, dy, s))
    target = projector(psi)
    return TamperReport(
        recovery_distance=trace_distance(secret, target),
        product_distance=trace_distance(joint, np.kron(adversary(rho_0), target)),
    )
