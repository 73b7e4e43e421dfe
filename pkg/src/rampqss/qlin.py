"""Dense complex linear algebra on tensor products of qudit factors.

States and operators are plain numpy arrays. Multi-factor objects carry a
separate ``dims`` sequence; the index convention is factor-major with the
leftmost factor varying slowest (``np.kron`` order) everywhere in the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import ParameterError

__all__ = [
    "DEFAULT_ZERO_THRESHOLD",
    "KrausChannel",
    "tensor",
    "basis_state",
    "projector",
    "partial_trace",
    "eig_hermitian",
    "op_function",
    "trace_distance",
    "fidelity",
    "check_density",
    "random_pure_state",
    "random_unitary",
    "random_density",
]

DEFAULT_ZERO_THRESHOLD = 1e-10


def tensor(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product, first argument most significant."""
    if not ops:
        raise ParameterError("tensor() needs at least one operand")
    out = np.asarray(ops[0])
    for op in ops[1:]:
        out = np.kron(out, np.asarray(op))
    return out


def basis_state(index: int, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def projector(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi).reshape(-1)
    return np.outer(psi, psi.conj())


def _check_dims(dims: Sequence[int], size: int) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if any(d < 1 for d in dims) or int(np.prod(dims, dtype=np.int64)) != size:
        raise ParameterError(f"factor dims {dims} do not multiply to {size}")
    return dims


def partial_trace(rho: np.ndarray, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Reduced operator on the factors in ``keep`` (0-based), factor order preserved.

    ``rho`` may also be a state vector, in which case the reduced density
    matrix of the pure state is returned.
    """
    rho = np.asarray(rho)
    keep = sorted(set(int(i) for i in keep))
    nf = len(dims)
    if any(i < 0 or i >= nf for i in keep):
        raise ParameterError(f"factor index out of range in {keep} for {nf} factors")
    if rho.ndim == 1:
        dims = _check_dims(dims, rho.shape[0])
        drop = [i for i in range(nf) if i not in keep]
        psi = rho.reshape(dims).transpose(keep + drop)
        dk = int(np.prod([dims[i] for i in keep], dtype=np.int64))
        psi = psi.reshape(dk, -1)
        return psi @ psi.conj().T
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ParameterError(f"expected a square matrix, got shape {rho.shape}")
    dims = _check_dims(dims, rho.shape[0])
    t = rho.reshape(dims + dims)
    # trace out from the highest factor down so remaining axis numbers stay valid
    for i in sorted((i for i in range(nf) if i not in keep), reverse=True):
        cur = t.ndim // 2
        t = np.trace(t, axis1=i, axis2=i + cur)
    dk = int(np.prod([dims[i] for i in keep], dtype=np.int64))
    return t.reshape(dk, dk)


def _hermitian_defect(h: np.ndarray) -> float:
    return float(np.max(np.abs(h - h.conj().T))) if h.size else 0.0


def eig_hermitian(h: np.ndarray, tol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and unitary eigenvector matrix of a Hermitian matrix."""
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ParameterError(f"expected a square matrix, got shape {h.shape}")
    defect = _hermitian_defect(h)
    if defect > tol:
        raise ParameterError(f"matrix is not Hermitian (max |H - H*| = {defect:.3e})")
    w, u = np.linalg.eigh((h + h.conj().T) / 2)
    return w[::-1].copy(), u[:, ::-1].copy()


def op_function(
    rho: np.ndarray,
    f: Callable[[np.ndarray], np.ndarray],
    zero_threshold: float = DEFAULT_ZERO_THRESHOLD,
) -> np.ndarray:
    """Apply ``f`` to the spectrum of a PSD matrix, mapping (near-)zero eigenvalues to 0.

    Eigenvalues at or below ``zero_threshold * max_eigenvalue`` are treated as
    exact zeros, so ``f = x**-0.5`` gives the pseudo-inverse square root on
    the support.
    """
    w, u = eig_hermitian(rho)
    if w.size and w[-1] < -1e-8:
        raise ParameterError(f"matrix is not positive semidefinite (eigenvalue {w[-1]:.3e})")
    cut = zero_threshold * max(float(w[0]), 0.0) if w.size else 0.0
    fw = np.zeros(w.shape, dtype=complex)
    on = w > cut
    fw[on] = f(w[on])
    return (u * fw) @ u.conj().T


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    rho = np.asarray(rho)
    sigma = np.asarray(sigma)
    if rho.shape != sigma.shape:
        raise ParameterError(f"dimension mismatch {rho.shape} vs {sigma.shape}")
    d = rho - sigma
    w = np.linalg.eigvalsh((d + d.conj().T) / 2)
    return 0.5 * float(np.sum(np.abs(w)))


def fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Uhlmann fidelity ``(Tr |sqrt(rho) sqrt(sigma)|)**2``; vectors are taken as pure states."""
    rho = np.asarray(rho)
    sigma = np.asarray(sigma)
    if rho.ndim == 1 and sigma.ndim == 1:
        return float(abs(np.vdot(rho, sigma)) ** 2)
    if rho.ndim == 1:
        rho, sigma = sigma, rho
    if sigma.ndim == 1:
        return float(np.real(np.vdot(sigma, rho @ sigma)))
    sr = op_function(rho, np.sqrt, 0.0)
    w = np.linalg.eigvalsh(sr @ sigma @ sr)
    return float(np.sum(np.sqrt(np.clip(w, 0, None))) ** 2)


def check_density(rho: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Validate Hermiticity, unit trace and positivity; returns ``rho`` unchanged."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ParameterError(f"expected a square matrix, got shape {rho.shape}")
    defect = _hermitian_defect(rho)
    if defect > tol:
        raise ParameterError(f"density matrix is not Hermitian ({defect:.3e})")
    tr = complex(np.trace(rho))
    if abs(tr - 1) > tol:
        raise ParameterError(f"density matrix has trace {tr}")
    lo = float(np.linalg.eigvalsh((rho + rho.conj().T) / 2)[0])
    if lo < -tol:
        raise ParameterError(f"density matrix has negative eigenvalue {lo:.3e}")
    return rho


def random_pure_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary (QR of a Ginibre matrix with phase correction)."""
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    qm, r = np.linalg.qr(z)
    d = np.diag(r)
    return qm * (d / np.abs(d))


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Quantum operation ``rho -> sum_a E_a rho E_a^*``.

    ``ops`` has shape ``(m, d_out, d_in)``. Trace preservation is checked at
    construction unless ``check=False`` (used for maps that are only trace
    preserving on a subspace, such as a Petz map).
    """

    ops: np.ndarray
    check: bool = True

    def __post_init__(self):
        ops = np.asarray(self.ops, dtype=complex)
        if ops.ndim == 2:
            ops = ops[None]
        if ops.ndim != 3:
            raise ParameterError(f"Kraus operators must be a (m, d_out, d_in) array, got {ops.shape}")
        object.__setattr__(self, "ops", ops)
        if self.check:
            err = self.tp_defect()
            if err > 1e-10:
                raise ParameterError(f"Kraus operators are not trace preserving (defect {err:.3e})")

    @classmethod
    def from_list(cls, ops: Sequence[np.ndarray], check: bool = True) -> "KrausChannel":
        return cls(np.stack([np.asarray(o, dtype=complex) for o in ops]), check)

    @classmethod
    def identity(cls, dim: int) -> "KrausChannel":
        return cls(np.eye(dim, dtype=complex)[None])

    @classmethod
    def unitary(cls, u: np.ndarray) -> "KrausChannel":
        return cls(np.asarray(u, dtype=complex)[None])

    @classmethod
    def replacement(cls, d_in: int, state: np.ndarray) -> "KrausChannel":
        """Constant channel ``rho -> Tr(rho) * state``."""
        w, u = eig_hermitian(state)
        ops = [np.sqrt(max(wi, 0.0)) * np.outer(u[:, i], basis_state(j, d_in))
               for i, wi in enumerate(w) if wi > 1e-15 for j in range(d_in)]
        return cls.from_list(ops)

    @classmethod
    def dephasing(cls, dim: int) -> "KrausChannel":
        """Complete dephasing in the computational basis."""
        return cls(np.stack([np.diag(basis_state(i, dim)) for i in range(dim)]))

    @property
    def input_dim(self) -> int:
        return self.ops.shape[2]

    @property
    def output_dim(self) -> int:
        return self.ops.shape[1]

    def tp_defect(self) -> float:
        s = np.einsum("aji,ajk->ik", self.ops.conj(), self.ops)
        return float(np.max(np.abs(s - np.eye(self.input_dim))))

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        rho = np.asarray(rho)
        if rho.ndim == 1:
            rho = projector(rho)
        if rho.shape != (self.input_dim, self.input_dim):
            raise ParameterError(f"channel expects dim {self.input_dim}, got {rho.shape}")
        return np.einsum("aij,jk,alk->il", self.ops, rho, self.ops.conj(), optimize=True)

    def dual(self, y: np.ndarray) -> np.ndarray:
        """Heisenberg-picture map ``Y -> sum_a E_a^* Y E_a``."""
        y = np.asarray(y)
        if y.shape != (self.output_dim, self.output_dim):
            raise ParameterError(f"dual expects dim {self.output_dim}, got {y.shape}")
        return np.einsum("aji,jk,akl->il", self.ops.conj(), y, self.ops, optimize=True)

    def compose(self, first: "KrausChannel") -> "KrausChannel":
        """``self . first`` (apply ``first``, then ``self``)."""
        if first.output_dim != self.input_dim:
            raise ParameterError("dimension mismatch in composition")
        ops = np.einsum("aij,bjk->abik", self.ops, first.ops).reshape(-1, self.output_dim, first.input_dim)
        return KrausChannel(ops, check=self.check and first.check)

    def tensor(self, other: "KrausChannel") -> "KrausChannel":
        ops = np.stack([np.kron(a, b) for a in self.ops for b in other.ops])
        return KrausChannel(ops, check=self.check and other.check)
