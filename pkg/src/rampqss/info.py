"""Entropic quantities. Everything is computed in nats; use :func:`to_unit` to convert."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import ParameterError
from .qlin import DEFAULT_ZERO_THRESHOLD, partial_trace, projector

__all__ = [
    "Ensemble",
    "spectrum_entropy",
    "vn_entropy",
    "rel_entropy",
    "holevo",
    "holevo_divergence_form",
    "cond_entropy",
    "to_unit",
]

Channel = Callable[[np.ndarray], np.ndarray]


def to_unit(nats: float, base, q: int | None = None) -> float:
    """Convert nats to bits (``base=2``), nats (``"e"``) or dits (``"q"``, needs ``q``)."""
    if nats == math.inf:
        return math.inf
    if base in ("e", math.e):
        return nats
    if base in (2, "2"):
        return nats / math.log(2)
    if base == "q":
        if q is None:
            raise ParameterError("base 'q' needs the field size")
        return nats / math.log(q)
    raise ParameterError(f"unknown log base {base!r}")


def spectrum_entropy(w: np.ndarray, zero_threshold: float = DEFAULT_ZERO_THRESHOLD) -> float:
    w = np.asarray(w, dtype=float)
    if w.size == 0:
        return 0.0
    w = w[w > zero_threshold * max(float(w.max()), 0.0)]
    return float(max(-np.sum(w * np.log(w)), 0.0))


def _as_matrix(rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho)
    return projector(rho) if rho.ndim == 1 else rho


def vn_entropy(rho: np.ndarray, zero_threshold: float = DEFAULT_ZERO_THRESHOLD) -> float:
    rho = np.asarray(rho)
    if rho.ndim == 1:
        return 0.0
    return spectrum_entropy(np.linalg.eigvalsh((rho + rho.conj().T) / 2), zero_threshold)


def rel_entropy(
    rho: np.ndarray,
    sigma: np.ndarray,
    zero_threshold: float = DEFAULT_ZERO_THRESHOLD,
    support_tol: float = 1e-9,
) -> float:
    """``Tr rho (log rho - log sigma)``; ``math.inf`` when supp(rho) is not inside supp(sigma)."""
    rho = _as_matrix(rho)
    sigma = _as_matrix(sigma)
    if rho.shape != sigma.shape:
        raise ParameterError(f"dimension mismatch {rho.shape} vs {sigma.shape}")
    ws, us = np.linalg.eigh((sigma + sigma.conj().T) / 2)
    on = ws > zero_threshold * max(float(ws.max()), 0.0)
    # weight of rho outside the support of sigma
    out = us[:, ~on]
    leak = float(np.real(np.trace(out.conj().T @ rho @ out))) if out.size else 0.0
    if leak > support_tol:
        return math.inf
    wr = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
    neg_h = -spectrum_entropy(wr, zero_threshold)
    diag = np.real(np.einsum("ji,jk,ki->i", us[:, on].conj(), rho, us[:, on]))
    cross = float(np.sum(diag * np.log(ws[on])))
    return max(neg_h - cross, 0.0)


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Finite ensemble of states with probabilities. States may be vectors or density matrices."""

    weights: np.ndarray
    states: tuple

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or len(w) != len(self.states) or len(w) == 0:
            raise ParameterError("weights and states must be non-empty and equally long")
        if np.any(w <= 0) or abs(w.sum() - 1) > 1e-12:
            raise ParameterError("weights must be positive and sum to 1")
        states = tuple(np.asarray(s) for s in self.states)
        dims = {s.shape[0] for s in states}
        if len(dims) != 1:
            raise ParameterError(f"ensemble states have different dimensions {sorted(dims)}")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "states", states)

    @classmethod
    def uniform(cls, states: Sequence[np.ndarray]) -> "Ensemble":
        return cls(np.full(len(states), 1.0 / len(states)), tuple(states))

    @property
    def dim(self) -> int:
        return self.states[0].shape[0]

    def average(self) -> np.ndarray:
        return sum(w * _as_matrix(s) for w, s in zip(self.weights, self.states))


def _channel_dim(channel) -> int | None:
    return getattr(channel, "input_dim", None)


def holevo(mu: Ensemble, channel: Channel) -> float:
    """``H(E(sigma_mu)) - sum_i w_i H(E(rho_i))``."""
    din = _channel_dim(channel)
    if din is not None and din != mu.dim:
        raise ParameterError(f"channel input dim {din} != ensemble dim {mu.dim}")
    h_avg = vn_entropy(channel(mu.average()))
    h_each = sum(w * vn_entropy(channel(_as_matrix(s))) for w, s in zip(mu.weights, mu.states))
    return max(h_avg - h_each, 0.0)


def holevo_divergence_form(mu: Ensemble, channel: Channel) -> float:
    """``sum_i w_i D(E(rho_i) || E(sigma_mu))``; equal to :func:`holevo`."""
    din = _channel_dim(channel)
    if din is not None and din != mu.dim:
        raise ParameterError(f"channel input dim {din} != ensemble dim {mu.dim}")
    avg = channel(mu.average())
    return float(sum(w * rel_entropy(channel(_as_matrix(s)), avg) for w, s in zip(mu.weights, mu.states)))


def cond_entropy(rho: np.ndarray, dims: Sequence[int], x: Iterable[int], y: Iterable[int]) -> float:
    """``H(XY) - H(Y)`` for disjoint factor sets; negative values signal entanglement."""
    x = set(int(i) for i in x)
    y = set(int(i) for i in y)
    if x & y:
        raise ParameterError(f"factor sets overlap: {sorted(x & y)}")
    h_xy = vn_entropy(partial_trace(rho, dims, x | y)) if x | y else 0.0
    h_y = vn_entropy(partial_trace(rho, dims, y)) if y else 0.0
    return h_xy - h_y
