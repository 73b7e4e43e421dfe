"""Exact access-structure classification.

A subset is classified with integer arithmetic only:

* qualified: ``V^*(I_X ⊗ |a><b|)V`` is a multiple of the identity for every pair
  of complement labels (Knill-Laflamme);
* forbidden: ``W_X(|s><t|) = delta_st * rho_0`` on the operator basis of the
  secret space (vanishing channel);
* intermediate otherwise.

Entropy and Holevo values attached to reports are floating point and are
informational only; they never feed back into the classification.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from . import _kernels
from .scheme import Scheme, kl_records, reduced_entropy, vanishing_records

__all__ = [
    "AccessClass",
    "AccessReport",
    "qualified_witness",
    "vanishing_witness",
    "is_qualified",
    "is_vanishing",
    "classify",
    "threshold_class",
    "access_structure",
    "basis_holevo",
    "is_significant",
    "all_subsets",
    "check_threshold_pattern",
    "check_monotonicity",
    "check_duality",
]


class AccessClass(enum.IntEnum):
    FORBIDDEN = 0
    INTERMEDIATE = 1
    QUALIFIED = 2

    @property
    def label(self) -> str:
        return self.name.lower()


def qualified_witness(scheme: Scheme, X: Iterable[int]) -> tuple[int, int] | None:
    """``None`` if X is qualified, else the smallest complement-label pair (a, b)
    whose Gram count matrix is not a scalar multiple of the identity."""
    xs = scheme.subset(X)
    S = scheme.secret_dim
    dy = scheme.q ** (scheme.n - len(xs))
    a, b, s, t = kl_records(scheme, xs)
    keys = ((a * dy + b) * S + s) * S + t
    u, cnt = _kernels.count_unique(keys)
    ab = u // (S * S)
    st = u % (S * S)
    off = (st // S) != (st % S)
    groups, start, size = np.unique(ab, return_index=True, return_counts=True)
    bad = (size != S)
    bad |= np.maximum.reduceat(off, start).astype(bool)
    bad |= np.minimum.reduceat(cnt, start) != np.maximum.reduceat(cnt, start)
    if not bad.any():
        return None
    g = int(groups[np.argmax(bad)])
    return g // dy, g % dy


def vanishing_witness(scheme: Scheme, X: Iterable[int]) -> tuple[int, int] | None:
    """``None`` if ``W_X`` is constant on all secret states, else a pair of secret
    basis indices (s, t): either ``W_X(|s><t|) != 0`` for ``s != t``, or
    ``W_X(|s><s|) != W_X(|t><t|)``."""
    xs = scheme.subset(X)
    if not xs:
        return None
    S = scheme.secret_dim
    dx = scheme.q ** len(xs)
    s, t, u, v = vanishing_records(scheme, xs)
    off = s != t
    if off.any():
        # counts are positive, so any off-diagonal record is a nonzero entry
        i = np.lexsort((t[off], s[off]))[0]
        return int(s[off][i]), int(t[off][i])
    keys = (s * dx + u) * dx + v
    uk, cnt = _kernels.count_unique(keys)
    sec = uk // (dx * dx)
    per = np.bincount(sec, minlength=S)
    if np.any(per != per[0]):
        return 0, int(np.argmax(per != per[0]))
    img = (uk % (dx * dx)).reshape(S, -1)
    cnt = cnt.reshape(S, -1)
    diff = np.any(img != img[0], axis=1) | np.any(cnt != cnt[0], axis=1)
    if diff.any():
        return 0, int(np.argmax(diff))
    return None


def is_qualified(scheme: Scheme, X: Iterable[int]) -> bool:
    return qualified_witness(scheme, X) is None


def is_vanishing(scheme: Scheme, X: Iterable[int]) -> bool:
    return vanishing_witness(scheme, X) is None


def classify(scheme: Scheme, X: Iterable[int]) -> AccessClass:
    xs = scheme.subset(X)
    if not xs:
        return AccessClass.FORBIDDEN
    if is_qualified(scheme, xs):
        return AccessClass.QUALIFIED
    if is_vanishing(scheme, xs):
        return AccessClass.FORBIDDEN
    return AccessClass.INTERMEDIATE


def threshold_class(size: int, k: int, L: int) -> AccessClass:
    """Class a (k, L, n)-threshold ramp scheme must assign to a subset of this size."""
    if size <= k - L:
        return AccessClass.FORBIDDEN
    if size >= k:
        return AccessClass.QUALIFIED
    return AccessClass.INTERMEDIATE


def basis_holevo(scheme: Scheme, X: Iterable[int]) -> tuple[float, float]:
    """Holevo information of ``W_X`` for the uniform ensemble of secret basis states,
    and ``H(W_X(I/q^L))``; both in nats."""
    xs = scheme.subset(X)
    if not xs:
        return 0.0, 0.0
    S = scheme.secret_dim
    h_avg = reduced_entropy(scheme, np.eye(S) / S, xs)
    h_each = 0.0
    for s in range(S):
        e = np.zeros(S, dtype=complex)
        e[s] = 1.0
        h_each += reduced_entropy(scheme, e, xs) / S
    return max(h_avg - h_each, 0.0), h_avg


@dataclass(frozen=True)
class AccessReport:
    subset: tuple[int, ...]
    cls: AccessClass
    holevo_dits: float = math.nan
    entropy_dits: float = math.nan
    witness: dict = field(default_factory=dict)

    def to_record(self) -> dict:
        """Serializable record; share labels are 1-based."""
        rec = {
            "subset": [i + 1 for i in self.subset],
            "class": self.cls.label,
            "holevo_dits": self.holevo_dits,
            "entropy_dits": self.entropy_dits,
        }
        if self.witness:
            rec["witness"] = self.witness
        return rec


def all_subsets(n: int, include_empty: bool = False) -> list[tuple[int, ...]]:
    """Subsets ordered by size, then lexicographically."""
    start = 0 if include_empty else 1
    return [c for m in range(start, n + 1) for c in itertools.combinations(range(n), m)]


def _report(scheme: Scheme, xs: tuple[int, ...], with_info: bool) -> AccessReport:
    witness: dict = {}
    kl = qualified_witness(scheme, xs)
    if kl is None:
        cls = AccessClass.QUALIFIED
    else:
        witness["gram_pair"] = list(kl)
        van = vanishing_witness(scheme, xs)
        if van is None:
            cls = AccessClass.FORBIDDEN
        else:
            cls = AccessClass.INTERMEDIATE
            witness["distinguishing_pair"] = list(van)
    hol = ent = math.nan
    if with_info:
        lq = math.log(scheme.q)
        h, e = basis_holevo(scheme, xs)
        hol, ent = h / lq, e / lq
    return AccessReport(xs, cls, hol, ent, witness)


def access_structure(scheme: Scheme, with_info: bool = True) -> dict[tuple[int, ...], AccessReport]:
    """Reports for all nonempty subsets, keyed by 0-based sorted tuple."""
    return {xs: _report(scheme, xs, with_info) for xs in all_subsets(scheme.n)}


def _class_of(access: Mapping[tuple, AccessReport], xs: tuple) -> AccessClass:
    if not xs:
        return AccessClass.FORBIDDEN
    return access[xs].cls


def is_significant(access: Mapping[tuple, AccessReport], X: Iterable[int]) -> bool:
    """True iff some forbidden Y (the empty set included) makes X ∪ Y qualified."""
    xs = tuple(sorted(set(X)))
    forbidden = [()] + [y for y, r in access.items() if r.cls is AccessClass.FORBIDDEN]
    for y in forbidden:
        union = tuple(sorted(set(xs) | set(y)))
        if union and _class_of(access, union) is AccessClass.QUALIFIED:
            return True
    return False


def check_threshold_pattern(access: Mapping[tuple, AccessReport], k: int, L: int) -> list[tuple]:
    """Subsets whose class differs from the threshold pattern, as (subset, got, expected)."""
    return [
        (xs, r.cls, threshold_class(len(xs), k, L))
        for xs, r in access.items()
        if r.cls is not threshold_class(len(xs), k, L)
    ]


def check_monotonicity(access: Mapping[tuple, AccessReport], n: int) -> list[tuple]:
    """Pairs X ⊆ Y with class(X) > class(Y)."""
    subs = all_subsets(n, include_empty=True)
    bad = []
    for xs in subs:
        cx = _class_of(access, xs)
        for ys in subs:
            if len(ys) >= len(xs) and set(xs) <= set(ys) and cx > _class_of(access, ys):
                bad.append((xs, ys))
    return bad


def check_duality(access: Mapping[tuple, AccessReport], n: int) -> list[tuple]:
    """Subsets violating qualified(X) <=> forbidden(N \\ X)."""
    bad = []
    for xs in all_subsets(n, include_empty=True):
        comp = tuple(i for i in range(n) if i not in xs)
        q = _class_of(access, xs) is AccessClass.QUALIFIED
        f = _class_of(access, comp) is AccessClass.FORBIDDEN
        if q != f:
            bad.append(xs)
    return bad
