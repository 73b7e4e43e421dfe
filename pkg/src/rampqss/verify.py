"""Property checks run by ``rampqss verify``.

Each check returns a :class:`CheckResult` carrying the measured value, the
bound it is compared against, and the verdict. Randomised checks draw from a
Philox (counter-based) generator keyed by ``(seed, check name)``, so results
are reproducible and independent of the order checks run in.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .access import (
    AccessClass,
    AccessReport,
    access_structure,
    all_subsets,
    check_duality,
    check_monotonicity,
    check_threshold_pattern,
    is_significant,
)
from .info import vn_entropy
from .qlin import (
    KrausChannel,
    fidelity,
    projector,
    random_density,
    random_pure_state,
    random_unitary,
    trace_distance,
)
from .recover import check_divergence_equality, decoder_for, petz_map, recover_from, tamper_check
from .scheme import Scheme, reduced_entropy, reduced_state, share_channel

# subsets whose Kraus form is densified for Petz / divergence checks
PETZ_MAX_DIM = 1024


def rng_for(seed: int, name: str) -> np.random.Generator:
    key = zlib.crc32(name.encode())
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), key])))


@dataclass(frozen=True)
class CheckResult:
    name: str
    measured: float
    bound: float
    relation: str
    passed: bool
    detail: str = ""

    def to_record(self) -> dict:
        rec = {
            "check": self.name,
            "measured": float(self.measured),
            "relation": self.relation,
            "bound": float(self.bound),
            "pass": bool(self.passed),
        }
        if self.detail:
            rec["detail"] = self.detail
        return rec


def _le(name, measured, bound, detail=""):
    return CheckResult(name, measured, bound, "<=", bool(measured <= bound), detail)


def _ge(name, measured, bound, detail=""):
    return CheckResult(name, measured, bound, ">=", bool(measured >= bound), detail)


def _gt(name, measured, bound, detail=""):
    return CheckResult(name, measured, bound, ">", bool(measured > bound), detail)


def _subsets_of(access, cls):
    return [xs for xs, r in access.items() if r.cls is cls]


def check_structure(scheme: Scheme, access: Mapping[tuple, AccessReport]) -> list[CheckResult]:
    n, k, L = scheme.n, scheme.k, scheme.L
    bad = check_threshold_pattern(access, k, L)
    mono = check_monotonicity(access, n)
    dual = check_duality(access, n)
    fmt = lambda xs: "{" + ",".join(str(i + 1) for i in xs) + "}"
    return [
        _le("threshold_pattern", len(bad), 0, "; ".join(f"{fmt(x)}:{g.label}!={e.label}" for x, g, e in bad[:5])),
        _le("monotonicity", len(mono), 0, "; ".join(f"{fmt(a)}<{fmt(b)}" for a, b in mono[:5])),
        _le("no_cloning_duality", len(dual), 0, "; ".join(fmt(x) for x in dual[:5])),
    ]


def check_holevo_values(scheme: Scheme, access: Mapping[tuple, AccessReport], tol: float = 1e-8) -> list[CheckResult]:
    """Closed-form Holevo values (dits) for the uniform basis ensemble, per class."""
    k, L = scheme.k, scheme.L
    dev_int = dev_q = dev_f = dev_basis = 0.0
    lq = math.log(scheme.q)
    for xs, r in access.items():
        if r.cls is AccessClass.INTERMEDIATE:
            l = k - len(xs)
            dev_int = max(dev_int, abs(r.holevo_dits - (L - l)))
            for s in range(scheme.secret_dim):
                e = np.zeros(scheme.secret_dim)
                e[s] = 1.0
                dev_basis = max(dev_basis, abs(reduced_entropy(scheme, e, xs) / lq - (k - L)))
        elif r.cls is AccessClass.QUALIFIED:
            dev_q = max(dev_q, abs(r.holevo_dits - L))
        else:
            dev_f = max(dev_f, abs(r.holevo_dits))
    return [
        _le("holevo_intermediate", dev_int, tol, "max |I - (L - l)| dits"),
        _le("entropy_basis_intermediate", dev_basis, tol, "max |H(W_X(|s><s|)) - (k - L)| dits"),
        _le("holevo_qualified", dev_q, tol, "max |I - L| dits"),
        _le("holevo_forbidden", dev_f, tol, "max I dits"),
    ]


def check_decoder(scheme: Scheme, access, n_states: int = 20, seed: int = 0) -> list[CheckResult]:
    rng = rng_for(seed, "decoder")
    worst = 1.0
    mismatches = 0
    for xs in _subsets_of(access, AccessClass.QUALIFIED):
        dec = decoder_for(scheme, xs)
        labels = scheme.keys(dec.subset)
        got = np.array([dec.decode_label(int(lab))[0] for lab in labels])
        mismatches += int(np.count_nonzero(got != scheme.secret_of))
        for _ in range(n_states):
            psi = random_pure_state(scheme.secret_dim, rng)
            out = recover_from(scheme, dec.subset, reduced_state(scheme, psi, dec.subset))
            worst = min(worst, fidelity(out, psi))
    return [
        _ge("decoder_roundtrip_fidelity", worst, 1 - 1e-9),
        _le("decoder_basis_label_mismatches", mismatches, 0),
    ]


def _petz_subsets(scheme, access, cls):
    return [xs for xs in _subsets_of(access, cls) if scheme.q ** len(xs) <= PETZ_MAX_DIM]


def check_petz(scheme: Scheme, access, n_states: int = 20, seed: int = 0) -> list[CheckResult]:
    rng = rng_for(seed, "petz")
    S = scheme.secret_dim
    sigma = np.eye(S) / S
    worst = 0.0
    for xs in _petz_subsets(scheme, access, AccessClass.QUALIFIED):
        ch = share_channel(scheme, xs)
        r = petz_map(ch, sigma)
        for _ in range(n_states):
            rho = projector(random_pure_state(S, rng))
            worst = max(worst, trace_distance(r(ch(rho)), rho))
    out = [_le("petz_recovery_qualified", worst, 1e-8)]
    inter = _petz_subsets(scheme, access, AccessClass.INTERMEDIATE)
    if inter:
        best = 0.0
        for xs in inter:
            ch = share_channel(scheme, xs)
            r = petz_map(ch, sigma)
            for s in range(S):
                rho = np.zeros((S, S))
                rho[s, s] = 1.0
                best = max(best, trace_distance(r(ch(rho)), rho))
        out.append(_gt("petz_irreversible_intermediate", best, 0.01))
    return out


def divergence_triples(scheme: Scheme, n_triples: int, seed: int):
    """Seeded (rho, sigma, channel, subset) triples over share channels of the scheme."""
    rng = rng_for(seed, "divergence")
    S = scheme.secret_dim
    subsets = [xs for xs in all_subsets(scheme.n) if scheme.q ** len(xs) <= PETZ_MAX_DIM]
    channels = {}
    for _ in range(n_triples):
        xs = subsets[int(rng.integers(len(subsets)))]
        if xs not in channels:
            channels[xs] = share_channel(scheme, xs)
        if rng.random() < 0.5:
            rho = projector(random_pure_state(S, rng))
        else:
            rho = random_density(S, rng)
        sigma = random_density(S, rng) if rng.random() < 0.7 else np.eye(S) / S
        yield rho, sigma, channels[xs], xs


def check_divergence(scheme: Scheme, n_triples: int = 200, seed: int = 0, tol: float = 1e-8) -> list[CheckResult]:
    disagree = 0
    min_gap = math.inf
    for rho, sigma, ch, _ in divergence_triples(scheme, n_triples, seed):
        rep = check_divergence_equality(rho, sigma, ch, tol)
        if not rep.indeterminate:
            min_gap = min(min_gap, rep.gap)
        disagree += 0 if rep.agree else 1
    return [
        _le("divergence_recovery_disagreements", disagree, 0, f"{n_triples} triples"),
        _ge("divergence_monotonicity_min_gap", min_gap, -tol),
    ]


def random_ensemble_state(dim: int, rng: np.random.Generator, extra: int = 2) -> np.ndarray:
    """sigma_mu of a random finite pure-state ensemble that spans the space."""
    m = dim + extra
    w = rng.dirichlet(np.ones(m))
    return sum(wi * projector(random_pure_state(dim, rng)) for wi in w)


def check_efficiency(scheme: Scheme, access, n_ensembles: int = 50, seed: int = 0, tol: float = 1e-8) -> list[CheckResult]:
    rng = rng_for(seed, "efficiency")
    S = scheme.secret_dim
    lq = math.log(scheme.q)
    significant = [xs for xs in access if is_significant(access, xs)]
    worst = -math.inf
    for _ in range(n_ensembles):
        sigma = random_ensemble_state(S, rng)
        h = vn_entropy(sigma)
        for xs in significant:
            worst = max(worst, h - reduced_entropy(scheme, sigma, xs))
    uniform = np.eye(S) / S
    h_sec = vn_entropy(uniform)
    per_share = [reduced_entropy(scheme, uniform, (i,)) for i in range(scheme.n)]
    avg = sum(per_share) / scheme.n
    out = [
        _le("significant_set_entropy_bound", worst, tol, f"{len(significant)} significant subsets x {n_ensembles} ensembles"),
        _le("share_entropy_optimality", max(abs(h_sec / scheme.L - avg), abs(avg - lq)), tol),
    ]
    if scheme.L == 1:
        # H(sigma) <= H(W_i(sigma)) <= log dim H_i
        sig_shares = [i for i in range(scheme.n) if is_significant(access, (i,))]
        excess = max((max(h_sec - per_share[i], per_share[i] - lq) for i in sig_shares), default=-math.inf)
        out.append(_le("share_dimension_bound", excess, tol, f"{len(sig_shares)} significant shares"))
    return out


def adversaries(dim: int, count: int, rng: np.random.Generator) -> list[KrausChannel]:
    """Alternating Haar-random unitaries and complete dephasing in random bases."""
    out = []
    for i in range(count):
        u = random_unitary(dim, rng)
        if i % 2 == 0:
            out.append(KrausChannel.unitary(u))
        else:
            out.append(KrausChannel(np.stack([np.outer(u[:, j], u[:, j].conj()) for j in range(dim)])))
    return out


def check_tamper(scheme: Scheme, access, count: int = 20, seed: int = 0) -> list[CheckResult]:
    rng = rng_for(seed, "tamper")
    worst_rec = worst_prod = 0.0
    for xs in _subsets_of(access, AccessClass.QUALIFIED):
        comp = scheme.complement(xs)
        for adv in adversaries(scheme.q ** len(comp), count, rng):
            psi = random_pure_state(scheme.secret_dim, rng)
            rep = tamper_check(scheme, xs, adv, psi)
            worst_rec = max(worst_rec, rep.recovery_distance)
            worst_prod = max(worst_prod, rep.product_distance)
    return [
        _le("tamper_recovery", worst_rec, 1e-9),
        _le("tamper_product_form", worst_prod, 1e-9),
    ]


SUITE: dict[str, Callable] = {
    "structure": lambda s, a, seed: check_structure(s, a),
    "holevo": lambda s, a, seed: check_holevo_values(s, a),
    "decoder": lambda s, a, seed: check_decoder(s, a, seed=seed),
    "petz": lambda s, a, seed: check_petz(s, a, seed=seed),
    "divergence": lambda s, a, seed: check_divergence(s, seed=seed),
    "efficiency": lambda s, a, seed: check_efficiency(s, a, seed=seed),
    "tamper": lambda s, a, seed: check_tamper(s, a, seed=seed),
}


def run_suite(scheme: Scheme, seed: int = 0, only: list[str] | None = None) -> list[CheckResult]:
    access = access_structure(scheme)
    results = []
    for name, fn in SUITE.items():
        if only is None or name in only:
            results.extend(fn(scheme, access, seed))
    return results
