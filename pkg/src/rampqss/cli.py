"""Command-line interface.

    rampqss build      --q 5 --k 3 --L 2 [--points 1,2,3,4] --out scheme.json
    rampqss encode     --scheme scheme.json --state secret.json --out encoded.json
    rampqss decode     --scheme scheme.json --state encoded.json --subset 1,2,3 [--reference secret.json]
    rampqss classify   --scheme scheme.json [--log-base q]
    rampqss verify     --scheme scheme.json [--seed 0]
    rampqss petz-demo  --scheme scheme.json [--seed 0]

Share labels on the command line and in reports are 1-based.
Exit status: 0 success, 1 property or classification failure, 2 input error.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import formats
from .access import AccessClass, access_structure, all_subsets, classify, basis_holevo
from .errors import ParameterError
from .qlin import fidelity, partial_trace, projector, random_pure_state, trace_distance
from .recover import check_divergence_equality, decoder_for, decode, petz_map
from .scheme import Scheme, SchemeParams, build_scheme, decode_sparse, encode_sparse, share_channel
from .verify import PETZ_MAX_DIM, check_structure, rng_for, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
NORM_TOL = 1e-9


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    scheme_file: Path | None = None
    state_file: Path | None = None
    subset: tuple[int, ...] | None = None
    log_base: str = "q"
    output: Path | None = None
    seed: int = 0
    reference: Path | None = None


def _parse_subset(text: str) -> tuple[int, ...]:
    try:
        vals = [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad subset {text!r}; expected e.g. 1,2,3") from None
    if not vals:
        raise argparse.ArgumentTypeError("subset is empty")
    return tuple(vals)


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _load_scheme(cfg: RunConfig) -> Scheme:
    if cfg.scheme_file is None:
        raise InputError("--scheme is required")
    try:
        return build_scheme(formats.read_scheme(cfg.scheme_file))
    except ParameterError as e:
        raise InputError(str(e)) from None


def _unit(cfg: RunConfig, scheme: Scheme) -> tuple[str, float]:
    return {"2": ("bits", math.log(2)), "e": ("nats", 1.0), "q": ("dits", math.log(scheme.q))}[cfg.log_base]


def _zero_based(scheme: Scheme, subset: Sequence[int]) -> tuple[int, ...]:
    try:
        return scheme.subset(i - 1 for i in subset)
    except ParameterError as e:
        raise InputError(f"--subset: {e} (labels are 1..{scheme.n})") from None


def _scheme_record(scheme: Scheme) -> dict:
    return {"kind": "scheme", **scheme.params.to_dict()}


def cmd_build(cfg: RunConfig, args) -> int:
    try:
        pts = () if not args.points else tuple(
            p if p.strip().lower() in ("inf", "infinity") else int(p) for p in args.points.split(",")
        )
        n = args.n if args.n is not None else 2 * args.k - args.L
        params = SchemeParams(args.q, args.k, args.L, n, pts)
    except (ParameterError, ValueError) as e:
        raise InputError(str(e)) from None
    _emit(formats.format_record(params.to_dict()) + "\n", cfg.output)
    return EXIT_OK


def cmd_classify(cfg: RunConfig) -> int:
    scheme = _load_scheme(cfg)
    unit, scale = _unit(cfg, scheme)
    access = access_structure(scheme)
    lq = math.log(scheme.q)
    records = [{**_scheme_record(scheme), "unit": unit}]
    for xs, rep in access.items():
        rec = {
            "kind": "subset",
            "subset": [i + 1 for i in xs],
            "class": rep.cls.label,
            "holevo": rep.holevo_dits * lq / scale,
            "entropy": rep.entropy_dits * lq / scale,
        }
        if rep.witness:
            rec["witness"] = rep.witness
        records.append(rec)
    checks = check_structure(scheme, access)
    records.extend({"kind": "check", **c.to_record()} for c in checks)
    ok = all(c.passed for c in checks)
    records.append({"kind": "summary", "subsets": len(access), "pass": ok})
    _emit(formats.format_report(records), cfg.output)
    if not ok:
        failed = "; ".join(f"{c.name}: {c.detail}" for c in checks if not c.passed)
        print(f"classification violates the threshold structure: {failed}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


def _read_normalized_secret(path, scheme: Scheme) -> np.ndarray:
    try:
        psi = formats.read_secret(path)
    except ParameterError as e:
        raise InputError(str(e)) from None
    if psi.shape[0] != scheme.secret_dim:
        raise InputError(f"{path}: secret state has length {psi.shape[0]}, expected q^L = {scheme.secret_dim}")
    norm = float(np.linalg.norm(psi))
    if abs(norm - 1) > NORM_TOL:
        raise InputError(f"{path}: state is not normalized (norm {norm:.12f})")
    return psi


def cmd_encode(cfg: RunConfig) -> int:
    scheme = _load_scheme(cfg)
    if cfg.state_file is None:
        raise InputError("--state is required")
    psi = _read_normalized_secret(cfg.state_file, scheme)
    amps = encode_sparse(scheme, psi)
    if cfg.output is None:
        doc = {str(i): [a.real, a.imag] for i, a in amps.items()}
        sys.stdout.write(formats.format_record(doc) + "\n")
    else:
        formats.write_encoded(amps, cfg.output)
    return EXIT_OK


def cmd_decode(cfg: RunConfig) -> int:
    scheme = _load_scheme(cfg)
    if cfg.state_file is None or cfg.subset is None:
        raise InputError("--state and --subset are required")
    xs = _zero_based(scheme, cfg.subset)
    try:
        g = decode_sparse(scheme, formats.read_encoded(cfg.state_file))
    except ParameterError as e:
        raise InputError(str(e)) from None
    norm = float(np.linalg.norm(g))
    if abs(norm - 1) > NORM_TOL:
        raise InputError(f"{cfg.state_file}: encoded state is not normalized (norm {norm:.12f})")
    cls = classify(scheme, xs)
    if cls is not AccessClass.QUALIFIED:
        print(f"subset is {cls.label}: cannot decode from shares {list(cfg.subset)}", file=sys.stderr)
        return EXIT_FAIL
    dec = decoder_for(scheme, xs)
    rho_x = partial_trace(g, scheme.share_dims, dec.subset)
    out = decode(dec, rho_x)
    record = {"kind": "decode", "subset": [i + 1 for i in xs], "decoder_shares": [i + 1 for i in dec.subset],
              "trace": float(np.trace(out).real)}
    if cfg.reference is not None:
        ref = _read_normalized_secret(cfg.reference, scheme)
        record["fidelity"] = fidelity(out, ref)
        record["trace_distance"] = trace_distance(out, projector(ref))
    if cfg.output is not None:
        formats.write_density(out, cfg.output)
        print(formats.format_record(record))
    else:
        # stdout carries the density matrix; the report goes to stderr
        dens = {"dim": out.shape[0], "entries": [[[z.real, z.imag] for z in row] for row in out]}
        sys.stdout.write(formats.format_record(dens) + "\n")
        print(formats.format_record(record), file=sys.stderr)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    scheme = _load_scheme(cfg)
    results = run_suite(scheme, seed=cfg.seed)
    records = [{**_scheme_record(scheme), "seed": cfg.seed}]
    records.extend({"kind": "check", **r.to_record()} for r in results)
    ok = all(r.passed for r in results)
    records.append({"kind": "summary", "checks": len(results), "failed": sum(not r.passed for r in results), "pass": ok})
    _emit(formats.format_report(records), cfg.output)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_petz_demo(cfg: RunConfig) -> int:
    """Petz recovery with sigma = I/q^L on one subset of each class."""
    scheme = _load_scheme(cfg)
    rng = rng_for(cfg.seed, "petz-demo")
    S = scheme.secret_dim
    sigma = np.eye(S) / S
    unit, scale = _unit(cfg, scheme)
    records = [{**_scheme_record(scheme), "seed": cfg.seed, "unit": unit}]
    seen = set()
    for xs in all_subsets(scheme.n):
        if scheme.q ** len(xs) > PETZ_MAX_DIM:
            continue
        cls = classify(scheme, xs)
        if cls in seen:
            continue
        seen.add(cls)
        ch = share_channel(scheme, xs)
        r = petz_map(ch, sigma)
        basis = np.zeros((S, S))
        basis[0, 0] = 1.0
        rand = projector(random_pure_state(S, rng))
        rep = check_divergence_equality(rand, sigma, ch)
        hol, _ = basis_holevo(scheme, xs)
        records.append({
            "kind": "petz",
            "subset": [i + 1 for i in xs],
            "class": cls.label,
            "holevo": hol / scale,
            "recovery_error_basis": trace_distance(r(ch(basis)), basis),
            "recovery_error_random": rep.recovery_error,
            "divergence_gap": rep.gap / scale,
            "agree": rep.agree,
        })
    _emit(formats.format_report(records), cfg.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rampqss", description="(k,L,n)-threshold ramp quantum secret sharing toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, state=False, subset=False):
        sp.add_argument("--scheme", type=Path, required=True, help="scheme file (JSON)")
        if state:
            sp.add_argument("--state", type=Path, help="state file")
        if subset:
            sp.add_argument("--subset", type=_parse_subset, help="1-based share labels, e.g. 1,2,3")
        sp.add_argument("--log-base", choices=("2", "e", "q"), default="q")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", type=Path, default=None, help="output path (default: stdout)")

    b = sub.add_parser("build", help="write a scheme file")
    b.add_argument("--q", type=int, required=True)
    b.add_argument("--k", type=int, required=True)
    b.add_argument("--L", type=int, required=True)
    b.add_argument("--n", type=int, default=None, help="defaults to 2k - L")
    b.add_argument("--points", default=None, help="comma-separated evaluation points; 'inf' allowed")
    b.add_argument("--out", type=Path, default=None)

    common(sub.add_parser("encode", help="encode a secret state"), state=True)
    d = sub.add_parser("decode", help="decode from a qualified subset")
    common(d, state=True, subset=True)
    d.add_argument("--reference", type=Path, default=None, help="secret state to report fidelity against")
    common(sub.add_parser("classify", help="classify every share subset"))
    common(sub.add_parser("verify", help="run the verification suite"))
    common(sub.add_parser("petz-demo", help="Petz recovery per subset class"))
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    cfg = RunConfig(
        command=args.command,
        scheme_file=getattr(args, "scheme", None),
        state_file=getattr(args, "state", None),
        subset=getattr(args, "subset", None),
        log_base=getattr(args, "log_base", "q"),
        output=getattr(args, "out", None),
        seed=getattr(args, "seed", 0),
        reference=getattr(args, "reference", None),
    )
    try:
        if cfg.command == "build":
            return cmd_build(cfg, args)
        return {
            "encode": cmd_encode,
            "decode": cmd_decode,
            "classify": cmd_classify,
            "verify": cmd_verify,
            "petz-demo": cmd_petz_demo,
        }[cfg.command](cfg)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
