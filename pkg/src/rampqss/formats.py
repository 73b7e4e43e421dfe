"""File formats.

scheme file     JSON object ``{"q", "k", "L", "n", "eval_points"}``; a point is an
                integer or the string ``"inf"``
secret state    JSON array of ``[re, im]`` pairs, length ``q**L``
encoded state   JSON object ``{"<share basis index>": [re, im], ...}``
density matrix  JSON object ``{"dim": d, "entries": [[[re, im], ...], ...]}``
report          JSON Lines, one record per line; floats printed with 12 decimals,
                ``"inf"`` for infinite values and ``null`` for missing ones
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .errors import ParameterError
from .scheme import SchemeParams

DECIMALS = 12


def _load_json(path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise ParameterError(f"{path}: invalid JSON ({e.msg} at line {e.lineno} column {e.colno})") from None
    except OSError as e:
        raise ParameterError(f"{path}: {e.strerror}") from None


def read_scheme(path) -> SchemeParams:
    try:
        return SchemeParams.from_dict(_load_json(path))
    except ParameterError as e:
        raise type(e)(f"{path}: {e}") from None


def write_scheme(params: SchemeParams, path) -> None:
    Path(path).write_text(json.dumps(params.to_dict()) + "\n")


def _pair(v) -> complex:
    if not (isinstance(v, (list, tuple)) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v)):
        raise ParameterError(f"expected a [re, im] pair, got {v!r}")
    return complex(v[0], v[1])


def read_secret(path) -> np.ndarray:
    data = _load_json(path)
    if not isinstance(data, list) or not data:
        raise ParameterError(f"{path}: secret state must be a non-empty array of [re, im] pairs")
    return np.array([_pair(v) for v in data], dtype=complex)


def write_secret(psi: np.ndarray, path) -> None:
    Path(path).write_text(json.dumps([[float(z.real), float(z.imag)] for z in np.asarray(psi)]) + "\n")


def read_encoded(path) -> dict[int, complex]:
    data = _load_json(path)
    if not isinstance(data, dict):
        raise ParameterError(f"{path}: encoded state must be an object of index -> [re, im]")
    out = {}
    for key, v in data.items():
        try:
            idx = int(key)
        except ValueError:
            raise ParameterError(f"{path}: bad share basis index {key!r}") from None
        out[idx] = _pair(v)
    return out


def write_encoded(amps: Mapping[int, complex], path) -> None:
    doc = {str(i): [float(a.real), float(a.imag)] for i, a in sorted(amps.items())}
    Path(path).write_text(json.dumps(doc) + "\n")


def write_density(rho: np.ndarray, path) -> None:
    rho = np.asarray(rho)
    entries = [[[float(z.real), float(z.imag)] for z in row] for row in rho]
    Path(path).write_text(json.dumps({"dim": rho.shape[0], "entries": entries}) + "\n")


def read_density(path) -> np.ndarray:
    data = _load_json(path)
    try:
        rho = np.array([[_pair(v) for v in row] for row in data["entries"]], dtype=complex)
    except (KeyError, TypeError):
        raise ParameterError(f"{path}: density file needs an 'entries' matrix") from None
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] != data.get("dim"):
        raise ParameterError(f"{path}: entries do not form a dim x dim matrix")
    return rho


def _fmt(v) -> str:
    if isinstance(v, bool) or v is None:
        return json.dumps(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "null"
        if math.isinf(v):
            return '"inf"' if v > 0 else '"-inf"'
        if abs(v) < 0.5 * 10**-DECIMALS:
            v = 0.0
        return f"{v:.{DECIMALS}f}"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, Mapping):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_fmt(x)}" for k, x in v.items()) + "}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return json.dumps(v)


def format_record(rec: Mapping) -> str:
    """One report line; key order is preserved."""
    return _fmt(rec)


def format_report(records: Iterable[Mapping]) -> str:
    return "".join(format_record(r) + "\n" for r in records)


def parse_report(text: str) -> list[dict]:
    return [json.loads(line) for line in text.splitlines() if line.strip()]
