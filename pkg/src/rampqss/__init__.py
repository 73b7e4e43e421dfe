"""Simulator and exact verifier for (k, L, n)-threshold ramp quantum secret sharing."""

from ._kernels import BACKEND
from .access import AccessClass, access_structure, classify, is_qualified, is_vanishing
from .errors import ParameterError, SingularMatrixError
from .gf import INFINITY, FieldElement, FieldMatrix
from .qlin import KrausChannel
from .recover import build_decoder, decode, petz_map, recover_from, tamper_check
from .scheme import Scheme, SchemeParams, build_scheme, encode, reduced_state

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "AccessClass",
    "access_structure",
    "classify",
    "is_qualified",
    "is_vanishing",
    "ParameterError",
    "SingularMatrixError",
    "INFINITY",
    "FieldElement",
    "FieldMatrix",
    "KrausChannel",
    "build_decoder",
    "decode",
    "petz_map",
    "recover_from",
    "tamper_check",
    "Scheme",
    "SchemeParams",
    "build_scheme",
    "encode",
    "reduced_state",
]
