"""Constructive uniform-boundedness toolkit: gliding-hump witnesses, dual
functionals on l2, series boundary certificates and Fourier decay profiles."""

from .certificate import Certificate, Claim
from .core import (
    Diagonal,
    Functional,
    Matrix,
    NormResult,
    SeqVector,
    apply,
    inner,
    near_maximizer,
    norm,
    operator_norm,
)
from .dual import (
    DualWitness,
    SetSample,
    coordinate_unbounded_direction,
    diagonal_dual_witness,
    dual_witness,
)
from .hump import FamilySpec, HumpWitness, build_witness, choose_sign, select_subsequence, verify_witness

__version__ = "0.1.0"

__all__ = [
    "Certificate", "Claim", "Diagonal", "Functional", "Matrix", "NormResult", "SeqVector",
    "apply", "inner", "near_maximizer", "norm", "operator_norm", "DualWitness", "SetSample",
    "coordinate_unbounded_direction", "diagonal_dual_witness", "dual_witness", "FamilySpec",
    "HumpWitness", "build_witness", "choose_sign", "select_subsequence", "verify_witness",
]
