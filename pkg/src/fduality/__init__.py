"""Framed duality (f-duality) of toric varieties with exact integer arithmetic."""
from .ftv_core import (
    FramedToricVariety,
    WeaklyFramedToricVariety,
    f_dual,
    f_process,
    is_calibrated,
    is_k_dual,
)
from .varieties import hirzebruch, product, projective_space, weighted_projective

__all__ = [
    "FramedToricVariety",
    "WeaklyFramedToricVariety",
    "f_dual",
    "f_process",
    "is_calibrated",
    "is_k_dual",
    "hirzebruch",
    "product",
    "projective_space",
    "weighted_projective",
]
