"""Convolutional coding, puncturing, rotation interleaving and Viterbi decoding."""

from .code import CodeSpec, Trellis, conv_encode, depuncture, encode, puncture, standard_code
from .decode import bit_metric, bit_metrics, viterbi_decode
from .interleave import InterleaverSpec, deinterleave, deinterleave_metrics, interleave, location

__all__ = [
    "CodeSpec",
    "InterleaverSpec",
    "Trellis",
    "bit_metric",
    "bit_metrics",
    "conv_encode",
    "deinterleave",
    "deinterleave_metrics",
    "depuncture",
    "encode",
    "interleave",
    "location",
    "puncture",
    "standard_code",
    "viterbi_decode",
]
