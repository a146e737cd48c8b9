"""Modulation, OFDM framing, SVD beamforming, grouping and the end-to-end link."""

from .beamforming import beamform_chain, diagonal_chain, noise_variance, stream_noise_from_antenna_noise
from .grouping import GroupingPermutation, grouping_permutation
from .link import LinkConfig, LinkFrame, simulate_chunk, transmit_receive
from .modulation import Constellation, labels_of, qam, qam_map
from .ofdm import apply_channel, ofdm_demodulate, ofdm_modulate

__all__ = [
    "Constellation",
    "GroupingPermutation",
    "LinkConfig",
    "LinkFrame",
    "apply_channel",
    "beamform_chain",
    "diagonal_chain",
    "grouping_permutation",
    "labels_of",
    "noise_variance",
    "ofdm_demodulate",
    "ofdm_modulate",
    "qam",
    "qam_map",
    "simulate_chunk",
    "stream_noise_from_antenna_noise",
    "transmit_receive",
]
