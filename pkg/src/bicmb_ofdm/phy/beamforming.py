"""Per-subcarrier SVD beamforming through the explicit OFDM chain."""

from __future__ import annotations

import numpy as np

from ..numerics import complex_gaussian, dft
from .ofdm import apply_channel, ofdm_demodulate, ofdm_modulate

__all__ = ["beamform_chain", "diagonal_chain", "noise_variance"]


def noise_variance(snr_db: float, N_t: int) -> float:
    """``N0 = N_t / gamma``: total transmit power scales with ``N_t``."""
    return N_t / 10.0 ** (snr_db / 10.0)


def beamform_chain(x, realization, N0: float, rng=None, *, L_cp: int, noise=None) -> np.ndarray:
    """Run symbols through precoding, OFDM, the tap channel, OFDM receive and combining.

    ``x`` has shape ``(K, M, S)`` (OFDM symbol, subcarrier, stream).  Receive
    noise is added in the time domain with per-sample variance ``N0 / M`` so
    that every subcarrier sees variance ``N0``; pass ``noise`` (shape
    ``(K, N_r, M)``, useful samples only) to inject a specific realization.
    """
    x = np.asarray(x, dtype=complex)
    if x.ndim != 3:
        raise ValueError("x must have shape (K, M, S)")
    K, M, S = x.shape
    if M != realization.M:
        raise ValueError(f"x has {M} subcarriers, channel has {realization.M}")
    if S > min(realization.N_t, realization.N_r):
        raise ValueError("S exceeds min(N_t, N_r)")
    profile = realization.profile
    U, V = realization.beamformers(S)

    X = np.einsum("mts,kms->ktm", V, x)  # (K, N_t, M)
    tx = ofdm_modulate(X, M, L_cp, profile.L)  # (K, N_t, M + L_cp)
    n_sym = M + L_cp
    stream = np.moveaxis(tx, 0, 1).reshape(realization.N_t, K * n_sym)
    rx = apply_channel(stream, realization.taps, profile.delays)
    rx = np.moveaxis(rx.reshape(realization.N_r, K, n_sym), 1, 0)  # (K, N_r, M + L_cp)

    if noise is None and N0 > 0:
        noise = complex_gaussian(rng, N0 / M, (K, realization.N_r, M))
    if noise is not None:
        rx = rx.copy()
        rx[..., L_cp:] += noise
    Y = ofdm_demodulate(rx, M, L_cp)  # (K, N_r, M)
    return np.einsum("mrs,krm->kms", U.conj(), Y)


def diagonal_chain(x, lambdas, N0: float, rng=None, *, noise=None) -> np.ndarray:
    """Equivalent per-stream model ``y = lambda x + n`` with ``n ~ CN(0, N0)``.

    ``lambdas`` broadcasts against ``x`` after inserting the OFDM-symbol axis,
    i.e. shape ``(..., M, S)`` for ``x`` of shape ``(..., K, M, S)``.
    """
    x = np.asarray(x, dtype=complex)
    lam = np.asarray(lambdas, dtype=float)[..., None, :, :]
    y = lam * x
    if noise is None and N0 > 0:
        noise = complex_gaussian(rng, N0, x.shape)
    if noise is not None:
        y = y + noise
    return y


def stream_noise_from_antenna_noise(noise, realization, S: int) -> np.ndarray:
    """Map time-domain receive noise ``(K, N_r, M)`` to the combiner outputs ``(K, M, S)``."""
    U, _ = realization.beamformers(S)
    W = dft(np.asarray(noise, dtype=complex), "forward")
    return np.einsum("mrs,krm->kms", U.conj(), W)
