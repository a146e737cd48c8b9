"""OFDM framing with cyclic prefix and time-domain tapped-delay-line channel."""

from __future__ import annotations

import numpy as np

from ..numerics import dft

__all__ = ["apply_channel", "ofdm_demodulate", "ofdm_modulate"]


def ofdm_modulate(symbols, M: int, L_cp: int, L: int | None = None) -> np.ndarray:
    """IDFT over the last axis (length ``M``) and prepend the last ``L_cp`` samples."""
    symbols = np.asarray(symbols, dtype=complex)
    if symbols.shape[-1] != M:
        raise ValueError(f"expected {M} subcarriers on the last axis, got {symbols.shape[-1]}")
    if L is not None and L_cp < L:
        raise ValueError("ISI not absorbed")
    x = dft(symbols, "inverse")
    return np.concatenate([x[..., M - L_cp :], x], axis=-1) if L_cp else x


def ofdm_demodulate(samples, M: int, L_cp: int) -> np.ndarray:
    """Drop the cyclic prefix and DFT back to subcarriers."""
    samples = np.asarray(samples, dtype=complex)
    if samples.shape[-1] != M + L_cp:
        raise ValueError(f"expected {M + L_cp} samples, got {samples.shape[-1]}")
    return dft(samples[..., L_cp:], "forward")


def apply_channel(stream, taps, delays) -> np.ndarray:
    """Pass a serial antenna stream ``(..., N_t, n)`` through MIMO taps ``(L, N_r, N_t)``.

    ``delays`` are integer sample delays; the channel starts at rest and the
    output is truncated to ``n`` samples.
    """
    stream = np.asarray(stream, dtype=complex)
    taps = np.asarray(taps, dtype=complex)
    d_int = np.rint(np.asarray(delays, dtype=float)).astype(int)
    if np.any(np.abs(d_int - np.asarray(delays, dtype=float)) > 1e-12):
        raise ValueError("time-domain channel needs integer delays")
    n = stream.shape[-1]
    out = np.zeros(stream.shape[:-2] + (taps.shape[1], n), dtype=complex)
    for H_l, d in zip(taps, d_int):
        if d >= n:
            continue
        out[..., d:] += np.einsum("rt,...tn->...rn", H_l, stream[..., : n - d])
    return out
