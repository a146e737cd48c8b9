"""Rotation bit interleaver over (subcarrier, subchannel) streams."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["InterleaverSpec", "deinterleave", "interleave", "location"]


@dataclass(frozen=True)
class InterleaverSpec:
    """Rotation over ``S * M_eff`` streams, ``bits_per_symbol`` label bits each.

    Coded bit ``k`` goes to stream ``k mod (S*M_eff)``, i.e. subcarrier
    ``(k mod S*M_eff) // S`` and subchannel ``k mod S``; each stream fills
    its label positions in arrival order.
    """

    S: int
    M_eff: int
    bits_per_symbol: int = 2
    kind: str = "rotation"

    def __post_init__(self):
        if self.kind != "rotation":
            raise ValueError(f"unsupported interleaver kind {self.kind!r}")
        if self.S < 1 or self.M_eff < 1 or self.bits_per_symbol < 1:
            raise ValueError("S, M_eff and bits_per_symbol must be positive")

    @property
    def streams(self) -> int:
        return self.S * self.M_eff

    @property
    def block_unit(self) -> int:
        """Interleaved blocks must be a multiple of this many bits."""
        return self.streams * self.bits_per_symbol

    def period(self, n_c: int) -> int:
        """Coded bits in one joint code/rotation period, ``lcm(n_c, S*M_eff)``."""
        return math.lcm(n_c, self.streams)


def location(k: int, spec: InterleaverSpec) -> tuple[int, int, int, int]:
    """0-based ``(symbol, subcarrier, subchannel, label_bit)`` of coded bit ``k``."""
    sigma = k % spec.streams
    n = k // spec.streams
    return n // spec.bits_per_symbol, sigma // spec.S, sigma % spec.S, n % spec.bits_per_symbol


def _check(n: int, spec: InterleaverSpec):
    if n % spec.block_unit:
        raise ValueError(
            f"block of {n} bits is not divisible by S*M_eff*bits_per_symbol = {spec.block_unit}"
        )


def interleave(bits, spec: InterleaverSpec) -> np.ndarray:
    """Map the last axis onto a ``(K, M_eff, S, bits_per_symbol)`` label grid."""
    bits = np.asarray(bits)
    n = bits.shape[-1]
    _check(n, spec)
    K = n // spec.block_unit
    lead = bits.shape[:-1]
    # k = ((symbol * B + j) * M_eff + m) * S + s
    grid = bits.reshape(lead + (K, spec.bits_per_symbol, spec.M_eff, spec.S))
    return np.moveaxis(grid, -3, -1)


def deinterleave(grid, spec: InterleaverSpec) -> np.ndarray:
    """Inverse of :func:`interleave`."""
    grid = np.asarray(grid)
    _check_grid(grid.shape[-4:], spec)
    return np.moveaxis(grid, -1, -3).reshape(grid.shape[:-4] + (-1,))


def deinterleave_metrics(metrics, spec: InterleaverSpec) -> np.ndarray:
    """Deinterleave per-bit metric pairs shaped ``(..., K, M_eff, S, B, 2)``."""
    metrics = np.asarray(metrics)
    _check_grid(metrics.shape[-5:-1], spec)
    moved = np.moveaxis(metrics, -2, -4)
    return moved.reshape(metrics.shape[:-5] + (-1, metrics.shape[-1]))


def _check_grid(shape, spec: InterleaverSpec):
    if tuple(shape[1:]) != (spec.M_eff, spec.S, spec.bits_per_symbol):
        raise ValueError(f"grid shape {tuple(shape)} does not match {spec}")
