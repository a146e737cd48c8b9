"""Gray-labelled square QAM with unit average energy."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = ["Constellation", "labels_of", "qam", "qam_map"]


def _gray_pam(bits_per_axis: int) -> tuple[np.ndarray, np.ndarray]:
    """Amplitudes and Gray labels of a ``2**bits_per_axis``-PAM; label 0...0 is the largest level."""
    n = 1 << bits_per_axis
    levels = np.empty(n)
    labels = np.empty((n, bits_per_axis), dtype=np.uint8)
    for idx in range(n):
        g = idx ^ (idx >> 1)
        labels[idx] = [(g >> (bits_per_axis - 1 - k)) & 1 for k in range(bits_per_axis)]
        levels[idx] = (n - 1) - 2 * idx
    return levels, labels


@dataclass(frozen=True)
class Constellation:
    """Square QAM; ``points[i]`` carries label ``labels[i]`` (MSB first).

    The first half of each label selects the in-phase level, the second half
    the quadrature level; bit 0 selects the positive side.  For 4-QAM:
    00 -> (1+1j)/sqrt2, 01 -> (1-1j)/sqrt2, 10 -> (-1+1j)/sqrt2, 11 -> (-1-1j)/sqrt2.
    """

    order: int = 4
    points: np.ndarray = field(init=False, repr=False, compare=False)
    labels: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        B = int(round(math.log2(self.order)))
        if self.order < 4 or 1 << B != self.order or B % 2:
            raise ValueError(f"square QAM order must be 4, 16, 64, ...; got {self.order}")
        half = B // 2
        lv, lb = _gray_pam(half)
        n = len(lv)
        pts = np.empty(self.order, dtype=complex)
        labels = np.empty((self.order, B), dtype=np.uint8)
        for i in range(n):
            for q in range(n):
                idx = int("".join(map(str, lb[i])) + "".join(map(str, lb[q])), 2)
                pts[idx] = lv[i] + 1j * lv[q]
                labels[idx] = np.concatenate([lb[i], lb[q]])
        pts /= np.sqrt(np.mean(np.abs(pts) ** 2))
        pts.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "labels", labels)

    @property
    def bits_per_symbol(self) -> int:
        return self.labels.shape[1]

    @property
    def d_min(self) -> float:
        d = np.abs(self.points[:, None] - self.points[None, :])
        return float(d[d > 0].min())


def qam(order: int = 4) -> Constellation:
    return Constellation(order)


def qam_map(bits, constellation: Constellation) -> np.ndarray:
    """Map the last axis of ``bits`` (length divisible by log2 order) to symbols."""
    bits = np.asarray(bits, dtype=np.int64)
    B = constellation.bits_per_symbol
    if bits.shape[-1] % B:
        raise ValueError(f"bit count {bits.shape[-1]} not divisible by {B}")
    groups = bits.reshape(bits.shape[:-1] + (-1, B))
    weights = 1 << np.arange(B - 1, -1, -1)
    return constellation.points[groups @ weights]


def labels_of(symbols, constellation: Constellation) -> np.ndarray:
    """Nearest-point labels, flattened along the last axis."""
    symbols = np.asarray(symbols, dtype=complex)
    idx = np.argmin(np.abs(symbols[..., None] - constellation.points), axis=-1)
    lab = constellation.labels[idx]
    return lab.reshape(lab.shape[:-2] + (-1,))
