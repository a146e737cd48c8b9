"""Subcarrier grouping permutations."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..channel import uncorrelated_groups

__all__ = ["GroupingPermutation", "grouping_permutation"]


@dataclass(frozen=True)
class GroupingPermutation:
    """Transmit permutation ``forward`` over ``M*S`` slots and its inverse.

    Slot ``i`` of the group-major stream order (group ``u``, member ``l``,
    subchannel ``s``) is carried by subcarrier slot ``forward[i]`` (``m*S + s``).
    """

    forward: np.ndarray
    inverse: np.ndarray
    M: int
    L: int
    S: int

    def to_subcarriers(self, data, axis: int = -1) -> np.ndarray:
        """Apply ``T_1``: group-major slots -> subcarrier-major slots along ``axis``."""
        data = np.moveaxis(np.asarray(data), axis, -1)
        return np.moveaxis(data[..., self.inverse], -1, axis)

    def to_streams(self, data, axis: int = -1) -> np.ndarray:
        """Apply ``T_2``: subcarrier-major slots -> group-major slots."""
        data = np.moveaxis(np.asarray(data), axis, -1)
        return np.moveaxis(data[..., self.forward], -1, axis)


def grouping_permutation(M: int, L: int, S: int = 1) -> GroupingPermutation:
    groups = uncorrelated_groups(M, L)
    forward = np.array([m * S + s for g in groups for m in g for s in range(S)], dtype=np.int64)
    inverse = np.empty_like(forward)
    inverse[forward] = np.arange(forward.size)
    return GroupingPermutation(forward, inverse, M, L, S)
