"""Complex linear algebra, DFT and seeded sampling shared by the simulator."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SeededRng",
    "as_generator",
    "SvdResult",
    "complex_gaussian",
    "dft",
    "svd",
    "svd_batch",
]


class SeededRng:
    """Explicitly seeded random stream.

    A ``(seed, stream_id)`` pair always yields the same sequence: the pair is
    fed to :class:`numpy.random.SeedSequence` as entropy plus spawn key and
    drives a counter-based Philox generator, so distinct stream ids are
    statistically independent and can be consumed in any order.
    """

    def __init__(self, seed: int, stream_id: int | tuple[int, ...] = 0):
        self.seed = int(seed)
        if isinstance(stream_id, tuple):
            self.stream_id = tuple(int(s) for s in stream_id)
        else:
            self.stream_id = (int(stream_id),)
        ss = np.random.SeedSequence(self.seed, spawn_key=self.stream_id)
        self.generator = np.random.Generator(np.random.Philox(ss))

    def derive(self, *keys: int) -> "SeededRng":
        """Child stream whose id extends this one by ``keys``."""
        return SeededRng(self.seed, self.stream_id + tuple(int(k) for k in keys))

    def __repr__(self) -> str:
        return f"SeededRng(seed={self.seed}, stream_id={self.stream_id})"


def as_generator(rng) -> np.random.Generator:
    if isinstance(rng, SeededRng):
        return rng.generator
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError(f"expected SeededRng or numpy Generator, got {type(rng).__name__}")


def complex_gaussian(rng, variance: float, size=None):
    """Circularly symmetric complex Gaussian samples CN(0, variance)."""
    if not variance > 0:
        raise ValueError(f"variance must be positive, got {variance}")
    g = as_generator(rng)
    scale = np.sqrt(variance / 2.0)
    out = scale * (g.standard_normal(size) + 1j * g.standard_normal(size))
    return out


def dft(v, direction: str = "forward") -> np.ndarray:
    """DFT along the last axis.

    forward: ``X[m] = sum_k x[k] exp(-2j pi m k / M)`` (no scaling)
    inverse: ``x[k] = (1/M) sum_m X[m] exp(+2j pi m k / M)``
    """
    v = np.asarray(v, dtype=complex)
    if v.ndim == 0 or v.shape[-1] == 0:
        raise ValueError("empty input")
    if direction == "forward":
        return np.fft.fft(v, axis=-1)
    if direction == "inverse":
        return np.fft.ifft(v, axis=-1)
    raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")


@dataclass
class SvdResult:
    """``H = U diag(singular_values) V^H`` with full unitary ``U`` and ``V``."""

    U: np.ndarray
    singular_values: np.ndarray
    V: np.ndarray
    shape: tuple[int, int] = field(init=False)

    def __post_init__(self):
        self.shape = (self.U.shape[0], self.V.shape[0])

    def reconstruct(self) -> np.ndarray:
        rows, cols = self.shape
        sigma = np.zeros((rows, cols))
        k = len(self.singular_values)
        sigma[:k, :k] = np.diag(self.singular_values)
        return self.U @ sigma @ self.V.conj().T


def _fix_phases(U: np.ndarray, V: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # Rotate each V column so its first nonzero entry is real non-negative and
    # apply the same rotation to the matching U column (leaves U S V^H intact).
    # V columns have unit norm, so an absolute threshold is fine.
    k = min(U.shape[-1], V.shape[-1])
    first = np.argmax(np.abs(V) > 1e-12, axis=-2)
    pivot = np.take_along_axis(V, first[..., None, :], axis=-2)[..., 0, :]
    phase = pivot / np.abs(pivot)
    V = V * phase.conj()[..., None, :]
    U = U.copy()
    U[..., :, :k] = U[..., :, :k] * phase.conj()[..., None, :k]
    return U, V


def svd(H) -> SvdResult:
    """Full SVD of a complex matrix with a reproducible column phase."""
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2:
        raise ValueError("svd expects a 2-D matrix")
    rows, cols = H.shape
    if not (1 <= rows <= 8 and 1 <= cols <= 8):
        raise ValueError(f"matrix size {H.shape} outside supported range 1..8")
    if not np.all(np.isfinite(H)):
        raise ValueError("invalid matrix")
    U, s, Vh = np.linalg.svd(H, full_matrices=True)
    U, V = _fix_phases(U, Vh.conj().T)
    return SvdResult(U=U, singular_values=s, V=V)


def svd_batch(H) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Batched SVD over leading axes; returns ``(U, s, V)`` arrays."""
    H = np.asarray(H, dtype=complex)
    if not np.all(np.isfinite(H)):
        raise ValueError("invalid matrix")
    U, s, Vh = np.linalg.svd(H, full_matrices=True)
    U, V = _fix_phases(U, np.swapaxes(Vh.conj(), -1, -2))
    return U, s, V
