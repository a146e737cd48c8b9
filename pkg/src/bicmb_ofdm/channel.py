"""Frequency-selective MIMO channels: tap profiles, realizations, correlation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .numerics import SvdResult, complex_gaussian, svd, svd_batch

__all__ = [
    "ChannelRealization",
    "TapProfile",
    "draw_taps",
    "freq_response",
    "phase_ramp",
    "realize",
    "response_covariance",
    "singular_systems_batch",
    "singular_values_batch",
    "subcarrier_correlation",
    "uncorrelated_groups",
]


@dataclass(frozen=True)
class TapProfile:
    """Power-delay profile; ``delays`` are in sampling periods."""

    kind: str
    powers: tuple[float, ...]
    delays: tuple[float, ...]

    def __post_init__(self):
        powers = tuple(float(p) for p in self.powers)
        delays = tuple(float(d) for d in self.delays)
        object.__setattr__(self, "powers", powers)
        object.__setattr__(self, "delays", delays)
        if self.kind not in ("equal", "exponential", "custom"):
            raise ValueError(f"unknown profile kind {self.kind!r}")
        if len(powers) == 0 or len(powers) != len(delays):
            raise ValueError("powers and delays must be non-empty and of equal length")
        if any(p <= 0 for p in powers):
            raise ValueError("tap powers must be positive")
        if abs(sum(powers) - 1.0) > 1e-12:
            raise ValueError(f"tap powers must sum to 1, got {sum(powers)!r}")
        if delays[0] < 0 or any(b <= a for a, b in zip(delays, delays[1:])):
            raise ValueError("delays must be non-negative and strictly increasing")

    @property
    def L(self) -> int:
        return len(self.powers)

    @classmethod
    def equal(cls, L: int) -> "TapProfile":
        if L < 1:
            raise ValueError("L must be >= 1")
        return cls("equal", (1.0 / L,) * L, tuple(range(L)))

    @classmethod
    def exponential(cls, L: int, last_to_first_db: float = -7.0) -> "TapProfile":
        """Exponentially decaying taps at unit spacing.

        The decay rate is fixed by the power ratio of the last tap to the
        first; powers are then normalized to unit sum.
        """
        if L < 1:
            raise ValueError("L must be >= 1")
        if L == 1:
            return cls("exponential", (1.0,), (0.0,))
        beta = -last_to_first_db / 10.0 * math.log(10.0) / (L - 1)
        raw = np.exp(-beta * np.arange(L))
        powers = raw / raw.sum()
        # Re-normalize the last entry so the sum is 1 to within rounding.
        powers[-1] = 1.0 - powers[:-1].sum()
        return cls("exponential", tuple(powers), tuple(range(L)))

    @classmethod
    def from_kind(cls, kind: str, L: int) -> "TapProfile":
        if kind == "equal":
            return cls.equal(L)
        if kind == "exponential":
            return cls.exponential(L)
        raise ValueError(f"unknown profile kind {kind!r}")


def draw_taps(N_t: int, N_r: int, profile: TapProfile, rng, size=None) -> np.ndarray:
    """Independent Rayleigh taps, entry variance ``profile.powers[l]``.

    Returns shape ``(L, N_r, N_t)``, or ``(*size, L, N_r, N_t)`` when ``size``
    is given.
    """
    if not (1 <= N_t <= 4 and 1 <= N_r <= 4):
        raise ValueError("N_t and N_r must lie in 1..4")
    if not 1 <= profile.L <= 8:
        raise ValueError("L must lie in 1..8")
    lead = () if size is None else tuple(np.atleast_1d(size))
    z = complex_gaussian(rng, 1.0, lead + (profile.L, N_r, N_t))
    return z * np.sqrt(np.asarray(profile.powers))[:, None, None]


def _check_fft_size(M: int, L: int):
    if M < 1 or M & (M - 1):
        raise ValueError(f"M must be a power of two, got {M}")
    if M < L:
        raise ValueError("undersampled delay spread")


def phase_ramp(profile: TapProfile, M: int, subcarriers=None) -> np.ndarray:
    """``exp(-2j pi m tau_l / M)`` with shape ``(len(subcarriers), L)``."""
    m = np.arange(M) if subcarriers is None else np.asarray(subcarriers)
    tau = np.asarray(profile.delays)
    return np.exp(-2j * np.pi * np.outer(m, tau) / M)


def freq_response(taps, M: int, profile: TapProfile, subcarriers=None) -> np.ndarray:
    """Per-subcarrier MIMO response ``H(m) = sum_l H_l exp(-2j pi m tau_l / M)``.

    ``taps`` has shape ``(..., L, N_r, N_t)``; the result has shape
    ``(..., M, N_r, N_t)`` (or one entry per requested subcarrier, 0-based).
    """
    taps = np.asarray(taps)
    L = taps.shape[-3]
    if L != profile.L:
        raise ValueError(f"tap count {L} does not match profile L={profile.L}")
    _check_fft_size(M, L)
    ramp = phase_ramp(profile, M, subcarriers)
    return np.einsum("ml,...lij->...mij", ramp, taps)


@dataclass
class ChannelRealization:
    """One quasi-static channel draw and its per-subcarrier singular systems."""

    taps: np.ndarray
    profile: TapProfile
    M: int
    freq_responses: np.ndarray = field(init=False)
    singular_systems: list[SvdResult] = field(init=False)

    def __post_init__(self):
        self.taps = np.asarray(self.taps, dtype=complex)
        self.freq_responses = freq_response(self.taps, self.M, self.profile)
        self.singular_systems = [svd(H) for H in self.freq_responses]

    @property
    def N_r(self) -> int:
        return self.taps.shape[1]

    @property
    def N_t(self) -> int:
        return self.taps.shape[2]

    @property
    def singular_values(self) -> np.ndarray:
        """Array ``(M, min(N_r, N_t))`` of descending singular values."""
        return np.stack([r.singular_values for r in self.singular_systems])

    def beamformers(self, S: int) -> tuple[np.ndarray, np.ndarray]:
        """``U_S`` ``(M, N_r, S)`` and ``V_S`` ``(M, N_t, S)``."""
        U = np.stack([r.U[:, :S] for r in self.singular_systems])
        V = np.stack([r.V[:, :S] for r in self.singular_systems])
        return U, V


def realize(N_t: int, N_r: int, profile: TapProfile, M: int, rng) -> ChannelRealization:
    return ChannelRealization(draw_taps(N_t, N_r, profile, rng), profile, M)


def singular_values_batch(taps, M: int, profile: TapProfile, subcarriers=None) -> np.ndarray:
    """Singular values for a batch of tap sets, shape ``(..., M, min(N_r, N_t))``."""
    H = freq_response(taps, M, profile, subcarriers)
    return np.linalg.svd(H, compute_uv=False)


def singular_systems_batch(taps, M: int, profile: TapProfile):
    return svd_batch(freq_response(taps, M, profile))


def response_covariance(profile: TapProfile, M: int, subcarriers) -> np.ndarray:
    """``C[i, j] = E[h(m_i) h*(m_j)]`` for any single antenna pair."""
    ramp = phase_ramp(profile, M, subcarriers)
    return (ramp * np.asarray(profile.powers)) @ ramp.conj().T


def subcarrier_correlation(profile: TapProfile, M: int, delta: int) -> float:
    """Magnitude of the normalized correlation between subcarriers ``delta`` apart.

    ``|sum_l P_l exp(-2j pi delta tau_l / M)| / sum_l P_l``; for equal powers
    and unit-spaced delays this is the Dirichlet-kernel ratio
    ``|1 - e^{-j2pi delta L/M}| / (L |1 - e^{-j2pi delta/M}|)``.
    """
    if not 0 <= delta < M:
        raise ValueError(f"delta must lie in [0, {M}), got {delta}")
    P = np.asarray(profile.powers)
    tau = np.asarray(profile.delays)
    rho = abs(np.sum(P * np.exp(-2j * np.pi * delta * tau / M))) / P.sum()
    # Clean exact zeros of the Dirichlet kernel (delta a multiple of M/L).
    return float(0.0 if rho < 1e-13 else min(rho, 1.0))


def uncorrelated_groups(M: int, L: int) -> list[list[int]]:
    """Partition of the 0-based subcarriers into ``M/L`` groups ``{u, u+M/L, ...}``.

    With equal-power unit-spaced taps every pair inside a group is uncorrelated.
    """
    if L < 1 or M % L:
        raise ValueError("grouping unavailable")
    step = M // L
    return [[u + k * step for k in range(L)] for u in range(step)]
