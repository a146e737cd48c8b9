"""End-to-end BICMB-OFDM link: encode, interleave, map, beamform, decode."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..channel import TapProfile, draw_taps, freq_response
from ..numerics import as_generator
from ..codec import (
    CodeSpec,
    InterleaverSpec,
    bit_metrics,
    deinterleave_metrics,
    depuncture,
    encode,
    interleave,
    viterbi_decode,
)
from .beamforming import beamform_chain, diagonal_chain, noise_variance
from .grouping import GroupingPermutation, grouping_permutation
from .modulation import Constellation, qam_map

__all__ = ["LinkConfig", "LinkFrame", "simulate_chunk", "transmit_receive"]


@dataclass(frozen=True)
class LinkConfig:
    N_t: int
    N_r: int
    S: int
    L: int
    M: int
    L_cp: int
    code: CodeSpec
    constellation: Constellation = field(default_factory=Constellation)
    profile: TapProfile | None = None
    grouping: bool = False
    snr_grid_db: tuple[float, ...] = (0.0,)
    block_bits: int = 1024

    def __post_init__(self):
        if self.profile is None:
            object.__setattr__(self, "profile", TapProfile.equal(self.L))
        if self.profile.L != self.L:
            raise ValueError("profile tap count differs from L")
        if not 1 <= self.S <= min(self.N_t, self.N_r):
            raise ValueError("S must lie in 1..min(N_t, N_r)")
        if self.L_cp < self.L:
            raise ValueError("ISI not absorbed")
        if self.M < self.L or self.M & (self.M - 1):
            raise ValueError("M must be a power of two no smaller than L")
        if self.grouping and self.M % self.L:
            raise ValueError("grouping unavailable")
        if self.block_bits < 1:
            raise ValueError("block_bits must be positive")
        object.__setattr__(self, "snr_grid_db", tuple(float(s) for s in self.snr_grid_db))

    @property
    def M_eff(self) -> int:
        """Subcarriers spanned by one codeword."""
        return self.L if self.grouping else self.M

    @property
    def n_codewords(self) -> int:
        """Codewords carried in parallel per channel realization."""
        return self.M // self.L if self.grouping else 1

    @property
    def interleaver(self) -> InterleaverSpec:
        return InterleaverSpec(self.S, self.M_eff, self.constellation.bits_per_symbol)

    @property
    def permutation(self) -> GroupingPermutation:
        return grouping_permutation(self.M, self.L if self.grouping else self.M, self.S)

    def frame(self) -> "LinkFrame":
        return LinkFrame.of(self)


@dataclass(frozen=True)
class LinkFrame:
    """Block bookkeeping: message padding, coded length and OFDM symbols."""

    msg_pad: int  # zero info bits appended so the puncture period divides the block
    n_steps: int
    n_coded: int
    tx_pad: int  # dummy coded bits to fill the last OFDM symbol
    n_symbols: int

    @classmethod
    def of(cls, cfg: LinkConfig) -> "LinkFrame":
        code = cfg.code
        steps = cfg.block_bits + code.memory
        msg_pad = (-steps) % code.period
        steps += msg_pad
        n_coded = steps // code.period * code.bits_per_period
        unit = cfg.interleaver.block_unit
        tx_pad = (-n_coded) % unit
        return cls(msg_pad, steps, n_coded, tx_pad, (n_coded + tx_pad) // unit)


def _transmit(messages: np.ndarray, cfg: LinkConfig, frame: LinkFrame) -> np.ndarray:
    """Messages ``(..., n_codewords, block_bits)`` -> symbols ``(..., K, M, S)``."""
    pad = [(0, 0)] * (messages.ndim - 1)
    u = np.pad(messages, pad + [(0, frame.msg_pad)])
    coded = encode(u, cfg.code)
    coded = np.pad(coded, pad + [(0, frame.tx_pad)])
    grid = interleave(coded, cfg.interleaver)  # (..., n_cw, K, M_eff, S, B)
    sym = qam_map(grid, cfg.constellation)[..., 0]  # (..., n_cw, K, M_eff, S)
    # group-major slots (codeword, member, subchannel) -> subcarrier slots
    sym = np.moveaxis(sym, -4, -3)  # (..., K, n_cw, M_eff, S)
    lead = sym.shape[:-3]
    slots = cfg.permutation.to_subcarriers(sym.reshape(lead + (-1,)))
    return slots.reshape(lead + (cfg.M, cfg.S))


def _receive(y: np.ndarray, lambdas: np.ndarray, cfg: LinkConfig, frame: LinkFrame) -> np.ndarray:
    """Combiner outputs ``(..., K, M, S)`` -> decoded ``(..., n_codewords, block_bits)``."""
    met = bit_metrics(y, np.asarray(lambdas)[..., None, :, :], cfg.constellation)
    # (..., K, M, S, B, 2) -> group-major
    lead = met.shape[:-4]
    B = met.shape[-2]
    flat = met.reshape(lead + (cfg.M * cfg.S, B, 2))
    flat = cfg.permutation.to_streams(flat, axis=-3)
    grid = flat.reshape(lead + (cfg.n_codewords, cfg.M_eff, cfg.S, B, 2))
    grid = np.moveaxis(grid, -5, -6)  # (..., n_cw, K, M_eff, S, B, 2)
    pairs = deinterleave_metrics(grid, cfg.interleaver)[..., : frame.n_coded, :]
    full = depuncture(pairs, cfg.code, frame.n_steps)
    decoded = viterbi_decode(full, cfg.code)
    return decoded[..., : cfg.block_bits]


def transmit_receive(messages, cfg: LinkConfig, realization, rng=None, N0: float = 0.0,
                     chain: str = "full") -> np.ndarray:
    """Send ``messages`` over one channel realization and return the decoded bits.

    ``messages`` has shape ``(n_codewords, block_bits)`` (or ``(block_bits,)``
    when a single codeword is carried).  ``chain='full'`` runs the explicit
    OFDM/matrix chain; ``'diagonal'`` uses ``y = lambda x + n``.
    """
    messages = np.asarray(messages, dtype=np.uint8)
    squeeze = messages.ndim == 1
    if squeeze:
        messages = messages[None]
    if messages.shape != (cfg.n_codewords, cfg.block_bits):
        raise ValueError(
            f"expected messages of shape {(cfg.n_codewords, cfg.block_bits)}, got {messages.shape}"
        )
    frame = cfg.frame()
    x = _transmit(messages, cfg, frame)
    lam = realization.singular_values[:, : cfg.S]
    if chain == "full":
        y = beamform_chain(x, realization, N0, rng, L_cp=cfg.L_cp)
    elif chain == "diagonal":
        y = diagonal_chain(x, lam, N0, rng)
    else:
        raise ValueError(f"unknown chain {chain!r}")
    out = _receive(y, lam, cfg, frame)
    return out[0] if squeeze else out


def simulate_chunk(cfg: LinkConfig, snr_db: float, n_trials: int, rng) -> tuple[int, int]:
    """Independent channel draws through the diagonal model; returns ``(bit_errors, bits)``."""
    g = as_generator(rng)
    frame = cfg.frame()
    msgs = g.integers(0, 2, size=(n_trials, cfg.n_codewords, cfg.block_bits), dtype=np.uint8)
    taps = draw_taps(cfg.N_t, cfg.N_r, cfg.profile, g, size=n_trials)
    H = freq_response(taps, cfg.M, cfg.profile)
    lam = np.linalg.svd(H, compute_uv=False)[..., : cfg.S]  # (T, M, S)
    x = _transmit(msgs, cfg, frame)
    y = diagonal_chain(x, lam, noise_variance(snr_db, cfg.N_t), g)
    dec = _receive(y, lam, cfg, frame)
    return int(np.count_nonzero(dec != msgs)), int(msgs.size)
