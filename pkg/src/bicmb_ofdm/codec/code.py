"""Feed-forward convolutional codes, their trellis, and puncturing."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

__all__ = [
    "CodeSpec",
    "Trellis",
    "conv_encode",
    "depuncture",
    "encode",
    "puncture",
    "standard_code",
]


def _parity(x: int) -> int:
    return bin(x).count("1") & 1


@dataclass(frozen=True)
class Trellis:
    """State machine of a rate-1/n feed-forward encoder.

    The state holds the previous ``K-1`` input bits, most recent in the high
    bit.  ``next_state[s, b]`` and ``outputs[s, b, :]`` give the transition for
    input bit ``b``.
    """

    next_state: np.ndarray
    outputs: np.ndarray

    @property
    def n_states(self) -> int:
        return self.next_state.shape[0]

    def step(self, state: int, bit: int) -> tuple[int, tuple[int, ...]]:
        return int(self.next_state[state, bit]), tuple(int(o) for o in self.outputs[state, bit])


@dataclass(frozen=True)
class CodeSpec:
    """Convolutional code with optional periodic puncturing.

    ``generators`` are integers written in octal; the most significant bit of
    each generator taps the current input bit.  ``puncture`` is an
    ``n_c x period`` 0/1 matrix: row ``j`` is generator output ``j``, column
    ``t`` is the trellis step modulo the period.
    """

    generators: tuple[int, ...]
    constraint_length: int
    puncture: tuple[tuple[int, ...], ...] | None = None
    k_c: int = 1
    _trellis: Trellis = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(int(g) for g in self.generators))
        if self.k_c != 1:
            raise ValueError("only k_c = 1 mother codes are supported")
        K = self.constraint_length
        if K < 2:
            raise ValueError("constraint length must be >= 2")
        if not self.generators:
            raise ValueError("at least one generator required")
        for g in self.generators:
            if not 0 < g < (1 << K):
                raise ValueError(f"generator {g:o} does not fit constraint length {K}")
        if self.puncture is not None:
            pat = tuple(tuple(int(v) for v in row) for row in self.puncture)
            object.__setattr__(self, "puncture", pat)
            if len(pat) != self.n_c or len({len(r) for r in pat}) != 1:
                raise ValueError("puncture pattern must have n_c rows of equal length")
            if any(v not in (0, 1) for r in pat for v in r):
                raise ValueError("puncture pattern must be 0/1")
            if sum(map(sum, pat)) < self.k_c * len(pat[0]):
                raise ValueError("puncture pattern keeps too few bits for a valid rate")
        object.__setattr__(self, "_trellis", self._build_trellis())

    @classmethod
    def from_octal(cls, *generators: str, puncture=None) -> "CodeSpec":
        gens = tuple(int(str(g), 8) for g in generators)
        K = max(g.bit_length() for g in gens)
        return cls(gens, K, puncture)

    @property
    def n_c(self) -> int:
        return len(self.generators)

    @property
    def memory(self) -> int:
        return self.constraint_length - 1

    @property
    def period(self) -> int:
        return 1 if self.puncture is None else len(self.puncture[0])

    @property
    def pattern(self) -> np.ndarray:
        if self.puncture is None:
            return np.ones((self.n_c, 1), dtype=np.uint8)
        return np.array(self.puncture, dtype=np.uint8)

    @property
    def bits_per_period(self) -> int:
        return int(self.pattern.sum())

    @property
    def rate(self) -> Fraction:
        return Fraction(self.k_c * self.period, self.bits_per_period)

    @property
    def trellis(self) -> Trellis:
        return self._trellis

    def octal(self) -> list[str]:
        return [format(g, "o") for g in self.generators]

    def _build_trellis(self) -> Trellis:
        K = self.constraint_length
        n_states = 1 << (K - 1)
        nxt = np.zeros((n_states, 2), dtype=np.int64)
        out = np.zeros((n_states, 2, self.n_c), dtype=np.uint8)
        for s in range(n_states):
            for b in (0, 1):
                reg = (b << (K - 1)) | s
                nxt[s, b] = reg >> 1
                out[s, b] = [_parity(reg & g) for g in self.generators]
        nxt.setflags(write=False)
        out.setflags(write=False)
        return Trellis(nxt, out)

    @cached_property
    def free_distance(self) -> int:
        """Smallest transmitted weight of a path leaving and re-entering state 0.

        With puncturing the event may start at any step of the period, so the
        search runs over ``(state, step mod period)``.
        """
        import heapq

        tr = self.trellis
        pat = self.pattern
        P = self.period

        def weight(o, step):
            return int(sum(b for b, keep in zip(o, pat[:, step]) if keep))

        heap = []
        for step in range(P):
            s0, o0 = tr.step(0, 1)
            heapq.heappush(heap, (weight(o0, step), s0, (step + 1) % P))
        best: dict = {}
        while heap:
            w, s, ph = heapq.heappop(heap)
            if s == 0:
                return w
            if best.get((s, ph), 1 << 30) <= w:
                continue
            best[(s, ph)] = w
            for b in (0, 1):
                ns, o = tr.step(s, b)
                heapq.heappush(heap, (w + weight(o, ph), ns, (ph + 1) % P))
        raise RuntimeError("no error event found")


def standard_code(rate: str) -> CodeSpec:
    """Codes used throughout: (5,7,7,7), (5,7) and its rate-2/3, 4/5 punctures."""
    codes = {
        "1/4": CodeSpec.from_octal("5", "7", "7", "7"),
        "1/2": CodeSpec.from_octal("5", "7"),
        # puncturing the 7-output on alternate steps would make (5,7) catastrophic
        "2/3": CodeSpec.from_octal("5", "7", puncture=((1, 0), (1, 1))),
        "4/5": CodeSpec.from_octal("5", "7", puncture=((1, 0, 1, 1), (1, 1, 0, 0))),
    }
    key = str(rate).replace(" ", "")
    if key not in codes:
        raise ValueError(f"no standard code for rate {rate!r}; choose from {sorted(codes)}")
    return codes[key]


def conv_encode(bits, code: CodeSpec) -> np.ndarray:
    """Zero-tail encode along the last axis (``K-1`` flush bits appended).

    Output length is ``(N + K - 1) * n_c``, ordered step by step.
    """
    u = np.asarray(bits, dtype=np.uint8)
    if u.shape[-1] < 1:
        raise ValueError("empty message")
    K = code.constraint_length
    pad = [(0, 0)] * (u.ndim - 1)
    u = np.pad(u, pad + [(K - 1, K - 1)])  # leading zeros = initial state
    n = u.shape[-1] - (K - 1)
    out = np.zeros(u.shape[:-1] + (n, code.n_c), dtype=np.uint8)
    for j, g in enumerate(code.generators):
        for i in range(K):
            if (g >> (K - 1 - i)) & 1:
                # tap i looks i steps into the past
                out[..., j] ^= u[..., K - 1 - i : K - 1 - i + n]
    return out.reshape(u.shape[:-1] + (n * code.n_c,))


def _keep_mask(code: CodeSpec, n_steps: int) -> np.ndarray:
    pat = code.pattern
    if n_steps % pat.shape[1]:
        raise ValueError(
            f"puncture period {pat.shape[1]} does not divide block of {n_steps} steps"
        )
    return np.tile(pat.T, (n_steps // pat.shape[1], 1)).reshape(-1).astype(bool)


def puncture(coded, code: CodeSpec) -> np.ndarray:
    """Delete coded bits according to the code's puncture pattern (last axis)."""
    coded = np.asarray(coded)
    if coded.shape[-1] % code.n_c:
        raise ValueError("coded length is not a multiple of n_c")
    mask = _keep_mask(code, coded.shape[-1] // code.n_c)
    return coded[..., mask]


def depuncture(metrics, code: CodeSpec, n_steps: int) -> np.ndarray:
    """Re-insert zero metric pairs at punctured positions.

    ``metrics`` has shape ``(..., n_kept, 2)``; the result covers all
    ``n_steps * n_c`` mother-code positions.
    """
    metrics = np.asarray(metrics, dtype=float)
    mask = _keep_mask(code, n_steps)
    if metrics.shape[-2] != mask.sum():
        raise ValueError(
            f"expected {int(mask.sum())} metric pairs for {n_steps} steps, got {metrics.shape[-2]}"
        )
    out = np.zeros(metrics.shape[:-2] + (mask.size, 2))
    out[..., mask, :] = metrics
    return out


def encode(bits, code: CodeSpec) -> np.ndarray:
    """Encode and puncture."""
    return puncture(conv_encode(bits, code), code)
