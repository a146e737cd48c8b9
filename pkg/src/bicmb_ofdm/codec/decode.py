"""ML bit metrics and soft-input Viterbi decoding."""

from __future__ import annotations

import numpy as np

from .code import CodeSpec

__all__ = ["bit_metric", "bit_metrics", "viterbi_decode"]


def bit_metrics(y, lam, constellation) -> np.ndarray:
    """All bit metrics ``min_{x in X_b^j} |y - lam x|^2``.

    ``y`` and ``lam`` broadcast together; the result has two trailing axes
    ``(bits_per_symbol, 2)`` indexed by label position ``j`` and bit value ``b``.
    """
    y = np.asarray(y, dtype=complex)
    lam = np.asarray(lam, dtype=float)
    if np.any(lam < 0):
        raise ValueError("subchannel gain must be non-negative")
    pts = constellation.points
    labels = constellation.labels  # (order, B)
    d2 = np.abs(y[..., None] - lam[..., None] * pts) ** 2  # (..., order)
    B = labels.shape[1]
    out = np.empty(d2.shape[:-1] + (B, 2))
    for j in range(B):
        for b in (0, 1):
            out[..., j, b] = d2[..., labels[:, j] == b].min(axis=-1)
    return out


def bit_metric(y: complex, lam: float, j: int, b: int, constellation) -> float:
    """Single metric for bit value ``b`` at 0-based label position ``j``."""
    return float(bit_metrics(y, lam, constellation)[j, b])


def viterbi_decode(metrics, code: CodeSpec) -> np.ndarray:
    """Minimum-metric path through a zero-terminated trellis.

    ``metrics`` has shape ``(..., n_steps * n_c, 2)`` holding the cost of each
    mother-code bit being 0 or 1 (punctured positions carry zeros).  Returns
    the ``n_steps - (K-1)`` information bits.  Among equal-metric paths the
    lexicographically smallest information sequence wins.
    """
    metrics = np.asarray(metrics, dtype=float)
    n_c = code.n_c
    if metrics.ndim < 2 or metrics.shape[-1] != 2 or metrics.shape[-2] % n_c:
        raise ValueError("metrics must have shape (..., n_steps * n_c, 2)")
    n_steps = metrics.shape[-2] // n_c
    mem = code.memory
    if n_steps <= mem:
        raise ValueError("block shorter than the encoder memory")
    lead = metrics.shape[:-2]
    m = metrics.reshape((-1, n_steps, n_c, 2))
    batch = m.shape[0]

    tr = code.trellis
    S = tr.n_states
    ns = np.arange(S)
    inp = ns >> (mem - 1)  # input bit that leads into each state
    pred = np.stack([(ns << 1) & (S - 1), ((ns << 1) & (S - 1)) | 1], axis=1)  # (S, 2)
    out_bits = tr.outputs[pred, inp[:, None]]  # (S, 2, n_c)
    j_idx = np.arange(n_c)

    pm = np.full((batch, S), np.inf)
    pm[:, 0] = 0.0
    rank = np.zeros((batch, S), dtype=np.int64)  # lexicographic rank of survivors
    choice = np.zeros((batch, n_steps, S), dtype=np.uint8)
    for t in range(n_steps):
        # branch costs (batch, S, 2)
        bm = m[:, t][:, j_idx, out_bits].sum(axis=-1)
        cand = pm[:, pred] + bm
        r = rank[:, pred]
        pick = (cand[..., 1] < cand[..., 0]) | (
            (cand[..., 1] == cand[..., 0]) & (r[..., 1] < r[..., 0])
        )
        choice[:, t] = pick
        sel = pick.astype(np.int64)
        pm = np.take_along_axis(cand, sel[..., None], axis=-1)[..., 0]
        prev_rank = np.take_along_axis(r, sel[..., None], axis=-1)[..., 0]
        key = prev_rank * 2 + inp
        rank = np.argsort(np.argsort(key, axis=1, kind="stable"), axis=1)

    # trace back from the zero state
    state = np.zeros(batch, dtype=np.int64)
    bits = np.zeros((batch, n_steps), dtype=np.uint8)
    for t in range(n_steps - 1, -1, -1):
        bits[:, t] = state >> (mem - 1)
        c = choice[np.arange(batch), t, state]
        state = pred[state, c]
    return bits[:, : n_steps - mem].reshape(lead + (n_steps - mem,))
