"""Stand-alone coded-AWGN reference: (5,7) encoder, Gray QPSK, soft Viterbi.

Written without the package so it can cross-check the link chain.
"""

import numpy as np

SQ = 1 / np.sqrt(2)


def encode57(bits):
    s1 = s2 = 0
    out = []
    for b in list(bits) + [0, 0]:
        out.append(b ^ s2)  # 5 = 101
        out.append(b ^ s1 ^ s2)  # 7 = 111
        s1, s2 = b, s1
    return np.array(out, dtype=np.uint8)


def qpsk(coded):
    c = coded.reshape(-1, 2)
    return ((1 - 2.0 * c[:, 0]) + 1j * (1 - 2.0 * c[:, 1])) * SQ


def viterbi57(y, n_info):
    # soft correlation metric: bit b on an axis with sample r costs r*(2b-1)
    r = np.stack([y.real, y.imag], axis=1).reshape(-1)
    n_steps = n_info + 2
    INF = float("inf")
    pm = [0.0, INF, INF, INF]
    hist = []
    for t in range(n_steps):
        new = [INF] * 4
        back = [None] * 4
        r0, r1 = r[2 * t], r[2 * t + 1]
        for state in range(4):
            if pm[state] == INF:
                continue
            s1, s2 = state >> 1, state & 1
            for b in (0, 1):
                o0, o1 = b ^ s2, b ^ s1 ^ s2
                cost = pm[state] + r0 * (2 * o0 - 1) + r1 * (2 * o1 - 1)
                ns = (b << 1) | s1
                if cost < new[ns]:
                    new[ns], back[ns] = cost, (state, b)
        pm = new
        hist.append(back)
    state, bits = 0, []
    for back in reversed(hist):
        state, b = back[state]
        bits.append(b)
    return np.array(bits[::-1][:n_info], dtype=np.uint8)


def awgn_block_errors(snr_db, n_blocks, block_bits, rng):
    """Bit errors per block for rate-1/2 (5,7), QPSK, ``N0 = 1/gamma``."""
    N0 = 10 ** (-snr_db / 10)
    errs = []
    for _ in range(n_blocks):
        msg = rng.integers(0, 2, block_bits).astype(np.uint8)
        x = qpsk(encode57(msg))
        n = np.sqrt(N0 / 2) * (rng.standard_normal(x.size) + 1j * rng.standard_normal(x.size))
        errs.append(int(np.count_nonzero(viterbi57(x + n, block_bits) != msg)))
    return np.array(errs)


def rate_and_se(block_errors, block_bits):
    p = block_errors / block_bits
    return float(p.mean()), float(p.std(ddof=1) / np.sqrt(p.size))
