"""Monte-Carlo estimate of the PEP expectation and diversity-slope fitting.

The quantity is ``E[exp(-(d_min^2 / 4N0) * sum_{m,s} alpha_{m,s} lambda_s(m)^2)]``
over the tapped-delay-line channel.  The responses of the selected
subcarriers are jointly Gaussian, one ``N_r x N_t`` matrix per subcarrier with
covariance ``C = R diag(P) R^H`` across subcarriers (``R`` the DFT phase ramp).
Writing ``C = B B^H`` with ``B`` of full column rank gives
``H(m) = sum_k B[m, k] Z_k`` with i.i.d. CN(0, 1) innovation matrices ``Z_k``;
this is the same law as drawing taps and transforming them.

At high SNR the expectation is dominated by rare draws where some
innovations are small, so plain sampling needs impractically many trials.
``method="is"`` draws each innovation from a mixture of shrunk Gaussians and
reweights by the exact likelihood ratio (balance heuristic); ``method="taps"``
draws taps directly and averages without weights.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..channel import TapProfile, draw_taps, freq_response, phase_ramp, response_covariance
from ..numerics import SeededRng
from .spectra import AlphaSpectrum

__all__ = ["PepCurve", "estimate_slope", "pep_expectation_mc"]

MIN_TRIALS = 100_000


@dataclass(frozen=True)
class PepCurve:
    snr_db: np.ndarray
    values: np.ndarray
    std_errors: np.ndarray
    trials: int
    method: str = "is"

    def rows(self):
        for g, v, e in zip(self.snr_db, self.values, self.std_errors):
            yield float(g), float(v), float(e)


def _innovation_factor(profile: TapProfile, M: int, subcarriers) -> np.ndarray:
    """``B`` with ``B B^H = C`` and no zero-variance columns."""
    C = response_covariance(profile, M, subcarriers)
    w, U = np.linalg.eigh(C)
    keep = w > 1e-10 * max(w.max(), 1.0)
    return U[:, keep] * np.sqrt(w[keep])


def _eig_desc(H: np.ndarray) -> np.ndarray:
    """Squared singular values, descending, for a batch of matrices."""
    rows, cols = H.shape[-2:]
    G = H @ np.swapaxes(H.conj(), -1, -2) if rows <= cols else np.swapaxes(H.conj(), -1, -2) @ H
    ev = np.linalg.eigvalsh(G)[..., ::-1]
    return np.clip(ev, 0.0, None)


def _metric(lam2: np.ndarray, A: np.ndarray) -> np.ndarray:
    S = A.shape[1]
    return np.einsum("tms,ms->t", lam2[..., :S], A)


def _log_ratio(x: np.ndarray, scales2: np.ndarray, weights: np.ndarray, n: int) -> np.ndarray:
    """``log p(Z) - log q(Z)`` for ``|Z|_F^2 = x`` with ``n`` complex entries."""
    # q_j / p = s_j^{-2n} exp(-x (1/s_j^2 - 1))
    lw = np.log(weights)[None, :] - n * np.log(scales2)[None, :] - x[:, None] * (1.0 / scales2 - 1.0)[None, :]
    top = lw.max(axis=1)
    return -(top + np.log(np.exp(lw - top[:, None]).sum(axis=1)))


def _chunk_is(g, B, A, N_t, N_r, c0, n):
    r = B.shape[1]
    n_ent = N_t * N_r
    weights = np.full(4, 0.25)
    log_w = np.zeros(n)
    Z = np.empty((n, r, N_r, N_t), dtype=complex)
    a_max = float(A.max())
    for k in range(r):
        ck = c0 * a_max * float(np.sum(np.abs(B[:, k]) ** 2))
        scales2 = np.array([1.0, 1.0 / (1.0 + ck / 4), 1.0 / (1.0 + ck), 1.0 / (1.0 + 4 * ck)])
        comp = g.choice(4, size=n, p=weights)
        s = np.sqrt(scales2[comp] / 2.0)[:, None, None]
        Zk = s * (g.standard_normal((n, N_r, N_t)) + 1j * g.standard_normal((n, N_r, N_t)))
        Z[:, k] = Zk
        x = np.sum(np.abs(Zk) ** 2, axis=(-1, -2))
        log_w += _log_ratio(x, scales2, weights, n_ent)
    H = np.einsum("mk,tkrc->tmrc", B, Z)
    f = np.exp(-c0 * _metric(_eig_desc(H), A) + log_w)
    return f


def _chunk_taps(g, profile, M, subcarriers, A, N_t, N_r, c0, n):
    taps = draw_taps(N_t, N_r, profile, g, size=n)
    H = freq_response(taps, M, profile, subcarriers)
    return np.exp(-c0 * _metric(_eig_desc(H), A))


def pep_expectation_mc(A, N_t: int, N_r: int, snr_db, trials: int, rng, *,
                       profile: TapProfile | None = None, M: int = 1, subcarriers=None,
                       d_min2: float = 2.0, method: str = "is",
                       chunk: int = 100_000) -> PepCurve:
    """Estimate the PEP expectation for spectrum ``A`` at each SNR (dB).

    Row ``i`` of ``A`` is carried by subcarrier ``subcarriers[i]`` of an
    ``M``-point OFDM system with tap profile ``profile`` (default: one tap).
    ``N0 = N_t / gamma``.  Each SNR point uses its own random stream derived
    from ``rng`` and the point index, so points are independent and the curve
    is reproducible.
    """
    mat = A.matrix if isinstance(A, AlphaSpectrum) else np.atleast_2d(np.asarray(A))
    if mat.ndim != 2 or np.any(mat < 0) or not mat.any():
        raise ValueError("degenerate A: need a non-negative, nonzero alpha matrix")
    if mat.shape[1] > min(N_t, N_r):
        raise ValueError("A has more subchannels than min(N_t, N_r)")
    if trials < MIN_TRIALS:
        raise ValueError(f"trials must be at least {MIN_TRIALS}")
    if method not in ("is", "taps"):
        raise ValueError(f"unknown method {method!r}")
    profile = TapProfile.equal(1) if profile is None else profile
    subcarriers = np.arange(mat.shape[0]) if subcarriers is None else np.asarray(subcarriers)
    if subcarriers.shape != (mat.shape[0],):
        raise ValueError("need one subcarrier index per row of A")
    phase_ramp(profile, M, subcarriers)  # validates indices and delay spread
    mat = mat.astype(float)
    base = rng if isinstance(rng, SeededRng) else SeededRng(int(rng))
    B = _innovation_factor(profile, M, subcarriers)

    snr_db = np.atleast_1d(np.asarray(snr_db, dtype=float))
    vals = np.empty(snr_db.size)
    errs = np.empty(snr_db.size)
    for i, gdb in enumerate(snr_db):
        c0 = d_min2 * 10.0 ** (gdb / 10.0) / (4.0 * N_t)
        s1 = s2 = 0.0
        done = 0
        j = 0
        while done < trials:
            n = min(chunk, trials - done)
            g = base.derive(i, j).generator
            if method == "is":
                f = _chunk_is(g, B, mat, N_t, N_r, c0, n)
            else:
                f = _chunk_taps(g, profile, M, subcarriers, mat, N_t, N_r, c0, n)
            s1 += float(f.sum())
            s2 += float(np.square(f).sum())
            done += n
            j += 1
        mean = s1 / trials
        var = max(s2 / trials - mean * mean, 0.0)
        vals[i] = mean
        errs[i] = np.sqrt(var / trials)
    return PepCurve(snr_db, vals, errs, int(trials), method)


def estimate_slope(curve, db_window=(15.0, 30.0)) -> float:
    """Least-squares diversity estimate: minus the slope of log10(rate) vs log10(gamma).

    ``curve`` is a :class:`PepCurve`, a BER curve, or a ``(snr_db, values)`` pair.
    """
    if isinstance(curve, tuple):
        snr_db, values = curve
    else:
        snr_db = curve.snr_db
        values = curve.values if hasattr(curve, "values") else curve.ber
    snr_db = np.asarray(snr_db, dtype=float)
    values = np.asarray(values, dtype=float)
    lo, hi = db_window
    sel = (snr_db >= lo - 1e-9) & (snr_db <= hi + 1e-9)
    if sel.sum() < 3:
        raise ValueError("need at least 3 grid points in the window")
    if np.any(values[sel] <= 0):
        raise ValueError("insufficient trials: zero estimate in window")
    slope = np.polyfit(snr_db[sel] / 10.0, np.log10(values[sel]), 1)[0]
    return float(-slope)
