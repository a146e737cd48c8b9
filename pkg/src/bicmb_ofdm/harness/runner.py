"""Reproducible sweeps: BER, PEP, analysis reports and correlation tables."""

from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..analysis import (
    diversity_of,
    estimate_slope,
    enumerate_alpha_spectra,
    full_diversity_condition,
    max_achievable_diversity,
    pep_expectation_mc,
)
from ..channel import subcarrier_correlation
from ..numerics import SeededRng
from ..phy import simulate_chunk
from .config import ExperimentConfig, dump_config

__all__ = ["BerCurve", "StopDecision", "predicted_diversity", "run", "run_ber", "stop_rule"]

ZERO_EVENT_FACTOR = 3.7


@dataclass(frozen=True)
class StopDecision:
    stop: bool
    reason: str = ""
    low_confidence: bool = False

    def __str__(self) -> str:
        return "stop" if self.stop else "continue"


def stop_rule(errors: int, trials: int, config: ExperimentConfig) -> StopDecision:
    """Stop once ``target_errors`` bit errors are seen or ``max_trials`` bits are spent.

    Errors cluster within a channel draw, so the error target only counts
    after ``min_blocks`` independent draws (``trials`` is in bits).
    """
    blocks = trials // (config.link.n_codewords * config.block_bits)
    if errors >= config.target_errors and blocks >= config.min_blocks:
        return StopDecision(True, "target errors reached")
    if trials >= config.max_trials:
        return StopDecision(True, "trial cap reached", low_confidence=True)
    return StopDecision(False)


@dataclass
class BerCurve:
    snr_db: list[float] = field(default_factory=list)
    bit_errors: list[int] = field(default_factory=list)
    trials: list[int] = field(default_factory=list)
    flags: list[str] = field(default_factory=list)
    chunk_errors: list[list[int]] = field(default_factory=list)

    @property
    def ber(self) -> np.ndarray:
        """``errors / trials``; a zero count is reported as the bound ``3.7 / trials``."""
        e = np.asarray(self.bit_errors, dtype=float)
        n = np.asarray(self.trials, dtype=float)
        return np.where(e > 0, e / n, ZERO_EVENT_FACTOR / n)

    @property
    def ci95(self) -> np.ndarray:
        """Binomial normal-approximation radius ``1.96 sqrt(p(1-p)/n)``."""
        n = np.asarray(self.trials, dtype=float)
        p = np.asarray(self.bit_errors, dtype=float) / n
        return 1.96 * np.sqrt(p * (1.0 - p) / n)

    def rows(self):
        for i, s in enumerate(self.snr_db):
            yield s, self.trials[i], self.bit_errors[i], float(self.ber[i]), float(self.ci95[i])


def _chunk_job(args):
    link, snr_db, n_blocks, seed, i, j = args
    return simulate_chunk(link, snr_db, n_blocks, SeededRng(seed, (i, j)))


def _sweep_point(cfg: ExperimentConfig, i: int, snr_db: float, pool) -> tuple[int, int, list[int], StopDecision]:
    errors = trials = 0
    per_chunk: list[int] = []
    j = 0
    batch = max(1, cfg.workers)
    while True:
        jobs = [(cfg.link, snr_db, cfg.chunk_blocks, cfg.seed, i, j + k) for k in range(batch)]
        results = list(pool.map(_chunk_job, jobs)) if pool is not None else [_chunk_job(a) for a in jobs]
        # reduce in chunk order; chunks past the stopping point are discarded so
        # the outcome does not depend on the batch size
        for e, n in results:
            errors += e
            trials += n
            per_chunk.append(e)
            decision = stop_rule(errors, trials, cfg)
            if decision.stop:
                return errors, trials, per_chunk, decision
        j += batch


def run_ber(cfg: ExperimentConfig) -> BerCurve:
    curve = BerCurve()
    pool = ProcessPoolExecutor(cfg.workers) if cfg.workers > 1 else None
    try:
        for i, s in enumerate(cfg.snr_db):
            e, n, per_chunk, decision = _sweep_point(cfg, i, s, pool)
            flag = ""
            if e == 0:
                flag = "zero errors: ber is the 3.7/trials bound"
            elif decision.low_confidence:
                flag = f"low confidence: {e} errors at trial cap"
            curve.snr_db.append(s)
            curve.bit_errors.append(e)
            curve.trials.append(n)
            curve.flags.append(flag)
            curve.chunk_errors.append(per_chunk)
    finally:
        if pool is not None:
            pool.shutdown()
    return curve


def predicted_diversity(cfg: ExperimentConfig) -> tuple[int, str]:
    """Analysis-module prediction for the configured link.

    A grouped link is an ``L = M`` system per group.  Without grouping the
    codeword spans all ``M`` correlated subcarriers; the value then treats
    them as independent and is capped at ``N_r N_t L``, so it is an upper bound.
    """
    full = cfg.N_r * cfg.N_t * cfg.L
    if cfg.grouping or cfg.M == cfg.L:
        rep = max_achievable_diversity(cfg.code, None, cfg.N_t, cfg.N_r, cfg.S, cfg.L, cfg.max_dH)
        return rep.D_min, "grouped (L=M per group)"
    rep = max_achievable_diversity(cfg.code, None, cfg.N_t, cfg.N_r, cfg.S, cfg.M, cfg.max_dH)
    return min(rep.D_min, full), "upper bound (correlated subcarriers)"


def _fmt(x: float) -> str:
    return repr(float(x)) if math.isfinite(x) else str(x)


def _write_csv(path: Path, header, rows) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_fmt(v) if isinstance(v, float) else v for v in r])


def _slope_text(snr_db, values, window) -> str:
    try:
        return f"{estimate_slope((snr_db, values), window):.3f}"
    except ValueError as err:
        return f"n/a ({err})"


def _window(cfg: ExperimentConfig):
    if cfg.slope_window_db is not None:
        return tuple(cfg.slope_window_db)
    grid = sorted(cfg.snr_db)
    return (grid[-3], grid[-1]) if len(grid) >= 3 else (grid[0], grid[-1])


def _run_ber(cfg: ExperimentConfig, out: Path) -> list[str]:
    curve = run_ber(cfg)
    _write_csv(out / "ber.csv", ["snr_db", "trials", "bit_errors", "ber", "ci95"], curve.rows())
    D, basis = predicted_diversity(cfg)
    lines = [f"predicted diversity: {D} [{basis}]",
             f"estimated slope over {_window(cfg)} dB: {_slope_text(curve.snr_db, curve.ber, _window(cfg))}"]
    for s, f in zip(curve.snr_db, curve.flags):
        if f:
            lines.append(f"snr {s:g} dB: {f}")
    return lines


def _run_pep(cfg: ExperimentConfig, out: Path) -> list[str]:
    A = np.asarray(cfg.alpha)
    curve = pep_expectation_mc(
        A, cfg.N_t, cfg.N_r, cfg.snr_db, cfg.pep_trials, SeededRng(cfg.seed),
        profile=cfg.tap_profile, M=cfg.M, subcarriers=cfg.subcarriers,
        d_min2=cfg.link.constellation.d_min ** 2, method=cfg.pep_method,
    )
    _write_csv(out / "pep.csv", ["snr_db", "trials", "pep", "std_error"],
               ((g, curve.trials, v, e) for g, v, e in curve.rows()))
    window = tuple(cfg.slope_window_db) if cfg.slope_window_db else (15.0, 30.0)
    return [f"alpha: {A.tolist()} subcarriers: {cfg.subcarriers}",
            f"diversity_of (independent rows): {diversity_of(A, cfg.N_t, cfg.N_r)}",
            f"estimated slope over {window} dB: {_slope_text(curve.snr_db, curve.values, window)}"]


def _run_analyze(cfg: ExperimentConfig, out: Path) -> list[str]:
    M = cfg.L  # grouped / L = M analysis
    rep = max_achievable_diversity(cfg.code, None, cfg.N_t, cfg.N_r, cfg.S, M, cfg.max_dH)
    depth = max(a.d_H for a, _ in rep.per_event)
    spectra = enumerate_alpha_spectra(cfg.code, None, cfg.S, M, depth)
    rows = ((a.d_H, str(a), mult, diversity_of(a, cfg.N_t, cfg.N_r)) for a, mult in spectra.items())
    _write_csv(out / "spectra.csv", ["d_H", "A", "multiplicity", "D"], rows)
    cond = full_diversity_condition(cfg.code.rate, cfg.S, cfg.L)
    return [
        f"code {cfg.code.octal()} rate {cfg.code.rate} S={cfg.S} L=M={M} {cfg.N_t}x{cfg.N_r}",
        f"dominant A={rep.dominant} d_H={rep.dominant.d_H}",
        f"D={rep.D_min}",
        f"full diversity N_r*N_t*L={rep.D_full}",
        f"full_diversity={str(rep.full_diversity).lower()}",
        f"condition R_c*S*L<=1: {str(cond).lower()}",
    ]


def _run_correlate(cfg: ExperimentConfig, out: Path) -> list[str]:
    prof = cfg.tap_profile
    rows = [(d, subcarrier_correlation(prof, cfg.M, d)) for d in range(cfg.M)]
    _write_csv(out / "correlation.csv", ["delta", "rho"], rows)
    zeros = [d for d, r in rows if r == 0.0]
    return [f"profile {cfg.profile} L={cfg.L} M={cfg.M}",
            f"deltas with rho = 0: {zeros}"]


_MODES = {"ber": _run_ber, "pep": _run_pep, "analyze": _run_analyze, "correlate": _run_correlate}


def run(cfg: ExperimentConfig) -> Path:
    """Run the configured mode; writes results CSV, ``config.yaml`` and ``summary.txt``."""
    out = Path(cfg.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        (out / "config.yaml").write_text(dump_config(cfg))
    except OSError as err:
        raise OSError(f"cannot write to {out}: {err}") from err
    lines = [f"mode: {cfg.mode}", f"seed: {cfg.seed}"] + _MODES[cfg.mode](cfg, out)
    (out / "summary.txt").write_text("\n".join(lines) + "\n")
    return out
