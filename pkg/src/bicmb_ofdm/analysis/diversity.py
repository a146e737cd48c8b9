"""Diversity order of error events and of whole coded beamforming systems."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..codec import CodeSpec, InterleaverSpec
from .spectra import AlphaSpectrum, enumerate_alpha_spectra, event_supports

__all__ = [
    "DiversityReport",
    "diversity_of",
    "full_diversity_condition",
    "full_diversity_condition_unequal",
    "max_achievable_diversity",
]


def _row_diversity(delta: int, N_t: int, N_r: int) -> int:
    return (N_r - delta + 1) * (N_t - delta + 1)


def diversity_of(A, N_t: int, N_r: int) -> int:
    """``D = sum_m (N_r - delta_m + 1)(N_t - delta_m + 1)`` over rows with ``a_m != 0``.

    ``delta_m`` is the 1-based index of the first nonzero entry of row ``m``.
    """
    mat = A.matrix if isinstance(A, AlphaSpectrum) else np.atleast_2d(np.asarray(A))
    if mat.shape[1] > min(N_t, N_r):
        raise ValueError("A has more subchannels than min(N_t, N_r)")
    if np.any(mat < 0):
        raise ValueError("alpha counts must be non-negative")
    if not mat.any():
        raise ValueError("not an error event")
    D = 0
    for row in mat:
        nz = np.flatnonzero(row)
        if nz.size:
            D += _row_diversity(int(nz[0]) + 1, N_t, N_r)
    return D


def _support_diversity(support, S: int, N_t: int, N_r: int) -> int:
    first: dict[int, int] = {}
    for k in support:
        m, s = divmod(k, S)
        first[m] = min(first.get(m, S), s)
    return sum(_row_diversity(s + 1, N_t, N_r) for s in first.values())


@dataclass(frozen=True)
class DiversityReport:
    per_event: list[tuple[AlphaSpectrum, int]]
    D_min: int
    dominant: AlphaSpectrum
    full_diversity: bool
    D_full: int

    def summary(self) -> str:
        return (
            f"D_min={self.D_min} (full={self.D_full}) dominant A={self.dominant} "
            f"d_H={self.dominant.d_H} full_diversity={str(self.full_diversity).lower()}"
        )


def max_achievable_diversity(code: CodeSpec, interleaver: InterleaverSpec | None, N_t: int,
                             N_r: int, S: int, M: int, max_dH: int | None = None,
                             exact_limit: int = 16) -> DiversityReport:
    """Worst-case diversity over all error events of the labelled trellis.

    ``M`` is the number of mutually independent subcarriers one codeword spans
    (``L = M``), so full diversity is ``N_r * N_t * M``.  Ties between events
    of equal ``D`` go to the smallest ``d_H``, then the lexicographically
    smallest ``A``.

    When ``S * M <= exact_limit`` the minimum over events of every weight is
    found first by support reachability; with ``max_dH=None`` the spectrum is
    then enumerated just deep enough to exhibit a minimising event, and an
    explicit ``max_dH`` that is too shallow raises.  Larger stream counts fall
    back to enumeration up to ``max_dH`` (default 8).
    """
    if not 1 <= S <= min(N_t, N_r):
        raise ValueError("S must lie in 1..min(N_t, N_r)")
    exact = None
    if S * M <= exact_limit:
        exact = min(_support_diversity(sup, S, N_t, N_r) for sup in event_supports(code, S, M))

    def report(spectra):
        per_event = [(a, diversity_of(a, N_t, N_r)) for a in spectra]
        dominant, D_min = min(per_event, key=lambda e: (e[1], e[0].d_H, e[0].A))
        D_full = N_r * N_t * M
        return DiversityReport(per_event, D_min, dominant, D_min == D_full, D_full)

    if max_dH is not None or exact is None:
        rep = report(enumerate_alpha_spectra(code, interleaver, S, M, max_dH or 8))
        if exact is not None and exact < rep.D_min:
            raise ValueError(
                f"events beyond d_H={max_dH} reach diversity {exact} < {rep.D_min}; raise max_dH"
            )
        return rep
    d = 1
    while True:
        try:
            rep = report(enumerate_alpha_spectra(code, interleaver, S, M, d))
        except ValueError as err:
            if "raise max_dH" not in str(err):
                raise
        else:
            if rep.D_min == exact:
                return rep
        d += 1


def full_diversity_condition(R_c, S: int, L: int) -> bool:
    """``R_c * S * L <= 1`` in exact rational arithmetic."""
    R = Fraction(R_c)
    if not 0 < R <= 1:
        raise ValueError("R_c must lie in (0, 1]")
    if S < 1 or L < 1:
        raise ValueError("S and L must be positive")
    return R * S * L <= 1


def full_diversity_condition_unequal(R_c, S_per_subcarrier) -> bool:
    """``R_c * sum_l S_l <= 1`` for a group whose subcarriers carry unequal stream counts."""
    R = Fraction(R_c)
    if not 0 < R <= 1:
        raise ValueError("R_c must lie in (0, 1]")
    S_list = [int(s) for s in S_per_subcarrier]
    if not S_list or min(S_list) < 1:
        raise ValueError("every subcarrier needs at least one stream")
    return R * sum(S_list) <= 1
