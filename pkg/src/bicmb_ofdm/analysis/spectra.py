"""Alpha-spectrum enumeration over the code trellis labelled by stream.

Coded bits surviving the puncturer are dealt to ``S*M`` streams by the
rotation interleaver: surviving bit ``k`` goes to stream ``k mod S*M``, which
is subchannel ``s = stream % S`` of subcarrier ``m = stream // S``.  The
labelled product trellis has nodes ``(code state, phase)`` where the phase is
``(trellis step mod puncture period, surviving-bit counter mod S*M)``.  An
error event leaves state 0 on input 1 from any steady-state phase and ends on
its first return to state 0.

Three independent routes produce the spectrum: frontier aggregation
(``"dp"``), explicit path search (``"dfs"``) and the matrix series
``g t + sum_u g F^u t`` (``"series"``).
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..codec import CodeSpec, InterleaverSpec

__all__ = [
    "AlphaSpectrum",
    "ProductTrellis",
    "enumerate_alpha_spectra",
    "event_supports",
    "transfer_series",
]


@dataclass(frozen=True, order=True)
class AlphaSpectrum:
    """Per-(subcarrier, subchannel) counts of erroneous coded bits of one error event."""

    d_H: int
    A: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        A = tuple(tuple(int(v) for v in row) for row in self.A)
        object.__setattr__(self, "A", A)
        if len({len(r) for r in A}) > 1:
            raise ValueError("A must be rectangular")
        if any(v < 0 for r in A for v in r):
            raise ValueError("alpha counts must be non-negative")
        if sum(map(sum, A)) != self.d_H:
            raise ValueError("sum of alpha counts must equal d_H")

    @classmethod
    def from_matrix(cls, A) -> "AlphaSpectrum":
        A = np.atleast_2d(np.asarray(A, dtype=np.int64))
        return cls(int(A.sum()), tuple(map(tuple, A.tolist())))

    @classmethod
    def from_streams(cls, counts, S: int) -> "AlphaSpectrum":
        counts = tuple(counts)
        rows = tuple(counts[m * S : (m + 1) * S] for m in range(len(counts) // S))
        return cls(sum(counts), rows)

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.A, dtype=np.int64)

    @property
    def M(self) -> int:
        return len(self.A)

    @property
    def S(self) -> int:
        return len(self.A[0])

    def __str__(self) -> str:
        return "[" + "; ".join(" ".join(map(str, r)) for r in self.A) + "]"


class ProductTrellis:
    """Code trellis times the (puncture, interleaver) phase, with stream labels."""

    def __init__(self, code: CodeSpec, S: int, M: int):
        if S < 1 or M < 1:
            raise ValueError("S and M must be positive")
        self.code = code
        self.S = S
        self.M = M
        self.n_streams = S * M
        self.pattern = code.pattern  # (n_c, period)
        self._orbit = self._phase_orbit()

    def _phase_orbit(self) -> list[tuple[int, int]]:
        # phases visited in steady state, in time order
        P = self.code.period
        per = int(self.pattern.sum())
        seen, phase = [], (0, 0)
        while phase not in seen:
            seen.append(phase)
            step, ctr = phase
            ctr = (ctr + int(self.pattern[:, step].sum())) % self.n_streams
            phase = ((step + 1) % P, ctr)
        assert per > 0
        return seen

    @property
    def start_phases(self) -> list[tuple[int, int]]:
        return list(self._orbit)

    def branch(self, state: int, phase: tuple[int, int], bit: int):
        """Return ``(next_state, next_phase, streams hit)`` for one input bit."""
        step, ctr = phase
        ns, out = self.code.trellis.step(state, bit)
        hits = []
        for j in range(self.code.n_c):
            if self.pattern[j, step]:
                if out[j]:
                    hits.append(ctr % self.n_streams)
                ctr += 1
        nphase = ((step + 1) % self.code.period, ctr % self.n_streams)
        return ns, nphase, tuple(hits)

    @cached_property
    def nodes(self) -> list[tuple[int, tuple[int, int]]]:
        return [(s, ph) for s in range(1, self.code.trellis.n_states) for ph in self._orbit]

    def check_noncatastrophic(self) -> None:
        """Fail if a zero-weight cycle exists among nonzero states."""
        adj = defaultdict(list)
        for s, ph in self.nodes:
            for b in (0, 1):
                ns, nph, hits = self.branch(s, ph, b)
                if ns != 0 and not hits:
                    adj[(s, ph)].append((ns, nph))
        color = {}

        def visit(u):
            color[u] = 1
            for v in adj[u]:
                c = color.get(v, 0)
                if c == 1:
                    return True
                if c == 0 and visit(v):
                    return True
            color[u] = 2
            return False

        for u in list(adj):
            if color.get(u, 0) == 0 and visit(u):
                raise ValueError("catastrophic: zero-weight cycle among nonzero states")


def _add(label: tuple[int, ...], hits: tuple[int, ...]) -> tuple[int, ...]:
    if not hits:
        return label
    lab = list(label)
    for h in hits:
        lab[h] += 1
    return tuple(lab)


def _check_interleaver(interleaver, S: int, M: int) -> None:
    if interleaver is None:
        return
    if not isinstance(interleaver, InterleaverSpec):
        raise TypeError("interleaver must be an InterleaverSpec")
    if interleaver.kind != "rotation":
        raise ValueError("only rotation interleaving is analysed")
    if (interleaver.S, interleaver.M_eff) != (S, M):
        raise ValueError("interleaver dimensions differ from (S, M)")


def _by_dp(pt: ProductTrellis, max_dH: int) -> dict[tuple[int, ...], int]:
    zero = (0,) * pt.n_streams
    frontier: dict = defaultdict(int)
    events: dict = defaultdict(int)
    for ph in pt.start_phases:
        ns, nph, hits = pt.branch(0, ph, 1)
        lab = _add(zero, hits)
        if len(hits) <= max_dH:
            if ns == 0:
                events[lab] += 1
            else:
                frontier[(ns, nph, lab)] += 1
    while frontier:
        nxt: dict = defaultdict(int)
        for (s, ph, lab), mult in frontier.items():
            w = sum(lab)
            for b in (0, 1):
                ns, nph, hits = pt.branch(s, ph, b)
                if w + len(hits) > max_dH:
                    continue
                nlab = _add(lab, hits)
                if ns == 0:
                    events[nlab] += mult
                else:
                    nxt[(ns, nph, nlab)] += mult
        frontier = nxt
    return dict(events)


def _by_dfs(pt: ProductTrellis, max_dH: int) -> dict[tuple[int, ...], int]:
    events: dict = defaultdict(int)
    counts = [0] * pt.n_streams

    def walk(s, ph, w):
        for b in (0, 1):
            ns, nph, hits = pt.branch(s, ph, b)
            if w + len(hits) > max_dH:
                continue
            for h in hits:
                counts[h] += 1
            if ns == 0:
                events[tuple(counts)] += 1
            else:
                walk(ns, nph, w + len(hits))
            for h in hits:
                counts[h] -= 1

    for ph in pt.start_phases:
        ns, nph, hits = pt.branch(0, ph, 1)
        if len(hits) > max_dH:
            continue
        for h in hits:
            counts[h] += 1
        if ns == 0:
            events[tuple(counts)] += 1
        else:
            walk(ns, nph, len(hits))
        for h in hits:
            counts[h] -= 1
    return dict(events)


def _poly_mul(p: dict, q: dict, max_deg: int) -> dict:
    out: dict = defaultdict(int)
    for a, ca in p.items():
        da = sum(a)
        for b, cb in q.items():
            if da + sum(b) <= max_deg:
                out[tuple(x + y for x, y in zip(a, b))] += ca * cb
    return out


def transfer_series(pt: ProductTrellis, max_dH: int):
    """Sparse polynomial matrices ``(F, t, g)`` of the labelled state equations.

    Monomials are stream-count tuples; ``Z`` is implicit as their total degree.
    ``F[i][j]`` labels the branch from node ``j`` to node ``i``.
    """
    idx = {n: i for i, n in enumerate(pt.nodes)}
    zero = (0,) * pt.n_streams
    F: dict = defaultdict(lambda: defaultdict(lambda: defaultdict(int)))
    t: dict = defaultdict(lambda: defaultdict(int))
    g: dict = defaultdict(lambda: defaultdict(int))
    for ph in pt.start_phases:
        ns, nph, hits = pt.branch(0, ph, 1)
        if ns == 0:
            raise ValueError("memoryless code has no state equations")
        t[idx[(ns, nph)]][_add(zero, hits)] += 1
    for (s, ph), j in idx.items():
        for b in (0, 1):
            ns, nph, hits = pt.branch(s, ph, b)
            mono = _add(zero, hits)
            if ns == 0:
                g[j][mono] += 1
            else:
                F[idx[(ns, nph)]][j][mono] += 1
    return F, t, g


def _by_series(pt: ProductTrellis, max_dH: int) -> dict[tuple[int, ...], int]:
    F, t, g = transfer_series(pt, max_dH)
    total: dict = defaultdict(int)
    v = {i: dict(p) for i, p in t.items()}
    # every cycle carries positive Z-degree (checked), so a path of more than
    # n_nodes * (max_dH + 1) branches exceeds max_dH and the series terminates
    limit = len(pt.nodes) * (max_dH + 1) + 1
    for _ in range(limit):
        if not v:
            break
        for j, pj in v.items():
            for mono, c in _poly_mul(g.get(j, {}), pj, max_dH).items():
                total[mono] += c
        nv: dict = defaultdict(lambda: defaultdict(int))
        for i, row in F.items():
            for j, fij in row.items():
                if j in v:
                    for mono, c in _poly_mul(fij, v[j], max_dH).items():
                        nv[i][mono] += c
        v = {i: dict(p) for i, p in nv.items() if p}
    else:
        raise RuntimeError("series did not terminate")
    return {k: c for k, c in total.items() if c}


_ROUTES = {"dp": _by_dp, "dfs": _by_dfs, "series": _by_series}


def enumerate_alpha_spectra(code: CodeSpec, interleaver: InterleaverSpec | None, S: int, M: int,
                            max_dH: int, method: str = "dp") -> dict[AlphaSpectrum, int]:
    """All error events with ``d_H <= max_dH`` as ``{AlphaSpectrum: multiplicity}``.

    The result is sorted by ``(d_H, A)``.  Multiplicities are exact integers
    summed over all steady-state starting phases.
    """
    if max_dH < 1:
        raise ValueError("max_dH must be positive")
    if method not in _ROUTES:
        raise ValueError(f"unknown method {method!r}; choose from {sorted(_ROUTES)}")
    _check_interleaver(interleaver, S, M)
    pt = ProductTrellis(code, S, M)
    pt.check_noncatastrophic()
    raw = _ROUTES[method](pt, max_dH)
    if not raw:
        raise ValueError(f"no error event with d_H <= {max_dH}; raise max_dH")
    out = {AlphaSpectrum.from_streams(lab, S): c for lab, c in raw.items()}
    return dict(sorted(out.items()))


def event_supports(code: CodeSpec, S: int, M: int, max_streams: int = 16) -> set[frozenset[int]]:
    """Exact set of stream supports over all error events, with no weight cap.

    Reachability over ``(state, phase, support)`` is finite, so this covers
    events of every Hamming weight.
    """
    pt = ProductTrellis(code, S, M)
    if pt.n_streams > max_streams:
        raise ValueError(f"{pt.n_streams} streams exceeds the exact-support limit {max_streams}")
    found: set = set()
    seen: set = set()
    stack = []
    for ph in pt.start_phases:
        ns, nph, hits = pt.branch(0, ph, 1)
        sup = frozenset(hits)
        if ns == 0:
            found.add(sup)
        elif (ns, nph, sup) not in seen:
            seen.add((ns, nph, sup))
            stack.append((ns, nph, sup))
    while stack:
        s, ph, sup = stack.pop()
        for b in (0, 1):
            ns, nph, hits = pt.branch(s, ph, b)
            nsup = sup | frozenset(hits)
            if ns == 0:
                found.add(nsup)
            elif (ns, nph, nsup) not in seen:
                seen.add((ns, nph, nsup))
                stack.append((ns, nph, nsup))
    return found
