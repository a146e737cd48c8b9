"""Diversity of error events spread over two correlated subcarriers.

``correlated_pep_degree`` is the closed form.  ``smallest_degree_oracle``
rebuilds it from the eigenvalue density polynomial of two correlated Wishart
matrices by exact symbolic expansion and term-wise integration bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import chain, combinations

import numpy as np
import sympy as sp

__all__ = [
    "CorrelatedPepSpec",
    "bessel_determinant",
    "closed_form_degree",
    "correlated_pep_bound",
    "correlated_pep_degree",
    "dominant_term",
    "eigen_polynomial",
    "smallest_degree_oracle",
    "snr_offset",
    "support_patterns",
]


def _support(vec) -> tuple[int, ...]:
    return tuple(int(i) + 1 for i in np.flatnonzero(np.asarray(vec)))


@dataclass(frozen=True)
class CorrelatedPepSpec:
    """Per-subcarrier alpha vectors of an event split over two subcarriers.

    ``a_tilde=None`` means all erroneous bits sit on one subcarrier.  Indices
    ``p`` / ``p_tilde`` are 1-based positions of nonzero entries.
    """

    a: tuple[int, ...]
    a_tilde: tuple[int, ...] | None
    N_t: int
    N_r: int
    rho: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(v) for v in self.a))
        if self.a_tilde is not None:
            object.__setattr__(self, "a_tilde", tuple(int(v) for v in self.a_tilde))
            if len(self.a_tilde) != len(self.a):
                raise ValueError("a and a_tilde must have the same length")
        if len(self.a) > self.Y:
            raise ValueError("alpha vector longer than min(N_t, N_r)")
        if any(v < 0 for v in self.a + (self.a_tilde or ())):
            raise ValueError("alpha counts must be non-negative")
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError("rho must lie in [0, 1]")

    @property
    def X(self) -> int:
        return max(self.N_t, self.N_r)

    @property
    def Y(self) -> int:
        return min(self.N_t, self.N_r)

    @property
    def p(self) -> tuple[int, ...]:
        return _support(self.a)

    @property
    def p_tilde(self) -> tuple[int, ...]:
        return () if self.a_tilde is None else _support(self.a_tilde)

    @property
    def W(self) -> int:
        return len(self.p)

    @property
    def W_tilde(self) -> int:
        return len(self.p_tilde)


def _single(X: int, Y: int, p1: int) -> int:
    return (X - p1 + 1) * (Y - p1 + 1)


def correlated_pep_degree(spec: CorrelatedPepSpec) -> int:
    """``D = (X-p_1+1)(Y-p_1+1) + (X-p~_1+1)(Y-p~_1+1)``.

    With ``a_tilde`` absent or ``rho = 1`` both subcarriers see the same
    channel, so the vectors merge and the single-subcarrier value applies.
    """
    X, Y = spec.X, spec.Y
    if spec.a_tilde is None or spec.rho == 1.0:
        merged = np.add(spec.a, spec.a_tilde) if spec.a_tilde is not None else np.asarray(spec.a)
        p = _support(merged)
        if not p:
            raise ValueError("empty support: not an error event")
        return _single(X, Y, p[0])
    if not spec.p or not spec.p_tilde:
        raise ValueError("empty p or p_tilde")
    return _single(X, Y, spec.p[0]) + _single(X, Y, spec.p_tilde[0])


def snr_offset(rho: float) -> float:
    """SNR-independent term ``1 / (1 - rho^2)`` of the correlated bound."""
    if not 0.0 <= rho < 1.0:
        raise ValueError("rho must lie in [0, 1)")
    return 1.0 / (1.0 - rho * rho)


def correlated_pep_bound(spec: CorrelatedPepSpec, gamma, c: float = 1.0) -> np.ndarray:
    """Shape of the bound ``(c*gamma + 1/(1-rho^2))^(-D)`` without its constant."""
    D = correlated_pep_degree(spec)
    gamma = np.asarray(gamma, dtype=float)
    offset = 0.0 if spec.rho == 1.0 else snr_offset(spec.rho)
    return (c * gamma + offset) ** (-D)


def closed_form_degree(X: int, Y: int, p, p_tilde) -> int:
    """Smallest degree of the marginal polynomial, before the ``W + W~`` integrations."""
    return _single(X, Y, p[0]) + _single(X, Y, p_tilde[0]) - len(p) - len(p_tilde)


# -- symbolic oracle ---------------------------------------------------------

_MAX_SCALE = 3


def _symbols(Y: int):
    phi = sp.symbols(f"phi1:{Y + 1}", positive=True)
    phit = sp.symbols(f"tphi1:{Y + 1}", positive=True)
    eps = sp.Symbol("epsilon", positive=True)
    return phi, phit, eps


def _bessel_series(N: int, t, J: int):
    # sum_j t^j / (j! (j+N+1)!), truncated at j <= J
    return sum(t**j / (math.factorial(j) * math.factorial(j + N + 1)) for j in range(J + 1))


def bessel_determinant(X: int, Y: int, J: int | None = None) -> sp.Poly:
    """Truncated ``det[I~_{X-Y}(eps phi_u phi~_v)]`` as a polynomial."""
    _check_scale(X, Y)
    J = Y + 1 if J is None else J
    phi, phit, eps = _symbols(Y)
    gens = (*phi, *phit, eps)
    mat = sp.Matrix(Y, Y, lambda u, v: _bessel_series(X - Y, eps * phi[u] * phit[v], J))
    return sp.Poly(mat.det(method="berkowitz"), *gens)


@lru_cache(maxsize=None)
def eigen_polynomial(X: int, Y: int, J: int | None = None) -> sp.Poly:
    """Polynomial factor ``f_1`` of the joint eigenvalue density (constants dropped)."""
    _check_scale(X, Y)
    phi, phit, eps = _symbols(Y)
    gens = (*phi, *phit, eps)
    vand = sp.Integer(1)
    for u in range(Y):
        for v in range(u + 1, Y):
            vand *= (phi[u] - phi[v]) * (phit[u] - phit[v])
    power = sp.Integer(1)
    for u in range(Y):
        power *= (phi[u] * phit[u]) ** (X - Y)
    return sp.Poly(vand * power, *gens) * bessel_determinant(X, Y, J)


def dominant_term(poly: sp.Poly, Y: int):
    """Smallest-degree term in the eigenvalues, largest eigenvalues first.

    Degree counts only the ``phi`` and ``phi~`` variables (``eps`` is a
    coefficient).  Among the smallest-degree monomials the one with the
    lexicographically largest exponents on ``(phi_1..phi_Y, phi~_1..phi~_Y)``
    is returned as a sympy expression.
    """
    terms = [(m[: 2 * Y], m, c) for m, c in poly.terms()]
    low = min(sum(e) for e, _, _ in terms)
    pick = max((t for t in terms if sum(t[0]) == low), key=lambda t: t[0])
    mono = pick[1]
    # collect the eps power of the same eigenvalue monomial into the coefficient
    expr = sum(
        c * sp.prod(g**k for g, k in zip(poly.gens, m))
        for m, c in poly.terms()
        if m[: 2 * Y] == mono[: 2 * Y]
    )
    return sp.factor(expr)


def _integrated_degree(exps, p: tuple[int, ...], Y: int) -> int:
    # Integrate out the zero-alpha eigenvalues of one matrix.  Indices below
    # p_1 run to infinity and leave a constant; indices above p_1 are bounded
    # by the next larger eigenvalue, adding one to its exponent.  Work from the
    # smallest eigenvalue (highest index) up.
    e = list(exps)
    keep = set(p)
    for u in range(Y, 0, -1):
        if u in keep:
            continue
        if u < p[0]:
            e[u - 1] = 0
        else:
            e[u - 2] += e[u - 1] + 1
            e[u - 1] = 0
    return sum(e[u - 1] for u in keep)


def _check_scale(X: int, Y: int) -> None:
    if not 1 <= Y <= X:
        raise ValueError("need 1 <= Y <= X")
    if X > _MAX_SCALE:
        raise ValueError(f"scale exceeded: symbolic oracle supports X, Y <= {_MAX_SCALE}")


def smallest_degree_oracle(X: int, Y: int, p, p_tilde, J: int | None = None) -> int:
    """Smallest total degree of the marginal polynomial ``f_2`` by brute force.

    ``f_1`` is expanded with the Bessel series truncated at ``j <= J``
    (default ``Y + 1``); each monomial is integrated term-wise over the
    zero-alpha eigenvalues and the minimum surviving degree is returned.
    The result is confirmed stable when the truncation is raised by one.
    """
    _check_scale(X, Y)
    p, p_tilde = tuple(sorted(p)), tuple(sorted(p_tilde))
    for s in (p, p_tilde):
        if not s or len(set(s)) != len(s) or s[0] < 1 or s[-1] > Y:
            raise ValueError("p and p_tilde must be nonempty subsets of 1..Y")
    J = Y + 1 if J is None else J

    def degree(jmax):
        poly = eigen_polynomial(X, Y, jmax)
        return min(
            _integrated_degree(m[:Y], p, Y) + _integrated_degree(m[Y : 2 * Y], p_tilde, Y)
            for m, _ in poly.terms()
        )

    d = degree(J)
    if degree(J + 1) != d:
        raise RuntimeError("Bessel truncation too short; degree not stable")
    return d


def support_patterns(Y: int):
    """All nonempty subsets of ``1..Y`` as sorted tuples."""
    idx = range(1, Y + 1)
    return [c for c in chain.from_iterable(combinations(idx, r) for r in idx)]
