"""Explicit Hankel operators with conjugate monomial symbols.

For the orthonormal basis ``e_n = z^n / ||z^n||`` and ``j <= n``
componentwise, the Bergman projection keeps a single monomial::

    P(zbar^j e_n) = z^(n-j) ||z^n|| / ||z^(n-j)||^2

and it vanishes when ``n - j`` has a negative component.  Hence
``H*H`` for ``H = H_{zbar^alpha}`` is diagonal with entries

    lambda(alpha, n) = M(n+alpha)/M(n) - M(n)/M(n-alpha)     (n >= alpha)
                     = M(n+alpha)/M(n)                        (otherwise)

All of this is evaluated from log-moments and their exact differences.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .domain import ShadowDomain
from .moments import (
    MomentTable,
    MultiIndex,
    as_index,
    log_moment_curvature,
    log_moment_step,
    log_monomial_inner,
    table_for,
)

COEFF_FLOOR = 1e-300


@dataclass(frozen=True)
class PolySymbol:
    """Holomorphic polynomial ``f = sum c_jk z1^j z2^k``; the operator is ``H_{fbar}``."""

    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for key, c in dict(self.coeffs).items():
            idx = as_index(key)
            c = complex(c)
            if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                raise ValueError(f"coefficient of {tuple(idx)} is not finite")
            if abs(c) >= COEFF_FLOOR:
                clean[idx] = c
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    def __hash__(self):
        return hash(tuple(self.coeffs.items()))

    @classmethod
    def monomial(cls, j, k, c=1.0):
        return cls({(j, k): c})

    @property
    def degree(self) -> int:
        return max((idx.order for idx in self.coeffs), default=0)

    def is_constant(self) -> bool:
        return all(idx == (0, 0) for idx in self.coeffs)

    def label(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for (j, k), c in self.coeffs.items():
            mono = "*".join(p for p in (f"z1^{j}" if j else "", f"z2^{k}" if k else "") if p)
            parts.append(f"({c.real:g}{c.imag:+g}i)" + ("*" + mono if mono else ""))
        return " + ".join(parts)


@dataclass(frozen=True)
class HankelAction:
    """``H_{zbar^j} e_n`` as ``anti * zbar^j z^n - correction * z^(n-j)``.

    ``anti = 1/||z^n||``; the holomorphic correction
    ``||z^n|| / ||z^(n-j)||^2`` is present exactly when ``n >= j``.
    """

    j: MultiIndex
    n: MultiIndex
    anti: float
    correction: Optional[float] = None

    @property
    def correction_index(self) -> Optional[MultiIndex]:
        return None if self.correction is None else MultiIndex(self.n.a1 - self.j.a1, self.n.a2 - self.j.a2)

    def __call__(self, z1, z2):
        """Pointwise value, for spot checks."""
        z1 = np.asarray(z1, dtype=complex)
        z2 = np.asarray(z2, dtype=complex)
        j, n = self.j, self.n
        out = self.anti * np.conj(z1) ** j.a1 * np.conj(z2) ** j.a2 * z1 ** n.a1 * z2 ** n.a2
        if self.correction is not None:
            m = self.correction_index
            out = out - self.correction * z1 ** m.a1 * z2 ** m.a2
        return out


def _eigenvalues(domain: ShadowDomain, alpha: MultiIndex, b1, b2, table: MomentTable) -> np.ndarray:
    """Eigenvalues at integer arrays ``(b1, b2)``.

    With ``u = log M(n+a) - log M(n)`` and ``v = log M(n) - log M(n-a)``,
    ``e^u - e^v`` is evaluated as ``e^v expm1(u - v)``, where the second
    difference ``u - v`` comes directly from the moment layer rather than
    from subtracting large stored logarithms.  Log-convexity makes it
    nonnegative; the clip only absorbs rounding.
    """
    b1 = np.asarray(b1, dtype=np.int64)
    b2 = np.asarray(b2, dtype=np.int64)
    out = np.empty(b1.shape)
    covered = (b1 >= alpha.a1) & (b2 >= alpha.a2)
    if np.any(~covered):
        out[~covered] = np.exp(log_moment_step(domain, b1[~covered], b2[~covered], alpha, table))
    if np.any(covered):
        c1, c2 = b1[covered], b2[covered]
        v = log_moment_step(domain, c1 - alpha.a1, c2 - alpha.a2, alpha, table)
        d = log_moment_curvature(domain, c1, c2, alpha, table)
        out[covered] = np.exp(v) * np.expm1(np.maximum(d, 0.0))
    return out


def projection_coeff(domain: ShadowDomain, j, n, table: MomentTable = None) -> float:
    """``<P(zbar^j e_n), e_(n-j)> = ||z^n|| / ||z^(n-j)||``, or 0 when ``n - j`` leaves the orthant."""
    j, n = as_index(j), as_index(n)
    if not n.covers(j):
        return 0.0
    t = table_for(domain, table)
    step = log_moment_step(domain, np.array([n.a1 - j.a1]), np.array([n.a2 - j.a2]), j, t)
    return math.exp(0.5 * float(step[0]))


def hankel_action(domain: ShadowDomain, j, n, table: MomentTable = None) -> HankelAction:
    j, n = as_index(j), as_index(n)
    t = table_for(domain, table)
    lm = t.get(n)
    anti = math.exp(-0.5 * lm)
    correction = None
    if n.covers(j):
        correction = math.exp(0.5 * lm - t.get((n.a1 - j.a1, n.a2 - j.a2)))
    return HankelAction(j, n, anti, correction)


def hankel_eigenvalue(domain: ShadowDomain, alpha, n, table: MomentTable = None) -> float:
    """``||H_{zbar^alpha} e_n||^2``, the n-th diagonal entry of ``H*H``."""
    alpha, n = as_index(alpha), as_index(n)
    if alpha == (0, 0):
        return 0.0
    t = table_for(domain, table)
    return float(_eigenvalues(domain, alpha, np.array([n.a1]), np.array([n.a2]), t)[0])


def shell_eigenvalues(domain: ShadowDomain, alpha, order: int, table: MomentTable = None) -> np.ndarray:
    """``lambda(alpha, m)`` for every ``m`` with ``m1 + m2 = order``, indexed by ``m1``."""
    alpha = as_index(alpha)
    if alpha == (0, 0):
        return np.zeros(order + 1)
    t = table_for(domain, table)
    m1 = np.arange(order + 1)
    return _eigenvalues(domain, alpha, m1, order - m1, t)


def hankel_gram(domain: ShadowDomain, alpha, j, l, table: MomentTable = None) -> float:
    """``<H e_j, H e_l>`` for ``H = H_{zbar^alpha}``, built from graded inner products.

    ``<zbar^a e_j, zbar^a e_l> - <P(zbar^a e_j), P(zbar^a e_l)>``; both terms
    vanish structurally unless the gradings ``j - alpha`` and ``l - alpha``
    agree, which forces ``j == l``.  The surviving value is evaluated with
    the same cancellation-safe arithmetic as the eigenvalues.
    """
    alpha, j, l = as_index(alpha), as_index(j), as_index(l)
    t = table_for(domain, table)
    if log_monomial_inner(j, alpha, l, alpha, domain, t) is None or alpha == (0, 0):
        return 0.0
    return float(_eigenvalues(domain, alpha, np.array([j.a1]), np.array([j.a2]), t)[0])


def symbol_norm_sq(domain: ShadowDomain, f: PolySymbol, m, table: MomentTable = None) -> float:
    """``||H_{fbar} e_m||^2 = sum |c_jk|^2 lambda((j, k), m)`` by orthogonality of the gradings."""
    m = as_index(m)
    t = table_for(domain, table)
    return float(sum(abs(c) ** 2 * hankel_eigenvalue(domain, idx, m, t) for idx, c in f.coeffs.items()))


def symbol_shell_norms(domain: ShadowDomain, f: PolySymbol, order: int, table: MomentTable = None) -> np.ndarray:
    t = table_for(domain, table)
    out = np.zeros(order + 1)
    for idx, c in f.coeffs.items():
        out += abs(c) ** 2 * shell_eigenvalues(domain, idx, order, t)
    return out
