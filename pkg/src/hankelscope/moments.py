"""Log-moments ``log M(beta)``, ``M(beta) = ||z^beta||^2`` in L^2 of the domain.

Polar coordinates in each variable reduce the four-dimensional integral to
the shadow::

    M(beta) = 4 pi^2 / (2 b2 + 2) * int_0^R1 x^(2 b1 + 1) tau(x)^(2 b2 + 2) dx

Everything is kept in natural logs.  Only moment ratios enter the Hankel
eigenvalues, and ``M`` itself underflows at moderate degree on small domains.
"""
from __future__ import annotations

import hashlib
import json
import logging
import math
import os
import threading
from functools import lru_cache
from pathlib import Path
from typing import NamedTuple

import numpy as np
from scipy.special import gammaln, logsumexp

from .domain import (
    Ball,
    Bidisk,
    DomainError,
    Egg,
    IncompleteDomainError,
    PolygonShadow,
    ShadowDomain,
    check_complete,
)

log = logging.getLogger(__name__)

LOG_PI2 = 2.0 * math.log(math.pi)
LOG_4PI2 = math.log(4.0) + LOG_PI2
CACHE_VERSION = 1


class MultiIndex(NamedTuple):
    a1: int
    a2: int

    @property
    def order(self) -> int:
        return self.a1 + self.a2

    def covers(self, other) -> bool:
        """Componentwise ``self >= other``."""
        return self.a1 >= other[0] and self.a2 >= other[1]

    def __add__(self, other):
        return MultiIndex(self.a1 + other[0], self.a2 + other[1])

    def __sub__(self, other):
        return GradeIndex(self.a1 - other[0], self.a2 - other[1])


class GradeIndex(NamedTuple):
    """Torus character ``(g1, g2)``; a function in G_g picks up ``zeta^g``."""

    g1: int
    g2: int

    def is_multi_index(self) -> bool:
        return self.g1 >= 0 and self.g2 >= 0

    def as_multi_index(self) -> MultiIndex:
        if not self.is_multi_index():
            raise ValueError(f"{tuple(self)} has a negative component")
        return MultiIndex(self.g1, self.g2)


def as_index(beta) -> MultiIndex:
    b1, b2 = beta
    if int(b1) != b1 or int(b2) != b2 or b1 < 0 or b2 < 0:
        raise ValueError(f"multi-index must be a pair of nonnegative integers, got {beta!r}")
    return MultiIndex(int(b1), int(b2))


def domain_hash(domain: ShadowDomain) -> str:
    text = json.dumps(domain.to_spec(), sort_keys=True)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


def closed_form_log_moment(domain: ShadowDomain, b1, b2=None):
    """Exact ``log M`` for the preset domains.

    Accepts a single multi-index or two integer arrays (broadcast together).

    Bidisk(r, s): ``pi^2 r^(2b1+2) s^(2b2+2) / ((b1+1)(b2+1))``.
    Ball(R): ``pi^2 R^(2|b|+4) b1! b2! / (|b|+2)!``.
    Egg(p, q, c): with ``A = (2b1+2)/p`` and ``B = (2b2+2)/q`` the
    substitution ``u = x^p, v = y^q`` turns the shadow integral into a
    Dirichlet integral, giving
    ``4 pi^2 c^(2|b|+4) Gamma(A) Gamma(B) / (p q Gamma(A+B+1))``.
    """
    if b2 is None:
        b1, b2 = b1
    b1 = np.asarray(b1, dtype=float)
    b2 = np.asarray(b2, dtype=float)
    if isinstance(domain, Bidisk):
        out = (LOG_PI2 + (2 * b1 + 2) * math.log(domain.r) + (2 * b2 + 2) * math.log(domain.s)
               - np.log1p(b1) - np.log1p(b2))
    elif isinstance(domain, Ball):
        out = (LOG_PI2 + (2 * (b1 + b2) + 4) * math.log(domain.radius)
               + gammaln(b1 + 1) + gammaln(b2 + 1) - gammaln(b1 + b2 + 3))
    elif isinstance(domain, Egg):
        p, q = domain.p, domain.q
        A = (2 * b1 + 2) / p
        B = (2 * b2 + 2) / q
        out = (LOG_4PI2 + (2 * (b1 + b2) + 4) * math.log(domain.scale) - math.log(p * q)
               + gammaln(A) + gammaln(B) - gammaln(A + B + 1))
    else:
        raise DomainError(f"no closed form for domain kind {domain.kind!r}")
    return float(out) if out.ndim == 0 else out


@lru_cache(maxsize=None)
def _leggauss(n):
    return np.polynomial.legendre.leggauss(n)


def quadrature_nodes(order: int) -> int:
    """Gauss-Legendre node count per linear edge for total degree ``order``.

    The integrand has degree ``2 order + 3`` on a linear edge; ``n`` nodes
    integrate degree ``2n - 1`` exactly, so ``order + 2`` suffice and two
    spare nodes are added.
    """
    return order + 4


def polygon_log_moments(domain: PolygonShadow, b1, b2, nodes: int = None):
    """``log M`` on a polygonal shadow by per-edge Gauss-Legendre quadrature.

    ``b1`` and ``b2`` are equal-length integer arrays.  The default node count
    makes the rule exact (up to rounding) for every index in the batch.
    """
    b1 = np.atleast_1d(np.asarray(b1, dtype=float))
    b2 = np.atleast_1d(np.asarray(b2, dtype=float))
    if nodes is None:
        nodes = quadrature_nodes(int(np.max(b1 + b2)))
    t, w = _leggauss(nodes)
    xs, logw, logtau = [], [], []
    for (x0, y0), (x1, y1) in zip(domain.vertices, domain.vertices[1:]):
        if x1 == x0:
            continue  # vertical edge carries no area
        half = 0.5 * (x1 - x0)
        x = x0 + half * (t + 1.0)
        y = y0 + (y1 - y0) * (x - x0) / (x1 - x0)
        xs.append(x)
        logw.append(np.log(w * half))
        with np.errstate(divide="ignore"):
            logtau.append(np.log(y))
    logx = np.log(np.concatenate(xs))
    logw = np.concatenate(logw)
    logtau = np.concatenate(logtau)
    terms = ((2 * b1 + 1)[:, None] * logx[None, :]
             + (2 * b2 + 2)[:, None] * logtau[None, :]
             + logw[None, :])
    return LOG_4PI2 - np.log(2 * b2 + 2) + logsumexp(terms, axis=1)


def _raw_log_moments(domain, b1, b2):
    """Compute (not look up) ``log M`` for index arrays; returns (values, error estimate)."""
    if isinstance(domain, PolygonShadow):
        n = quadrature_nodes(int(np.max(np.asarray(b1) + np.asarray(b2))))
        values = polygon_log_moments(domain, b1, b2, n)
        check = polygon_log_moments(domain, b1, b2, n + 1)
        return values, float(np.max(np.abs(values - check)))
    return np.atleast_1d(closed_form_log_moment(domain, b1, b2)), 0.0


class MomentTable:
    """Memoized ``MultiIndex -> log M`` map for one domain.

    With ``path`` set the table is backed by an appendable text file: a header
    line ``# domain <hash> version 1`` followed by records ``b1 b2 logM``.
    The file is read on first access; new records are written by ``flush``.
    Reads are lock-free, inserts are serialized.
    """

    def __init__(self, domain: ShadowDomain, path=None):
        self.domain = domain
        self.domain_hash = domain_hash(domain)
        self.path = None if path is None else Path(path)
        self.metadata = {
            "method": "gauss_legendre" if isinstance(domain, PolygonShadow) else "closed_form",
            "max_nodes": 0,
            "max_error_estimate": 0.0,
            "computed": 0,
            "loaded": 0,
        }
        self._values = {}
        self._shells = {}
        self._pending = []
        self._loaded = self.path is None
        self._complete = None
        self._lock = threading.Lock()

    def __len__(self):
        self._load()
        return len(self._values)

    def __contains__(self, beta):
        self._load()
        return tuple(beta) in self._values

    def items(self):
        self._load()
        return sorted(self._values.items())

    def require_complete(self):
        if self._complete is None:
            self._complete = bool(check_complete(self.domain))
        if not self._complete:
            raise IncompleteDomainError("moments need a complete Reinhardt domain")

    def _load(self):
        if self._loaded:
            return
        with self._lock:
            if self._loaded:
                return
            if self.path.exists():
                with open(self.path, encoding="utf-8") as fh:
                    header = fh.readline().split()
                    if header[:3] != ["#", "domain", self.domain_hash]:
                        raise ValueError(f"{self.path}: cache belongs to another domain")
                    if header[3:] != ["version", str(CACHE_VERSION)]:
                        raise ValueError(f"{self.path}: unsupported cache version")
                    for lineno, line in enumerate(fh, start=2):
                        parts = line.split()
                        if not parts:
                            continue
                        if len(parts) != 3:
                            raise ValueError(f"{self.path}:{lineno}: malformed record")
                        self._values[(int(parts[0]), int(parts[1]))] = float(parts[2])
                self.metadata["loaded"] = len(self._values)
                log.info("loaded %d log-moments from %s", len(self._values), self.path)
            self._loaded = True

    def _insert(self, b1s, b2s, values, err):
        with self._lock:
            for b1, b2, v in zip(b1s, b2s, values):
                key = (int(b1), int(b2))
                if key not in self._values:
                    v = float(v)
                    if not math.isfinite(v):
                        raise ArithmeticError(f"non-finite log-moment at {key}")
                    self._values[key] = v
                    self._pending.append(key)
            self.metadata["computed"] += len(values)
            log.debug("computed %d log-moments (%s)", len(values), self.metadata["method"])
            self.metadata["max_error_estimate"] = max(self.metadata["max_error_estimate"], err)
            if isinstance(self.domain, PolygonShadow):
                order = int(max(b1s) + max(b2s)) if len(b1s) else 0
                self.metadata["max_nodes"] = max(self.metadata["max_nodes"], quadrature_nodes(order))

    def get(self, beta) -> float:
        self._load()
        key = (int(beta[0]), int(beta[1]))
        value = self._values.get(key)
        if value is None:
            self.require_complete()
            values, err = _raw_log_moments(self.domain, [key[0]], [key[1]])
            self._insert([key[0]], [key[1]], values, err)
            value = self._values[key]
        return value

    def lookup(self, b1, b2) -> np.ndarray:
        """Vectorized ``get`` over integer arrays; missing entries are computed in one batch."""
        self._load()
        b1 = np.atleast_1d(np.asarray(b1, dtype=np.int64))
        b2 = np.atleast_1d(np.asarray(b2, dtype=np.int64))
        keys = list(zip(b1.tolist(), b2.tolist()))
        missing = sorted({k for k in keys if k not in self._values})
        if missing:
            self.require_complete()
            mb1 = np.array([k[0] for k in missing])
            mb2 = np.array([k[1] for k in missing])
            values, err = _raw_log_moments(self.domain, mb1, mb2)
            self._insert(mb1, mb2, values, err)
        return np.array([self._values[k] for k in keys])

    def shell(self, order: int) -> np.ndarray:
        """``log M((m1, order - m1))`` for ``m1 = 0 .. order`` as an array."""
        arr = self._shells.get(order)
        if arr is not None:
            return arr
        b1 = np.arange(order + 1)
        arr = self.lookup(b1, order - b1)
        arr.setflags(write=False)
        self._shells[order] = arr
        return arr

    def flush(self) -> int:
        """Append pending records to the cache file; returns the number written."""
        if self.path is None:
            self._pending.clear()
            return 0
        with self._lock:
            if not self._pending:
                return 0
            self.path.parent.mkdir(parents=True, exist_ok=True)
            fresh = not self.path.exists()
            with open(self.path, "a", encoding="utf-8") as fh:
                if fresh:
                    fh.write(f"# domain {self.domain_hash} version {CACHE_VERSION}\n")
                for key in self._pending:
                    fh.write(f"{key[0]} {key[1]} {self._values[key]:.17g}\n")
            n = len(self._pending)
            self._pending.clear()
        log.info("appended %d log-moments to %s", n, self.path)
        return n


def _lgamma_step(x, a: int):
    """``lgamma(x + a) - lgamma(x)`` for integer ``a >= 0``."""
    out = np.zeros(np.shape(x))
    for k in range(a):
        out += np.log(x + k)
    return out


def _lgamma_curvature(x, a: int):
    """``lgamma(x + a) - 2 lgamma(x) + lgamma(x - a)`` for integer ``0 <= a < x``."""
    out = np.zeros(np.shape(x))
    for k in range(a):
        out += np.log1p(a / (x - a + k))
    return out


def log_moment_step(domain: ShadowDomain, b1, b2, alpha, table: MomentTable = None):
    """``log M(b + alpha) - log M(b)`` over integer arrays ``b1, b2``.

    Bidisk and ball use exact finite sums of small logarithms; the difference
    of two stored log-moments would lose about ``eps * |log M|`` absolutely.
    """
    a1, a2 = as_index(alpha)
    b1 = np.asarray(b1, dtype=float)
    b2 = np.asarray(b2, dtype=float)
    if isinstance(domain, Bidisk):
        return (2 * a1 * math.log(domain.r) + 2 * a2 * math.log(domain.s)
                - np.log1p(a1 / (b1 + 1)) - np.log1p(a2 / (b2 + 1)))
    if isinstance(domain, Ball):
        return (2 * (a1 + a2) * math.log(domain.radius) + _lgamma_step(b1 + 1, a1)
                + _lgamma_step(b2 + 1, a2) - _lgamma_step(b1 + b2 + 3, a1 + a2))
    t = table_for(domain, table)
    b1i, b2i = b1.astype(np.int64), b2.astype(np.int64)
    return (t.lookup(b1i + a1, b2i + a2) - t.lookup(b1i, b2i)).reshape(np.shape(b1))


def log_moment_curvature(domain: ShadowDomain, b1, b2, alpha, table: MomentTable = None):
    """Second difference ``log M(b+alpha) - 2 log M(b) + log M(b-alpha)``; needs ``b >= alpha``.

    Nonnegative by log-convexity of the moments.
    """
    a1, a2 = as_index(alpha)
    b1 = np.asarray(b1, dtype=float)
    b2 = np.asarray(b2, dtype=float)
    if isinstance(domain, Bidisk):
        # (b+1)^2 / ((b+1+a)(b+1-a)) in each variable
        return -np.log1p(-(a1 / (b1 + 1)) ** 2) - np.log1p(-(a2 / (b2 + 1)) ** 2)
    if isinstance(domain, Ball):
        return (_lgamma_curvature(b1 + 1, a1) + _lgamma_curvature(b2 + 1, a2)
                - _lgamma_curvature(b1 + b2 + 3, a1 + a2))
    t = table_for(domain, table)
    b1i, b2i = b1.astype(np.int64), b2.astype(np.int64)
    mid = t.lookup(b1i, b2i)
    out = t.lookup(b1i + a1, b2i + a2) - 2 * mid + t.lookup(b1i - a1, b2i - a2)
    return out.reshape(np.shape(b1))


def cache_path(cache_dir, domain: ShadowDomain) -> Path:
    return Path(cache_dir) / f"{domain_hash(domain)}.moments"


def default_cache_dir() -> Path:
    env = os.environ.get("HANKELSCOPE_CACHE")
    if env:
        return Path(env)
    base = os.environ.get("XDG_DATA_HOME") or os.path.join(os.path.expanduser("~"), ".local", "share")
    return Path(base) / "hankelscope"


@lru_cache(maxsize=32)
def _default_table(domain):
    return MomentTable(domain)


def table_for(domain: ShadowDomain, table: MomentTable = None) -> MomentTable:
    if table is None:
        return _default_table(domain)
    if table.domain_hash != domain_hash(domain):
        raise ValueError("moment table belongs to a different domain")
    return table


def log_moment(domain: ShadowDomain, beta, table: MomentTable = None) -> float:
    """Natural log of ``||z^beta||^2``, memoized in ``table``."""
    return table_for(domain, table).get(as_index(beta))


def monomial_inner(a, b, c, d, domain: ShadowDomain, table: MomentTable = None) -> complex:
    """``<z^a zbar^b, z^c zbar^d>``, which is ``M(a + d)`` when ``a - b == c - d`` and 0 otherwise."""
    lv = log_monomial_inner(a, b, c, d, domain, table)
    return 0j if lv is None else complex(math.exp(lv))


def log_monomial_inner(a, b, c, d, domain, table=None):
    """Log of ``monomial_inner``, or ``None`` when the gradings differ."""
    a, b, c, d = (as_index(i) for i in (a, b, c, d))
    if a - b != c - d:
        return None
    return log_moment(domain, a + d, table)


def warm_cache(domain: ShadowDomain, degree_bound: int, table: MomentTable = None) -> int:
    """Make sure every ``beta`` with ``|beta| <= degree_bound`` is in ``table``."""
    if degree_bound < 0:
        raise ValueError("degree_bound must be >= 0")
    table = table_for(domain, table)
    for order in range(degree_bound + 1):
        table.shell(order)
    return len(table)
