"""Numerical compactness probe for ``H_{fbar}``.

Compactness forces ``||H e_m|| -> 0`` as ``|m| -> oo`` because ``e_m``
tends weakly to zero.  The probe tracks the shell maxima

    S(N) = max{lambda(alpha, m) : m1 + m2 = N}

per symbol monomial and labels each series as a plateau (``NonCompact``),
clearly decaying (``CompactConsistent``) or neither.  Finite scans never
prove compactness, hence the cautious label.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import asdict, dataclass

import numpy as np

from .domain import GammaReport, HypothesisError, ShadowDomain, check_convex, detect_gamma
from .hankel import PolySymbol, shell_eigenvalues
from .moments import MomentTable, as_index, table_for

log = logging.getLogger(__name__)

EVALUATION_WARN = 10**7


class Verdict(str, enum.Enum):
    COMPACT_CONSISTENT = "CompactConsistent"
    NON_COMPACT = "NonCompact"
    INCONCLUSIVE = "Inconclusive"


class Prediction(str, enum.Enum):
    MUST_BE_NON_COMPACT = "MustBeNonCompact"
    NO_PREDICTION = "NoPrediction"


@dataclass(frozen=True)
class Thresholds:
    """Classifier thresholds, applied to series normalized by their value at ``N_min``."""

    tau_decay: float = 1e-3
    decay_ratio: float = 0.75
    tau_floor: float = 1e-4
    var_tol: float = 0.05

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive, got {value!r}")


@dataclass
class TermSeries:
    index: tuple
    coefficient: complex
    series: np.ndarray
    argmax: np.ndarray
    verdict: Verdict


@dataclass
class DecayReport:
    n_min: int
    n_max: int
    thresholds: Thresholds
    terms: list
    aggregate: np.ndarray
    verdict: Verdict

    @property
    def orders(self):
        return list(range(self.n_min, self.n_max + 1))

    def term(self, j, k) -> TermSeries:
        for t in self.terms:
            if t.index == (j, k):
                return t
        raise KeyError((j, k))

    def to_dict(self):
        return {
            "n_min": self.n_min,
            "n_max": self.n_max,
            "thresholds": asdict(self.thresholds),
            "terms": [
                {
                    "j": t.index[0],
                    "k": t.index[1],
                    "re": t.coefficient.real,
                    "im": t.coefficient.imag,
                    "verdict": t.verdict.value,
                    "shell_sup": [float(v) for v in t.series],
                    "argmax_m1": [int(v) for v in t.argmax],
                }
                for t in self.terms
            ],
            "aggregate": {
                "verdict": self.verdict.value,
                "shell_sup": [float(v) for v in self.aggregate],
            },
        }

    def csv_rows(self):
        """Rows ``(N, term_j, term_k, shell_sup)`` in scan order."""
        for t in self.terms:
            for order, value in zip(self.orders, t.series):
                yield order, t.index[0], t.index[1], float(value)


@dataclass
class ConsistencyReport:
    gamma: GammaReport
    predictions: dict
    scan: DecayReport
    prediction: Prediction
    agreement: bool

    def to_dict(self):
        return {
            "gamma": self.gamma.to_dict(),
            "predictions": [
                {
                    "j": idx[0],
                    "k": idx[1],
                    "prediction": pred.value,
                    "verdict": self.scan.term(*idx).verdict.value,
                }
                for idx, pred in self.predictions.items()
            ],
            "prediction": self.prediction.value,
            "verdict": self.scan.verdict.value,
            "agreement": self.agreement,
            "scan": self.scan.to_dict(),
        }


def shell_sup(domain: ShadowDomain, alpha, N: int, table: MomentTable = None) -> float:
    """Largest ``lambda(alpha, m)`` over the ``N + 1`` indices with ``|m| = N``."""
    if N < 0:
        raise ValueError("N must be >= 0")
    return float(np.max(shell_eigenvalues(domain, alpha, N, table)))


def classify(series, n_min: int, n_max: int, thresholds: Thresholds = Thresholds()) -> Verdict:
    """Plateau / decay classification of a shell-sup series over ``[n_min, n_max]``.

    Plateau: over the last half of shells the normalized minimum stays above
    ``tau_floor`` and ``(max - min) / max <= var_tol``.  Decay: the normalized
    last value is below ``tau_decay``, or the last value has dropped to at most
    ``decay_ratio`` times the value at the midpoint shell.
    """
    s = np.asarray(series, dtype=float)
    if not np.any(s > 0):
        return Verdict.COMPACT_CONSISTENT
    ref = s[0] if s[0] > 0 else np.max(s)
    s = s / ref
    mid = math.ceil((n_min + n_max) / 2) - n_min
    tail = s[mid:]
    top = np.max(tail)
    if np.min(tail) >= thresholds.tau_floor and top > 0 and (top - np.min(tail)) / top <= thresholds.var_tol:
        return Verdict.NON_COMPACT
    if s[-1] <= thresholds.tau_decay or s[-1] <= thresholds.decay_ratio * s[mid]:
        return Verdict.COMPACT_CONSISTENT
    return Verdict.INCONCLUSIVE


def decay_scan(domain: ShadowDomain, f: PolySymbol, n_min: int, n_max: int,
               table: MomentTable = None, thresholds: Thresholds = Thresholds()) -> DecayReport:
    n_min, n_max = int(n_min), int(n_max)
    if not 0 <= n_min < n_max:
        raise ValueError(f"need 0 <= N_min < N_max, got [{n_min}, {n_max}]")
    evaluations = (n_max + 1) * len(f.coeffs) * (n_max - n_min + 1)
    if evaluations > EVALUATION_WARN:
        log.warning("decay scan bound: %d eigenvalue evaluations", evaluations)
    table = table_for(domain, table)
    orders = range(n_min, n_max + 1)
    keys = list(f.coeffs)
    series = np.zeros((len(keys), len(orders)))
    argmax = np.zeros((len(keys), len(orders)), dtype=int)
    aggregate = np.zeros(len(orders))
    for i, order in enumerate(orders):
        total = np.zeros(order + 1)
        for t, idx in enumerate(keys):
            lam = shell_eigenvalues(domain, idx, order, table)
            series[t, i] = lam.max()
            argmax[t, i] = int(lam.argmax())
            total += abs(f.coeffs[idx]) ** 2 * lam
        aggregate[i] = total.max()
    terms = [
        TermSeries(tuple(idx), f.coeffs[idx], series[t], argmax[t],
                   classify(series[t], n_min, n_max, thresholds))
        for t, idx in enumerate(keys)
    ]

    nonconstant = [t for t in terms if t.index != (0, 0)]
    if any(t.verdict is Verdict.NON_COMPACT for t in nonconstant):
        verdict = Verdict.NON_COMPACT
    elif all(t.verdict is Verdict.COMPACT_CONSISTENT for t in terms):
        verdict = Verdict.COMPACT_CONSISTENT
    else:
        verdict = Verdict.INCONCLUSIVE
    return DecayReport(n_min, n_max, thresholds, terms, aggregate, verdict)


def predict(gamma: GammaReport, index) -> Prediction:
    """Geometric prediction for one monomial ``z1^j z2^k`` of the symbol.

    A nonempty ``closed disk x circle`` set forbids any ``z1`` dependence and
    ``circle x closed disk`` forbids any ``z2`` dependence in a compact symbol.
    """
    j, k = as_index(index)
    if (gamma.gamma1 is not None and j > 0) or (gamma.gamma2 is not None and k > 0):
        return Prediction.MUST_BE_NON_COMPACT
    return Prediction.NO_PREDICTION


def theorem_check(domain: ShadowDomain, f: PolySymbol, n_min: int = 20, n_max: int = 400,
                  table: MomentTable = None, thresholds: Thresholds = Thresholds(),
                  flat_eps: float = None, len_eps: float = None) -> ConsistencyReport:
    """Compare the boundary-geometry prediction with the spectral verdict.

    Raises ``HypothesisError`` for non-convex domains, where the geometric
    restriction is not available.
    """
    convex = check_convex(domain)
    if not convex:
        raise HypothesisError(f"domain is not a convex complete Reinhardt domain ({convex.reason})")
    gamma = detect_gamma(domain, flat_eps, len_eps)
    predictions = {tuple(idx): predict(gamma, idx) for idx in f.coeffs}
    scan = decay_scan(domain, f, n_min, n_max, table, thresholds)
    must = Prediction.MUST_BE_NON_COMPACT
    agreement = all(
        not (pred is must and scan.term(*idx).verdict is Verdict.COMPACT_CONSISTENT)
        for idx, pred in predictions.items()
    )
    overall = must if must in predictions.values() else Prediction.NO_PREDICTION
    if overall is must and scan.verdict is Verdict.COMPACT_CONSISTENT:
        agreement = False
    return ConsistencyReport(gamma, predictions, scan, overall, agreement)
