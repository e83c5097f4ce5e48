import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hankelscope import (
    Ball,
    Bidisk,
    Egg,
    HypothesisError,
    MomentTable,
    PolygonShadow,
    PolySymbol,
    Prediction,
    Thresholds,
    Verdict,
    decay_scan,
    detect_gamma,
    hankel_eigenvalue,
    shell_sup,
    theorem_check,
)
from hankelscope.probe import classify, predict

from conftest import FLAT_TOP

Z1 = PolySymbol({(1, 0): 1})
Z2 = PolySymbol({(0, 1): 1})
Z2_CUBED = PolySymbol({(0, 3): 1})
Z1Z2 = PolySymbol({(1, 1): 1})
Z1_PLUS_Z2 = PolySymbol({(1, 0): 1, (0, 1): 1})
SEVEN = PolySymbol({(0, 0): 7})
SYMBOLS = [Z1, Z2, Z2_CUBED, Z1Z2, Z1_PLUS_Z2, SEVEN]


@pytest.mark.parametrize(
    "domain, alpha, N, expected",
    [
        (Bidisk(1, 1), (1, 0), 10, 0.5),
        (Ball(1), (1, 0), 10, 1 / 13),
        (Egg(2, 4), (0, 0), 17, 0.0),
        (PolygonShadow(FLAT_TOP), (0, 0), 3, 0.0),
    ],
)
def test_shell_sup_examples(domain, alpha, N, expected):
    assert shell_sup(domain, alpha, N) == pytest.approx(expected, rel=1e-12, abs=0)


def test_shell_sup_attained_index():
    # both examples attain their sup on the pure-z2 index (0, N)
    for dom in (Bidisk(1, 1), Ball(1)):
        assert hankel_eigenvalue(dom, (1, 0), (0, 10)) == pytest.approx(shell_sup(dom, (1, 0), 10), rel=1e-14)


def test_shell_sup_rejects_negative_order(ball):
    with pytest.raises(ValueError):
        shell_sup(ball, (1, 0), -1)


def test_ball_shell_sup_is_nonincreasing():
    table = MomentTable(Ball(1))
    for alpha in [(1, 0), (0, 1), (1, 1), (2, 0), (0, 3), (2, 3)]:
        s = np.array([shell_sup(Ball(1), alpha, N, table) for N in range(5, 201)])
        assert np.all(np.diff(s) <= 1e-15 * s[:-1])


def test_decay_scan_bidisk_plateau():
    rep = decay_scan(Bidisk(1, 1), Z1, 20, 200)
    t = rep.term(1, 0)
    assert len(t.series) == 181
    assert np.allclose(t.series, 0.5, rtol=1e-12, atol=0)
    assert t.verdict is Verdict.NON_COMPACT and rep.verdict is Verdict.NON_COMPACT


def test_decay_scan_ball_decays():
    rep = decay_scan(Ball(1), Z1, 20, 200)
    t = rep.term(1, 0)
    N = np.arange(20, 201)
    assert np.allclose(t.series, 1 / (N + 3), rtol=1e-12, atol=0)
    assert np.all(t.argmax == 0)
    assert t.verdict is Verdict.COMPACT_CONSISTENT and rep.verdict is Verdict.COMPACT_CONSISTENT


@settings(max_examples=20, deadline=None)
@given(st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3, allow_nan=False, allow_infinity=False))
def test_constant_symbol_zero_series(c):
    for dom in (Bidisk(1, 1), PolygonShadow(FLAT_TOP)):
        rep = decay_scan(dom, PolySymbol({(0, 0): c}), 3, 40)
        assert np.all(rep.term(0, 0).series == 0.0)
        assert np.all(rep.aggregate == 0.0)
        assert rep.verdict is Verdict.COMPACT_CONSISTENT


def test_aggregate_is_weighted_shell_max(bidisk):
    f = PolySymbol({(1, 0): 2, (0, 3): 1j})
    rep = decay_scan(bidisk, f, 4, 12)
    for i, N in enumerate(rep.orders):
        direct = max(4 * hankel_eigenvalue(bidisk, (1, 0), (m, N - m))
                     + hankel_eigenvalue(bidisk, (0, 3), (m, N - m)) for m in range(N + 1))
        assert rep.aggregate[i] == pytest.approx(direct, rel=1e-13)


def test_decay_scan_preconditions(ball):
    for lo, hi in [(5, 5), (-1, 10), (10, 3)]:
        with pytest.raises(ValueError):
            decay_scan(ball, Z1, lo, hi)


def test_decay_scan_warns_on_large_budget(ball, caplog, monkeypatch):
    import hankelscope.probe as probe
    monkeypatch.setattr(probe, "EVALUATION_WARN", 100)
    with caplog.at_level("WARNING", logger="hankelscope.probe"):
        decay_scan(ball, Z1, 1, 12)
    assert "evaluations" in caplog.text


def test_report_serialization(ball):
    rep = decay_scan(ball, Z1_PLUS_Z2, 2, 6)
    d = rep.to_dict()
    assert [t["j"] for t in d["terms"]] == [0, 1]
    assert len(d["terms"][0]["shell_sup"]) == 5
    assert d["thresholds"] == {"tau_decay": 1e-3, "decay_ratio": 0.75, "tau_floor": 1e-4, "var_tol": 0.05}
    rows = list(rep.csv_rows())
    assert len(rows) == 10 and rows[0][:3] == (2, 0, 1)


class TestClassifier:
    def test_flat_series_is_noncompact(self):
        assert classify(np.full(41, 0.3), 10, 50) is Verdict.NON_COMPACT

    def test_power_decay_is_compact_consistent(self):
        N = np.arange(20, 401)
        assert classify(1 / N, 20, 400) is Verdict.COMPACT_CONSISTENT

    def test_slow_decay_is_inconclusive(self):
        N = np.arange(20, 401)
        assert classify(1 / np.log(N), 20, 400) is Verdict.INCONCLUSIVE

    def test_normalized_by_first_value(self):
        N = np.arange(20, 401)
        for scale in (1e-12, 1.0, 1e9):
            assert classify(scale / N**2, 20, 400) is Verdict.COMPACT_CONSISTENT
            assert classify(np.full(N.size, scale), 20, 400) is Verdict.NON_COMPACT

    def test_all_zero(self):
        assert classify(np.zeros(11), 0, 10) is Verdict.COMPACT_CONSISTENT

    def test_thresholds_are_honoured(self):
        s = np.linspace(1.0, 0.96, 101)
        assert classify(s, 0, 100) is Verdict.NON_COMPACT
        assert classify(s, 0, 100, Thresholds(var_tol=0.01)) is Verdict.INCONCLUSIVE

    def test_rejects_bad_thresholds(self):
        with pytest.raises(ValueError):
            Thresholds(tau_decay=-1)
        with pytest.raises(ValueError):
            Thresholds(var_tol=math.nan)


@pytest.mark.parametrize(
    "domain, index, expected",
    [
        (Bidisk(1, 1), (1, 0), Prediction.MUST_BE_NON_COMPACT),
        (Bidisk(1, 1), (0, 3), Prediction.MUST_BE_NON_COMPACT),
        (Bidisk(1, 1), (0, 0), Prediction.NO_PREDICTION),
        (PolygonShadow(FLAT_TOP), (1, 0), Prediction.MUST_BE_NON_COMPACT),
        (PolygonShadow(FLAT_TOP), (0, 5), Prediction.NO_PREDICTION),
        (Ball(1), (1, 1), Prediction.NO_PREDICTION),
    ],
)
def test_predict(domain, index, expected):
    assert predict(detect_gamma(domain), index) is expected


def test_theorem_check_examples():
    r = theorem_check(Bidisk(1, 1), Z1, 20, 200)
    assert r.prediction is Prediction.MUST_BE_NON_COMPACT
    assert r.scan.verdict is Verdict.NON_COMPACT and r.agreement

    r = theorem_check(Bidisk(1, 1), Z2_CUBED, 20, 200)
    assert r.prediction is Prediction.MUST_BE_NON_COMPACT
    assert r.scan.verdict is Verdict.NON_COMPACT and r.agreement
    # lambda at m = (N, 0) tends to 1/4; the shell sup sits at m2 = 2 with value 3/6
    N = 200
    assert hankel_eigenvalue(Bidisk(1, 1), (0, 3), (N, 0)) == pytest.approx(0.25, rel=1e-14)
    assert np.allclose(r.scan.term(0, 3).series, 0.5, rtol=1e-12, atol=0)

    r = theorem_check(Ball(1), Z1Z2, 20, 200)
    assert r.prediction is Prediction.NO_PREDICTION
    assert r.scan.verdict is Verdict.COMPACT_CONSISTENT and r.agreement


def test_theorem_check_report_dict(flat_top):
    d = theorem_check(flat_top, Z1_PLUS_Z2, 10, 60).to_dict()
    preds = {(p["j"], p["k"]): p["prediction"] for p in d["predictions"]}
    assert preds == {(0, 1): "NoPrediction", (1, 0): "MustBeNonCompact"}
    assert d["prediction"] == "MustBeNonCompact"
    assert d["gamma"]["gamma1"] == {"r1": 0.5, "s1": 1.0}


def test_theorem_check_refuses_nonconvex():
    dom = PolygonShadow(((0, 1), (0.2, 0.3), (1, 0.25), (1.05, 0)))
    with pytest.raises(HypothesisError):
        theorem_check(dom, Z1, 5, 20)


def test_agreement_flag_only_fails_on_must_vs_compact(bidisk):
    # absurdly strict plateau test + loose decay test turns the bidisk plateau
    # into "CompactConsistent", which must flip the agreement flag
    loose = Thresholds(tau_decay=2.0, var_tol=1e-30, tau_floor=10.0)
    r = theorem_check(bidisk, Z1, 5, 30, thresholds=loose)
    assert r.scan.verdict is Verdict.COMPACT_CONSISTENT and not r.agreement
    r = theorem_check(Ball(1), Z1, 5, 30, thresholds=loose)
    assert r.agreement


@pytest.mark.parametrize("domain", [Bidisk(1, 1), Ball(1), Egg(2, 4), PolygonShadow(FLAT_TOP)])
def test_prediction_soundness(domain):
    table = MomentTable(domain)
    for f in SYMBOLS:
        r = theorem_check(domain, f, 20, 200, table)
        assert r.agreement
        for idx, pred in r.predictions.items():
            if pred is Prediction.MUST_BE_NON_COMPACT:
                assert r.scan.term(*idx).verdict is Verdict.NON_COMPACT


@pytest.mark.parametrize("c", [0.5, 2.0])
@pytest.mark.parametrize("domain", [Bidisk(1, 1), Ball(1), Egg(2, 4), PolygonShadow(FLAT_TOP)])
def test_verdicts_scale_invariant(domain, c):
    scaled = domain.scaled(c)
    for f in SYMBOLS:
        a = decay_scan(domain, f, 20, 120)
        b = decay_scan(scaled, f, 20, 120)
        assert b.verdict is a.verdict
        for ta, tb in zip(a.terms, b.terms):
            assert tb.verdict is ta.verdict
            k = c ** (2 * sum(ta.index)) if ta.index != (0, 0) else 1.0
            assert np.allclose(tb.series, k * ta.series, rtol=1e-9, atol=0)
