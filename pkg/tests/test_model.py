import math

import numpy as np
import pytest

from qirank import (
    ModelKind,
    ModelParams,
    Record,
    log_sigmoid,
    prob_binary,
    prob_trinary,
    prob_trinary_alt,
    rank_query,
    rank_scores,
    score,
    sigmoid,
)

# Closed-form reference values evaluated at 50-digit precision (mpmath),
# rounded to the nearest float64.
LOGISTIC_1 = 0.7310585786300049
TRI_P0 = 0.23500371220159449  # sigma(0.5) * sigma(-0.5)
TRI_P1 = 0.3874556190002601   # sigma(0.5)^2
TRI_P2 = 0.37754066879814544  # sigma(-0.5)


class TestScore:
    def test_hand_arithmetic(self):
        assert score([1.0, 2.0], [3.0, 4.0]) == 11.0

    def test_zero_weights(self):
        assert score([0.0, 0.0, 0.0], [5.0, -2.0, 7.0]) == 0.0

    def test_symmetry(self):
        assert score([0.5, -0.5], [1.0, 1.0]) == 0.0

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="length mismatch"):
            score([1.0], [1.0, 2.0])


class TestSigmoid:
    def test_no_overflow(self):
        assert sigmoid(1000.0) == 1.0
        assert sigmoid(-1000.0) == 0.0
        assert math.isfinite(log_sigmoid(-1000.0))
        assert log_sigmoid(-1000.0) == -1000.0

    def test_complement(self):
        rng = np.random.default_rng(0)
        x = rng.uniform(-100, 100, 1000)
        np.testing.assert_allclose(sigmoid(x) + sigmoid(-x), 1.0, atol=1e-12)


class TestProbBinary:
    def test_midpoint(self):
        assert prob_binary([1.0], 2.0, [2.0]) == (0.5, 0.5)

    def test_log3_offset(self):
        p0, p1 = prob_binary([1.0], 0.0, [math.log(3.0)])
        assert p1 == pytest.approx(0.75, abs=1e-15)
        assert p0 == pytest.approx(0.25, abs=1e-15)

    def test_high_precision_reference(self):
        p0, p1 = prob_binary([2.0], 1.0, [1.0])
        assert p1 == pytest.approx(LOGISTIC_1, abs=1e-15)
        assert p0 == pytest.approx(1.0 - LOGISTIC_1, abs=1e-15)

    def test_sums_to_one(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            w = rng.uniform(-5, 5, 3)
            p0, p1 = prob_binary(w, float(rng.uniform(-5, 5)), rng.uniform(-5, 5, 3))
            assert p0 + p1 == pytest.approx(1.0, abs=1e-12)


class TestProbTrinary:
    def test_all_equal_point(self):
        assert prob_trinary([0.0], 0.0, 0.0, [1.0]) == (0.25, 0.25, 0.5)

    def test_saturation_low(self):
        p0, p1, p2 = prob_trinary([1.0], 50.0, 50.0, [0.0])
        assert p0 == pytest.approx(1.0, abs=1e-12)
        assert p1 == pytest.approx(0.0, abs=1e-12)
        assert p2 == pytest.approx(0.0, abs=1e-12)

    def test_high_precision_reference(self):
        p0, p1, p2 = prob_trinary([1.0], 1.0, 0.0, [0.5])
        assert p0 == pytest.approx(TRI_P0, abs=1e-14)
        assert p1 == pytest.approx(TRI_P1, abs=1e-14)
        assert p2 == pytest.approx(TRI_P2, abs=1e-14)


class TestProbTrinaryAlt:
    def test_all_equal_point(self):
        assert prob_trinary_alt([0.0], 0.0, 0.0, [1.0]) == (0.5, 0.25, 0.25)

    def test_saturation_high(self):
        p0, p1, p2 = prob_trinary_alt([1.0], -50.0, -50.0, [0.0])
        assert p2 == pytest.approx(1.0, abs=1e-12)
        assert p0 == pytest.approx(0.0, abs=1e-12)
        assert p1 == pytest.approx(0.0, abs=1e-12)

    def test_high_precision_reference(self):
        # mirror of the high-first cascade at the same inputs
        p0, p1, p2 = prob_trinary_alt([1.0], 1.0, 0.0, [0.5])
        assert p0 == pytest.approx(TRI_P2, abs=1e-14)
        assert p1 == pytest.approx(TRI_P1, abs=1e-14)
        assert p2 == pytest.approx(TRI_P0, abs=1e-14)


class TestTrinaryProperties:
    @pytest.mark.parametrize("prob_fn", [prob_trinary, prob_trinary_alt])
    def test_normalization_10k_draws(self, prob_fn):
        rng = np.random.default_rng(2024)
        for _ in range(10_000):
            k = int(rng.integers(1, 4))
            w = rng.uniform(-20, 20, k)
            phi = rng.uniform(-20, 20, k)
            th, tl = rng.uniform(-20, 20, 2)
            triple = prob_fn(w, float(th), float(tl), phi)
            assert abs(sum(triple) - 1.0) < 1e-12
            assert all(0.0 <= p <= 1.0 for p in triple)

    @pytest.mark.parametrize("prob_fn", [prob_trinary, prob_trinary_alt])
    def test_stability_to_plus_minus_1000(self, prob_fn):
        for z in (-1000.0, -500.0, -37.0, 0.0, 37.0, 500.0, 1000.0):
            for th in (-1000.0, 0.0, 1000.0):
                for tl in (-1000.0, 0.0, 1000.0):
                    triple = prob_fn([1.0], th, tl, [z])
                    assert all(math.isfinite(p) for p in triple)
                    assert abs(sum(triple) - 1.0) < 1e-12

    def test_cascade_symmetry(self):
        # low-first cascade == reversed high-first cascade with negated
        # score direction and swapped/negated intercepts
        rng = np.random.default_rng(55)
        for _ in range(1000):
            k = int(rng.integers(1, 4))
            w = rng.uniform(-5, 5, k)
            phi = rng.uniform(-5, 5, k)
            th, tl = rng.uniform(-5, 5, 2)
            lhs = prob_trinary_alt(w, float(th), float(tl), phi)
            rhs = prob_trinary(-w, float(-tl), float(-th), phi)
            np.testing.assert_allclose(lhs, rhs[::-1], atol=1e-12)


def _top_ordinal_probs(kind, params, group):
    probs = []
    for r in group:
        if kind is ModelKind.BINARY:
            probs.append(prob_binary(params.w, params.intercepts[r.query_id], r.features)[1])
        elif kind is ModelKind.NO_INTERCEPT_BASELINE:
            probs.append(prob_binary(params.w, params.shared_intercept, r.features)[1])
        elif kind is ModelKind.TRINARY_CASCADE:
            th, tl = params.intercepts[r.query_id]
            probs.append(prob_trinary(params.w, th, tl, r.features)[2])
        else:
            th, tl = params.intercepts[r.query_id]
            probs.append(prob_trinary_alt(params.w, th, tl, r.features)[2])
    return probs


class TestRankQuery:
    def test_sorting(self):
        group = [Record("q", 0, (f,)) for f in (1.0, 3.0, 2.0)]
        params = ModelParams(w=(1.0,), intercepts={"q": 0.0})
        assert rank_query(params, group) == [1, 2, 0]

    def test_tie_break_by_position(self):
        group = [Record("q", 0, (1.0,))] * 3
        params = ModelParams(w=(1.0,), intercepts={"q": 0.0})
        assert rank_query(params, group) == [0, 1, 2]

    def test_single_record(self):
        params = ModelParams(w=(1.0,), intercepts={"q": 0.0})
        assert rank_query(params, [Record("q", 0, (1.0,))]) == [0]

    def test_rejects_mixed_queries(self):
        params = ModelParams(w=(1.0,), intercepts={"a": 0.0, "b": 0.0})
        with pytest.raises(ValueError, match="different queries"):
            rank_query(params, [Record("a", 0, (1.0,)), Record("b", 0, (2.0,))])

    def test_rejects_empty(self):
        with pytest.raises(ValueError, match="empty"):
            rank_query(ModelParams(w=(1.0,)), [])

    @pytest.mark.parametrize(
        "kind",
        [
            ModelKind.BINARY,
            ModelKind.NO_INTERCEPT_BASELINE,
            ModelKind.TRINARY_CASCADE,
            ModelKind.TRINARY_CASCADE_ALT,
        ],
    )
    def test_probability_sort_equivalence(self, kind):
        # ranking by top-ordinal probability equals ranking by linear score
        rng = np.random.default_rng(77)
        for _ in range(250):
            k = int(rng.integers(1, 5))
            m = int(rng.integers(1, 9))
            w = tuple(float(v) for v in rng.uniform(-2, 2, k))
            group = [
                Record("q", 0, tuple(float(v) for v in rng.uniform(-2, 2, k)))
                for _ in range(m)
            ]
            if kind is ModelKind.NO_INTERCEPT_BASELINE:
                params = ModelParams(w=w, shared_intercept=float(rng.uniform(-2, 2)))
            elif kind.intercepts_per_query == 1:
                params = ModelParams(w=w, intercepts={"q": float(rng.uniform(-2, 2))})
            else:
                params = ModelParams(
                    w=w, intercepts={"q": tuple(float(v) for v in rng.uniform(-2, 2, 2))}
                )
            probs = _top_ordinal_probs(kind, params, group)
            by_prob = sorted(range(m), key=lambda i: (-probs[i], i))
            assert by_prob == rank_query(params, group)

    def test_intercept_invariance_bit_identical(self):
        rng = np.random.default_rng(88)
        for _ in range(100):
            k = int(rng.integers(1, 5))
            m = int(rng.integers(1, 9))
            w = tuple(float(v) for v in rng.uniform(-2, 2, k))
            group = [
                Record("q", 0, tuple(float(v) for v in rng.uniform(-2, 2, k)))
                for _ in range(m)
            ]
            a = ModelParams(w=w, intercepts={"q": 0.0})
            b = ModelParams(w=w, intercepts={"q": float(rng.uniform(-1e6, 1e6))})
            assert rank_query(a, group) == rank_query(b, group)

    def test_rank_scores_stable_on_negated_zero(self):
        assert rank_scores([0.0, -0.0, 0.0]) == [0, 1, 2]
