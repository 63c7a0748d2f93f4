import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from qirank import QueryInterceptRanker, generate_synthetic


def dataset_arrays(n_queries=12, m=8, k=3, kind="binary", seed=0):
    from qirank.model import ModelKind

    ds, params = generate_synthetic(n_queries, m, k, kind=ModelKind.from_string(kind), seed=seed)
    X = np.asarray(ds.feature_matrix)
    y = np.asarray(ds.label_array)
    qids = [r.query_id for r in ds.records]
    return X, y, qids, params


class TestSklearnPlumbing:
    def test_get_params_round_trip(self):
        est = QueryInterceptRanker(model_kind="trinary-cascade", l2_penalty=0.5)
        params = est.get_params()
        assert params["model_kind"] == "trinary-cascade"
        assert params["l2_penalty"] == 0.5
        est.set_params(max_iterations=99)
        assert est.max_iterations == 99

    def test_clone(self):
        est = QueryInterceptRanker(l2_penalty=0.123)
        cloned = clone(est)
        assert cloned.get_params() == est.get_params()

    def test_repr_mentions_changed_params(self):
        assert "l2_penalty=0.5" in repr(QueryInterceptRanker(l2_penalty=0.5))

    def test_not_fitted(self):
        with pytest.raises(NotFittedError):
            QueryInterceptRanker().predict(np.zeros((2, 3)))


class TestFitPredict:
    def test_fit_returns_self_and_sets_attributes(self):
        X, y, qids, _ = dataset_arrays()
        est = QueryInterceptRanker()
        assert est.fit(X, y, query_ids=qids) is est
        assert est.w_.shape == (3,)
        assert set(est.intercepts_) == set(qids)
        assert est.n_features_in_ == 3
        assert est.result_.nll_trace[0] >= est.result_.nll_trace[-1]

    def test_predict_is_linear_score(self):
        X, y, qids, _ = dataset_arrays()
        est = QueryInterceptRanker().fit(X, y, query_ids=qids)
        np.testing.assert_allclose(est.predict(X), X @ est.w_)
        np.testing.assert_array_equal(est.predict(X), est.decision_function(X))

    def test_no_query_ids_means_single_group(self):
        X, y, _, _ = dataset_arrays(n_queries=1, m=40)
        est = QueryInterceptRanker().fit(X, y)
        assert set(est.intercepts_) == {"0"}

    def test_feature_count_checked(self):
        X, y, qids, _ = dataset_arrays()
        est = QueryInterceptRanker().fit(X, y, query_ids=qids)
        with pytest.raises(ValueError, match="features"):
            est.predict(np.zeros((2, 5)))

    def test_query_id_length_checked(self):
        X, y, _, _ = dataset_arrays()
        with pytest.raises(ValueError, match="query ids"):
            QueryInterceptRanker().fit(X, y, query_ids=["a", "b"])

    def test_recovers_weight_direction(self):
        X, y, qids, params = dataset_arrays(n_queries=60, m=25, k=4, seed=11)
        est = QueryInterceptRanker().fit(X, y, query_ids=qids)
        w_true = np.asarray(params.w)
        cos = est.w_ @ w_true / (np.linalg.norm(est.w_) * np.linalg.norm(w_true))
        assert cos > 0.9


class TestPredictProba:
    def test_binary_rows_sum_to_one(self):
        X, y, qids, _ = dataset_arrays()
        est = QueryInterceptRanker().fit(X, y, query_ids=qids)
        proba = est.predict_proba(X, query_ids=qids)
        assert proba.shape == (len(y), 2)
        np.testing.assert_allclose(proba.sum(axis=1), 1.0, atol=1e-12)

    def test_trinary_rows_sum_to_one(self):
        X, y, qids, _ = dataset_arrays(kind="trinary-cascade", seed=3)
        est = QueryInterceptRanker(model_kind="trinary-cascade").fit(X, y, query_ids=qids)
        proba = est.predict_proba(X, query_ids=qids)
        assert proba.shape == (len(y), 3)
        np.testing.assert_allclose(proba.sum(axis=1), 1.0, atol=1e-12)

    def test_unknown_query_rejected(self):
        X, y, qids, _ = dataset_arrays()
        est = QueryInterceptRanker().fit(X, y, query_ids=qids)
        with pytest.raises(ValueError, match="not seen during fit"):
            est.predict_proba(X[:1], query_ids=["never-seen"])

    def test_baseline_needs_no_query_ids(self):
        X, y, qids, _ = dataset_arrays(kind="no-intercept-baseline", seed=4)
        est = QueryInterceptRanker(model_kind="no-intercept-baseline").fit(X, y, query_ids=qids)
        proba = est.predict_proba(X[:5])
        np.testing.assert_allclose(proba.sum(axis=1), 1.0, atol=1e-12)


class TestScore:
    def test_map_range(self):
        X, y, qids, _ = dataset_arrays(seed=6)
        est = QueryInterceptRanker().fit(X, y, query_ids=qids)
        value = est.score(X, y, query_ids=qids)
        assert 0.0 <= value <= 1.0

    def test_perfectly_ranked_data(self):
        X = np.array([[2.0], [1.0], [-1.0], [-2.0]])
        y = np.array([1, 1, 0, 0])
        est = QueryInterceptRanker().fit(X, y)
        assert est.score(X, y) == 1.0
