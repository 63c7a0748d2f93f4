import dataclasses

import numpy as np
import pytest

from qirank import Dataset, DatasetError, OrdinalScale, Record, validate_dataset


def rec(qid, label, *features):
    return Record(query_id=qid, label=label, features=tuple(float(f) for f in features))


class TestOrdinalScale:
    def test_valid_levels(self):
        assert OrdinalScale(2).labels == range(2)
        assert OrdinalScale(3).labels == range(3)

    @pytest.mark.parametrize("levels", [0, 1, 4, 10])
    def test_invalid_levels(self, levels):
        with pytest.raises(DatasetError):
            OrdinalScale(levels)

    def test_membership(self):
        scale = OrdinalScale(2)
        assert 0 in scale and 1 in scale
        assert 2 not in scale and -1 not in scale


class TestValidateDataset:
    def test_two_records_one_query(self):
        ds = validate_dataset([rec("q1", 0, 1.0, 2.0), rec("q1", 1, 0.5, 0.5)])
        assert ds.n_queries == 1
        assert len(ds.group("q1")) == 2
        assert ds.scale.levels == 2
        assert ds.k == 2

    def test_inconsistent_dimensionality(self):
        with pytest.raises(DatasetError, match="inconsistent dimensionality"):
            validate_dataset([rec("q1", 0, 1, 2, 3), rec("q1", 1, 1, 2, 3, 4)])

    def test_trinary_inference(self):
        records = [
            rec("a", 0, 1.0), rec("a", 2, 2.0),
            rec("b", 1, 3.0), rec("b", 0, 4.0),
            rec("c", 1, 5.0), rec("c", 0, 6.0),
        ]
        ds = validate_dataset(records)
        assert ds.scale.levels == 3
        assert ds.n_queries == 3

    def test_error_names_offending_record(self):
        records = [rec("q1", 0, 1.0), rec("q1", 1, float("nan"))]
        with pytest.raises(DatasetError, match="record 1"):
            validate_dataset(records)
        with pytest.raises(DatasetError, match="record 2"):
            validate_dataset([rec("q", 0, 1.0), rec("q", 1, 2.0), rec("q", 3, 0.0)])

    def test_label_outside_declared_scale(self):
        with pytest.raises(DatasetError, match="outside scale"):
            validate_dataset([rec("q", 2, 1.0)], levels=2)

    def test_label_of_three_rejected(self):
        with pytest.raises(DatasetError):
            validate_dataset([rec("q", 3, 1.0)])

    def test_all_zero_labels_infer_binary(self):
        ds = validate_dataset([rec("q", 0, 1.0), rec("q", 0, 2.0)])
        assert ds.scale.levels == 2

    def test_empty_rejected(self):
        with pytest.raises(DatasetError, match="no records"):
            validate_dataset([])

    def test_declared_scale_object(self):
        ds = validate_dataset([rec("q", 1, 1.0)], levels=OrdinalScale(3))
        assert ds.scale.levels == 3

    def test_non_integer_label(self):
        with pytest.raises(DatasetError, match="non-integer label"):
            validate_dataset([Record("q", 1.0, (0.5,))])  # type: ignore[arg-type]

    def test_k_zero_allowed_in_memory(self):
        ds = validate_dataset([Record("q", 0, ()), Record("q", 1, ())])
        assert ds.k == 0
        assert ds.feature_matrix.shape == (2, 0)


class TestGrouping:
    def test_round_trip_on_grouped_input(self):
        rng = np.random.default_rng(11)
        records = []
        for qi in range(6):
            for _ in range(int(rng.integers(1, 5))):
                records.append(rec(f"q{qi}", int(rng.integers(0, 2)), *rng.uniform(-1, 1, 3)))
        ds = validate_dataset(records)
        rebuilt = [r for qid in ds.query_ids for r in ds.group(qid)]
        assert rebuilt == records

    def test_interleaved_input_is_stably_regrouped(self):
        records = [rec("a", 0, 1), rec("b", 1, 2), rec("a", 1, 3), rec("b", 0, 4)]
        ds = validate_dataset(records)
        assert ds.query_ids == ("a", "b")
        assert [r.features[0] for r in ds.group("a")] == [1.0, 3.0]
        assert [r.features[0] for r in ds.group("b")] == [2.0, 4.0]
        spans = list(ds.query_index.values())
        assert spans[0].stop == spans[1].start  # contiguous partition

    def test_idempotent(self):
        records = [rec("b", 1, 1), rec("a", 0, 2), rec("b", 0, 3)]
        once = validate_dataset(records)
        twice = validate_dataset(once.records, levels=once.scale.levels)
        assert once == twice
        inferred_again = validate_dataset(once.records)
        assert once == inferred_again

    def test_query_index_partitions_records(self):
        records = [rec("a", 0, 1), rec("b", 1, 2), rec("b", 0, 3)]
        ds = validate_dataset(records)
        covered = sorted(i for span in ds.query_index.values() for i in span)
        assert covered == list(range(len(ds.records)))


class TestImmutability:
    def test_record_frozen(self):
        r = rec("q", 1, 1.0)
        with pytest.raises(dataclasses.FrozenInstanceError):
            r.label = 0  # type: ignore[misc]

    def test_feature_matrix_read_only(self):
        ds = validate_dataset([rec("q", 0, 1.0, 2.0)])
        with pytest.raises(ValueError):
            ds.feature_matrix[0, 0] = 9.0
        with pytest.raises(ValueError):
            ds.label_array[0] = 1
