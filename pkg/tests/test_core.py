import numpy as np
import pytest

from posedict.core import (DataError, Sample, build_dictionary,
                           merge_dictionaries)


def test_identity_columns():
    d = build_dictionary([(Sample([1, 0]), "A"), (Sample([0, 1]), "B")],
                         normalize=False)
    assert np.array_equal(d.columns, np.eye(2))
    assert d.labels == ("A", "B")
    assert d.class_index == {"A": [0], "B": [1]}


def test_normalize_3_4_5():
    d = build_dictionary([(Sample([3, 4]), "A")], normalize=True)
    assert np.allclose(d.columns[:, 0], [0.6, 0.8])
    assert d.normalized


def test_dimension_mismatch():
    samples = [(Sample(np.ones(4)), "A"), (Sample(np.ones(5)), "B")]
    with pytest.raises(DataError, match="length mismatch"):
        build_dictionary(samples, normalize=False)


def test_empty_input_rejected():
    with pytest.raises(DataError):
        build_dictionary([], normalize=False)


def test_zero_column_rejected_under_normalize():
    with pytest.raises(DataError, match="zero-norm"):
        build_dictionary([(Sample([0.0, 0.0]), "A")], normalize=True)


def test_sample_invariants():
    with pytest.raises(DataError):
        Sample([])
    with pytest.raises(DataError):
        Sample([1.0, np.nan])


def test_build_read_back():
    rng = np.random.default_rng(7)
    samples = [(Sample(rng.uniform(0, 1, 6) + 0.01), f"c{i % 3}") for i in range(9)]
    d = build_dictionary(samples, normalize=True)
    for j, (s, _) in enumerate(samples):
        scale = np.linalg.norm(s.values)
        assert np.allclose(d.columns[:, j] * scale, s.values)
    d2 = build_dictionary(samples, normalize=False)
    for j, (s, _) in enumerate(samples):
        assert np.array_equal(d2.columns[:, j], s.values)


def _random_dict(rng, n, prefix):
    samples = [(Sample(rng.uniform(0.01, 1, 5)), f"{prefix}{i % 2}") for i in range(n)]
    return build_dictionary(samples, normalize=False)


def test_merge_basic_and_class_index():
    rng = np.random.default_rng(1)
    a = _random_dict(rng, 2, "c")
    b = _random_dict(rng, 2, "c")
    m = merge_dictionaries(a, b)
    assert m.n_samples == 4
    assert m.class_index == {"c0": [0, 2], "c1": [1, 3]}
    assert np.array_equal(m.columns[:, :2], a.columns)
    assert np.array_equal(m.columns[:, 2:], b.columns)


def test_merge_associative_on_columns():
    rng = np.random.default_rng(2)
    a, b, c = (_random_dict(rng, n, p) for n, p in [(3, "x"), (2, "y"), (4, "x")])
    left = merge_dictionaries(merge_dictionaries(a, b), c)
    right = merge_dictionaries(a, merge_dictionaries(b, c))
    assert np.array_equal(left.columns, right.columns)
    assert left.labels == right.labels
    assert left.class_index == right.class_index


def test_merge_errors():
    rng = np.random.default_rng(3)
    a = _random_dict(rng, 2, "c")
    bad = build_dictionary([(Sample(np.ones(4)), "c0")], normalize=False)
    with pytest.raises(DataError, match="dimension mismatch"):
        merge_dictionaries(a, bad)
    norm = build_dictionary([(Sample(np.ones(5)), "c0")], normalize=True)
    with pytest.raises(DataError, match="normalization"):
        merge_dictionaries(a, norm)


def test_class_index_round_trip():
    rng = np.random.default_rng(4)
    d = _random_dict(rng, 8, "k")
    for cid, positions in d.class_index.items():
        assert all(d.labels[j] == cid for j in positions)


def test_dictionary_is_immutable():
    d = _random_dict(np.random.default_rng(5), 4, "c")
    with pytest.raises(ValueError):
        d.columns[0, 0] = 9.0
