import csv

import numpy as np
import pytest

from posedict.bench import (AGGREGATE_HEADER, RAW_HEADER, AugmentConfig,
                            error_profile, evaluate, sweep_proportions,
                            synthetic_pose_benchmark, write_aggregate_csv,
                            write_profile_csv, write_raw_csv)
from posedict.classify import EliminationConfig, classify_query
from posedict.core import ConfigError, DataError, Sample, build_dictionary
from posedict.solvers import CrcConfig


def separable_splits(n_classes=4, dim=8, repeats=3):
    """Orthogonal class subspaces: every query is perfectly recoverable."""
    splits = []
    rng = np.random.default_rng(0)
    for _ in range(repeats):
        train, test = [], []
        for k in range(n_classes):
            lo = k * (dim // n_classes)
            for i in range(2):
                v = np.zeros(dim)
                v[lo + i] = 1.0
                train.append((Sample(v, source_id=f"c{k}/tr{i}"), f"c{k}"))
            q = np.zeros(dim)
            q[lo] = 0.7
            q[lo + 1] = 0.3
            test.append((Sample(q, source_id=f"c{k}/te"), f"c{k}"))
        splits.append((train, test))
    return splits


def test_separable_dataset_scores_100():
    report = evaluate(separable_splits(), "crc", theta=2, proportion=0.0)
    assert report.mean_rate == 100.0
    assert report.std_rate == 0.0
    assert report.per_repeat_rates == (100.0, 100.0, 100.0)


def test_3dpd_without_augmentation_reduces_to_crc():
    splits = separable_splits()
    plain = evaluate(splits, "crc", theta=2, proportion=0.0)
    reduced = evaluate(splits, "3dpd-crc", theta=2, proportion=0.0)
    assert reduced.per_repeat_rates == plain.per_repeat_rates
    assert reduced.mean_rate == plain.mean_rate


def test_mean_std_consistent_with_rates():
    report = evaluate(separable_splits(), "src", theta=2, proportion=0.25)
    rates = np.array(report.per_repeat_rates)
    assert abs(report.mean_rate - rates.mean()) < 1e-9
    expected_std = rates.std(ddof=1) if len(rates) > 1 else 0.0
    assert abs(report.std_rate - expected_std) < 1e-9
    assert all(0 <= r <= 100 for r in rates)


def test_unknown_method_rejected():
    with pytest.raises(ConfigError):
        evaluate(separable_splits(), "pca", theta=2)


def test_missing_cloud_raises_data_error():
    from posedict.synth import Camera, PoseSweep, make_head

    head = make_head(0, n_points=200)
    augment = AugmentConfig(clouds={}, base_cam=Camera.facing(head),
                            sweep=PoseSweep((4.0,)), resolution=(8, 8))
    splits = separable_splits(repeats=1)
    with pytest.raises(DataError, match="no cloud"):
        evaluate(splits, "3dpd-crc", theta=2, augment=augment)


def test_sweep_cardinality_and_csv_schema(tmp_path):
    splits = separable_splits(repeats=2)
    reports = sweep_proportions(splits, [0.25, 0.5], ["crc", "src"], theta=2)
    assert len(reports) == 4
    agg = tmp_path / "agg.csv"
    raw = tmp_path / "raw.csv"
    write_aggregate_csv(agg, reports)
    write_raw_csv(raw, reports)
    with open(agg) as f:
        rows = list(csv.reader(f))
    assert rows[0] == AGGREGATE_HEADER
    assert len(rows) == 1 + 4
    with open(raw) as f:
        rows = list(csv.reader(f))
    assert rows[0] == RAW_HEADER
    assert len(rows) == 1 + 4 * 2  # cells x repeats


def test_sweep_empty_lists_rejected():
    splits = separable_splits(repeats=1)
    with pytest.raises(ConfigError):
        sweep_proportions(splits, [], ["crc"], theta=2)
    with pytest.raises(ConfigError):
        sweep_proportions(splits, [0.5], [], theta=2)


def test_reports_byte_identical_across_reruns(tmp_path):
    splits = separable_splits(repeats=2)
    paths = []
    for name in ("a.csv", "b.csv"):
        reports = sweep_proportions(splits, [0.25, 0.5], ["crc"], theta=2)
        path = tmp_path / name
        write_aggregate_csv(path, reports)
        paths.append(path)
    assert paths[0].read_bytes() == paths[1].read_bytes()


# -------------------------------------------------------- error profile


def test_profile_single_class():
    d = build_dictionary([(Sample([0.6, 0.8]), "only")], normalize=True)
    y = np.array([1.0, 0.0])
    blocks = error_profile(d, y, EliminationConfig(0.0, CrcConfig()))
    assert len(blocks) == 1 and len(blocks[0]) == 1
    cid, err = blocks[0][0]
    assert cid == "only"
    report = classify_query(d, y, CrcConfig())
    assert err == report.errors()["only"]


def test_profile_query_in_class_span():
    d = build_dictionary(
        [(Sample([1, 0, 0]), "A"), (Sample([0, 1, 0]), "A"), (Sample([0, 0, 1]), "B")],
        normalize=True,
    )
    y = np.array([0.6, 0.4, 0.0])
    blocks = error_profile(d, y, EliminationConfig(0.0, CrcConfig(mu=1e-10)))
    errors = dict(blocks[0])
    assert errors["A"] < 1e-4


def test_profile_matches_class_report_exactly():
    rng = np.random.default_rng(1)
    samples = [(Sample(np.abs(rng.normal(size=10)) + 1e-3), f"c{i % 5}")
               for i in range(15)]
    d = build_dictionary(samples, normalize=True)
    y = np.abs(rng.normal(size=10))
    cfg = EliminationConfig(0.0, CrcConfig())
    blocks = error_profile(d, y, cfg)
    report = classify_query(d, y, cfg.solver)
    assert dict(blocks[0]) == report.errors()


def test_profile_with_elimination_blocks(tmp_path):
    rng = np.random.default_rng(2)
    samples = [(Sample(np.abs(rng.normal(size=10)) + 1e-3), f"c{i % 5}")
               for i in range(15)]
    d = build_dictionary(samples, normalize=True)
    y = np.abs(rng.normal(size=10))
    cfg = EliminationConfig(0.5, CrcConfig())
    blocks = error_profile(d, y, cfg, with_elimination=True)
    assert len(blocks) == 3  # floor(0.5*5)=2 rounds + final block
    assert [len(b) for b in blocks] == [5, 4, 3]
    path = tmp_path / "profile.csv"
    write_profile_csv(path, blocks)
    with open(path) as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["round", "class", "error"]
    assert len(rows) == 1 + 5 + 4 + 3


# ------------------------------------------------- synthetic benchmark


def test_synthetic_benchmark_augmentation_not_harmful():
    splits, augment = synthetic_pose_benchmark(seed=0, n_subjects=6)
    plain = evaluate(splits, "crc", theta=2, proportion=0.0)
    augmented = evaluate(splits, "3dpd-crc", theta=2, proportion=0.0,
                         augment=augment)
    assert augmented.mean_rate >= plain.mean_rate
