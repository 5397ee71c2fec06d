"""Evaluation harness: recognition rates, elimination-proportion sweeps and
per-class error-profile export."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .classify import EliminationConfig, classify_with_elimination
from .core import ConfigError, DataError, Dictionary, build_dictionary, merge_dictionaries
from .solvers import CrcConfig, SrcConfig
from .synth import Camera, PoseSweep, TexturedCloud, make_head, render_image, \
    rotate_about_centroid, synthesize_auxiliary
from .core import Sample

METHODS = ("crc", "src", "3dpd-crc")

RAW_HEADER = ["method", "theta", "proportion", "repeat", "rate"]
AGGREGATE_HEADER = ["method", "theta", "proportion", "mean", "std"]


@dataclass(frozen=True)
class EvalReport:
    method: str
    theta: int
    proportion: float
    mean_rate: float
    std_rate: float
    per_repeat_rates: tuple


@dataclass(frozen=True)
class AugmentConfig:
    """Virtual-sample augmentation: a cloud per training sample source-id,
    rendered over a yaw sweep and resized to the working resolution."""

    clouds: dict            # source-id -> TexturedCloud
    base_cam: Camera
    sweep: PoseSweep
    resolution: tuple[int, int]


def _aggregate(rates):
    rates = list(rates)
    mean = float(np.mean(rates))
    std = float(np.std(rates, ddof=1)) if len(rates) > 1 else 0.0
    return mean, std


def _solver_for(method: str, crc: CrcConfig, src: SrcConfig):
    if method in ("crc", "3dpd-crc"):
        return crc
    if method == "src":
        return src
    raise ConfigError(f"unknown method '{method}' (expected one of {METHODS})")


def _auxiliary_for(train, augment: AugmentConfig) -> Dictionary:
    clouds = []
    for sample, cid in train:
        cloud = augment.clouds.get(sample.source_id)
        if cloud is None:
            raise DataError(
                f"augmentation requested but no cloud for training sample "
                f"'{sample.source_id}'"
            )
        clouds.append((cloud, cid))
    return synthesize_auxiliary(
        clouds, augment.base_cam, augment.sweep, resolution=augment.resolution
    )


def evaluate(splits, method: str, theta: int, proportion: float = 0.0,
             crc: CrcConfig = CrcConfig(), src: SrcConfig = SrcConfig(),
             augment: AugmentConfig | None = None) -> EvalReport:
    """Recognition rate of one method at one elimination proportion.

    Per repeat: a dictionary is built from the training samples only
    (virtual samples merged in for '3dpd-crc' when augmentation is given),
    every test sample is classified with the elimination scheme, and the
    percent-correct rates are aggregated across repeats (std with ddof=1).
    """
    solver = _solver_for(method, crc, src)
    cfg = EliminationConfig(proportion=proportion, solver=solver)
    use_aux = method == "3dpd-crc" and augment is not None
    rates = []
    for train, test in splits:
        dictionary = build_dictionary(train, normalize=True)
        if use_aux:
            dictionary = merge_dictionaries(dictionary, _auxiliary_for(train, augment))
        correct = 0
        for sample, cid in test:
            trace = classify_with_elimination(dictionary, sample, cfg)
            if trace.final_report.predicted == str(cid):
                correct += 1
        rates.append(100.0 * correct / len(test))
    mean, std = _aggregate(rates)
    return EvalReport(method, theta, proportion, mean, std, tuple(rates))


def sweep_proportions(splits, proportions, methods, theta: int,
                      crc: CrcConfig = CrcConfig(), src: SrcConfig = SrcConfig(),
                      augment: AugmentConfig | None = None):
    """Evaluate every (method, proportion) cell; one EvalReport per cell."""
    proportions = list(proportions)
    methods = list(methods)
    if not proportions:
        raise ConfigError("proportion list must be nonempty")
    if not methods:
        raise ConfigError("method list must be nonempty")
    return [
        evaluate(splits, method, theta, proportion, crc=crc, src=src, augment=augment)
        for method in methods
        for proportion in proportions
    ]


def error_profile(dictionary: Dictionary, query, cfg: EliminationConfig,
                  with_elimination: bool = False):
    """Per-class reconstruction errors as (class-id, error) rows.

    Without elimination: one block from a single solve.  With elimination:
    one block per round plus the final surviving-class block.
    """
    from .classify import classify_query, elimination_rounds

    if not with_elimination:
        report = classify_query(dictionary, query, cfg.solver)
        return [sorted(report.errors().items())]
    total = elimination_rounds(cfg.proportion, len(dictionary.classes))
    surviving = list(dictionary.classes)
    blocks = []
    for _ in range(total):
        errors = classify_query(dictionary.restricted(surviving), query,
                                cfg.solver).errors()
        blocks.append(sorted(errors.items()))
        # remove the worst class; ties go to the lexicographically last id
        worst = max(sorted(errors), key=lambda cid: (errors[cid], cid))
        surviving.remove(worst)
    final = classify_query(dictionary.restricted(surviving), query, cfg.solver)
    blocks.append(sorted(final.errors().items()))
    return blocks


def write_raw_csv(path, reports) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(RAW_HEADER)
        for r in reports:
            for repeat, rate in enumerate(r.per_repeat_rates):
                writer.writerow([r.method, r.theta, r.proportion, repeat, repr(rate)])


def write_aggregate_csv(path, reports) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(AGGREGATE_HEADER)
        for r in reports:
            writer.writerow([r.method, r.theta, r.proportion,
                             repr(r.mean_rate), repr(r.std_rate)])


def write_profile_csv(path, blocks) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["round", "class", "error"])
        for i, block in enumerate(blocks):
            for cid, err in block:
                writer.writerow([i, cid, repr(err)])


def synthetic_pose_benchmark(seed: int = 0, n_subjects: int = 20,
                             resolution: tuple[int, int] = (32, 32),
                             train_yaws=(-3.0, 3.0), test_yaws=(-25.0, 25.0),
                             sweep: PoseSweep | None = None):
    """Build the seeded synthetic-head benchmark with no external data.

    Returns (splits, augment): a single train/test pair with near-frontal
    training renders and large-yaw test renders per subject, plus the
    augmentation config mapping each training sample to its subject's head.
    """
    if sweep is None:
        sweep = PoseSweep.symmetric([4, 8, 12, 16, 20])
    heads = {f"s{idx:02d}": make_head(idx, seed=seed) for idx in range(n_subjects)}
    any_head = next(iter(heads.values()))
    # focal scaled so the head fills most of the 64x64 render
    cam = Camera.facing(any_head, focal=256.0, image_size=(64, 64))

    from .data import bilinear_resize

    def rendered_sample(cid, cloud, yaw, tag):
        image = render_image(rotate_about_centroid(cloud, yaw), cam)
        image = bilinear_resize(image, resolution)
        return Sample(image.ravel(), source_id=f"{cid}/{tag}")

    train, test, clouds = [], [], {}
    for cid in sorted(heads):
        cloud = heads[cid]
        for yaw in train_yaws:
            sample = rendered_sample(cid, cloud, yaw, f"train{yaw:+g}")
            train.append((sample, cid))
            clouds[sample.source_id] = cloud
        for yaw in test_yaws:
            test.append((rendered_sample(cid, cloud, yaw, f"test{yaw:+g}"), cid))
    augment = AugmentConfig(clouds=clouds, base_cam=cam, sweep=sweep,
                            resolution=resolution)
    return [(train, test)], augment
