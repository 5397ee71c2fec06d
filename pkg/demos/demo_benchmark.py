"""End-to-end pose benchmark on synthetic heads, no external data.

Twenty subjects are rendered near-frontal for training and at +/-25 degree
yaw for testing.  Plain ridge classification struggles with the pose gap;
merging rendered virtual samples into the dictionary and pruning
poorly-reconstructing classes recovers most of the accuracy.
"""
import numpy as np

from posedict import evaluate, sweep_proportions, synthetic_pose_benchmark
from posedict.bench import write_aggregate_csv

splits, augment = synthetic_pose_benchmark(seed=0, n_subjects=20)
train, test = splits[0]
print(f"{len(train)} training renders, {len(test)} test renders at +/-25 deg")

plain = evaluate(splits, "crc", theta=2, proportion=0.0)
print(f"\nplain l2 classification: {plain.mean_rate:.1f}%")

reports = sweep_proportions(splits, list(np.round(np.arange(0.1, 1.0, 0.1), 1)),
                            ["3dpd-crc"], theta=2, augment=augment)
print("\naugmented dictionary + elimination:")
for r in reports:
    print(f"  proportion {r.proportion:.1f}: {r.mean_rate:.1f}%")

write_aggregate_csv("synthetic_benchmark.csv", [plain] + reports)
print("\nwrote synthetic_benchmark.csv")
