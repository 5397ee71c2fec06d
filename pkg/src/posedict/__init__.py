"""Pose-robust representation-based classification.

Library for collaborative (l2) and sparse (l1) representation classifiers
with an online class-elimination scheme, plus a perspective point-cloud
renderer for building pose-augmented training dictionaries.
"""

from .core import (ClassReport, ConfigError, DataError, Dictionary, Sample,
                   build_dictionary, merge_dictionaries)
from .solvers import CrcConfig, SrcConfig, SrcResult, solve_crc, solve_src
from .classify import (EliminationConfig, EliminationTrace,
                       class_reconstructions, classify_query,
                       classify_with_elimination)
from .synth import (BehindCameraError, Camera, PoseSweep, TexturedCloud,
                    make_head, project_point, render, render_image,
                    rotate_about_centroid, synthesize_auxiliary, yaw_rotation)
from .data import DatasetSpec, SplitSpec, bilinear_resize, load_dataset, make_splits
from .bench import (AugmentConfig, EvalReport, error_profile, evaluate,
                    sweep_proportions, synthetic_pose_benchmark)

__version__ = "0.1.0"
