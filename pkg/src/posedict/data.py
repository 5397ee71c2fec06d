"""Dataset ingestion and the random train/test split protocol.

Datasets live on disk as ``root/<class-id>/<image>`` with PGM or grayscale
PNG images; an optional parallel ``clouds/<class-id>/<sample>.ply`` tree
pairs samples with 3D clouds for augmentation.  Splits select theta
training samples per class with a counter-based generator keyed on
(seed, repeat, class-id), so they are reproducible regardless of iteration
order or parallelism.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import ConfigError, DataError, Sample
from .formats import read_image, read_ply

_IMAGE_SUFFIXES = (".pgm", ".png")


def bilinear_resize(image: np.ndarray, size: tuple[int, int]) -> np.ndarray:
    """Resize an (h, w) image to (width, height) by bilinear interpolation.

    Pixel centers are aligned as in standard image resampling: source
    coordinate = (target + 0.5) * scale - 0.5, clamped at the borders.
    """
    image = np.asarray(image, dtype=np.float64)
    h, w = image.shape
    tw, th = size
    if tw < 1 or th < 1:
        raise DataError("target resolution must be positive")
    if (w, h) == (tw, th):
        return image.copy()

    def axis_coords(src, dst):
        x = (np.arange(dst) + 0.5) * (src / dst) - 0.5
        x = np.clip(x, 0.0, src - 1.0)
        lo = np.floor(x).astype(np.intp)
        hi = np.minimum(lo + 1, src - 1)
        return lo, hi, x - lo

    ylo, yhi, fy = axis_coords(h, th)
    xlo, xhi, fx = axis_coords(w, tw)
    fy = fy[:, None]
    top = image[ylo][:, xlo] * (1 - fx) + image[ylo][:, xhi] * fx
    bottom = image[yhi][:, xlo] * (1 - fx) + image[yhi][:, xhi] * fx
    return top * (1 - fy) + bottom * fy


@dataclass(frozen=True)
class DatasetSpec:
    root: Path
    resolution: tuple[int, int] = (32, 32)  # (width, height)

    def __post_init__(self):
        object.__setattr__(self, "root", Path(self.root))
        w, h = self.resolution
        if w < 1 or h < 1:
            raise ConfigError("working resolution must be positive")


def load_dataset(spec: DatasetSpec):
    """Load ``root/<class-id>/<image>`` into (Sample, class-id) pairs.

    Images are resized to the working resolution, scaled to [0, 1] and
    vectorized row-major.  Order is deterministic: classes and files sorted
    by name.
    """
    root = spec.root
    if not root.is_dir():
        raise DataError(f"dataset root {root} is not a directory")
    class_dirs = sorted(p for p in root.iterdir() if p.is_dir())
    if not class_dirs:
        raise DataError(f"dataset root {root} has no class directories")
    out = []
    for class_dir in class_dirs:
        files = sorted(
            p for p in class_dir.iterdir()
            if p.is_file() and p.suffix.lower() in _IMAGE_SUFFIXES
        )
        if not files:
            raise DataError(f"class directory {class_dir} contains no images")
        for path in files:
            image = read_image(path)
            image = bilinear_resize(image, spec.resolution)
            sample = Sample(image.ravel(), source_id=f"{class_dir.name}/{path.stem}")
            out.append((sample, class_dir.name))
    return out


def load_cloud_tree(root) -> dict[str, "object"]:
    """Load ``root/<class-id>/<sample>.ply`` keyed by 'class-id/sample'."""
    root = Path(root)
    if not root.is_dir():
        raise DataError(f"cloud root {root} is not a directory")
    clouds = {}
    for class_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        for path in sorted(class_dir.glob("*.ply")):
            clouds[f"{class_dir.name}/{path.stem}"] = read_ply(path)
    return clouds


@dataclass(frozen=True)
class SplitSpec:
    theta: int          # training samples per class
    repeats: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.theta < 1:
            raise ConfigError("theta must be >= 1")
        if self.repeats < 1:
            raise ConfigError("repeats must be >= 1")


def _class_rng(seed: int, repeat: int, class_id: str) -> np.random.Generator:
    digest = hashlib.sha256(f"split|{seed}|{repeat}|{class_id}".encode()).digest()
    return np.random.Generator(np.random.Philox(key=int.from_bytes(digest[:16], "little")))


def make_splits(samples, spec: SplitSpec):
    """Random per-class train/test partitions, one pair per repeat.

    Each class contributes exactly ``theta`` training samples, chosen
    without replacement by a generator keyed on (seed, repeat, class-id);
    the remainder forms the test set.
    """
    by_class: dict[str, list] = {}
    for sample, cid in samples:
        by_class.setdefault(str(cid), []).append(sample)
    if not by_class:
        raise DataError("no samples to split")
    # canonical within-class order so the draw is independent of input order
    for members in by_class.values():
        members.sort(key=lambda s: (s.source_id is None, s.source_id or ""))
    for cid, members in by_class.items():
        if spec.theta >= len(members):
            raise ConfigError(
                f"theta={spec.theta} must be smaller than class '{cid}' size {len(members)}"
            )
    splits = []
    for repeat in range(spec.repeats):
        train, test = [], []
        for cid in sorted(by_class):
            members = by_class[cid]
            perm = _class_rng(spec.seed, repeat, cid).permutation(len(members))
            chosen = set(perm[: spec.theta].tolist())
            for i, sample in enumerate(members):
                (train if i in chosen else test).append((sample, cid))
        splits.append((train, test))
    return splits
