"""File formats: PGM images (P2/P5), grayscale PNG, and a strict ASCII PLY
subset for textured point clouds (element vertex with x, y, z, gray)."""
from __future__ import annotations

import re
from pathlib import Path

import numpy as np
from PIL import Image

from .core import DataError
from .synth import TexturedCloud

# ITU-R 601 luma weights for color -> grayscale
_LUMA = np.array([0.299, 0.587, 0.114])


def _pgm_tokens(data: bytes, count: int):
    """First `count` whitespace-separated tokens of a PGM header, skipping
    '#' comments; returns (tokens, offset just past the last one)."""
    tokens = []
    pos = 0
    while len(tokens) < count:
        if pos >= len(data):
            raise DataError("truncated PGM header")
        ch = data[pos:pos + 1]
        if ch == b"#":
            pos = data.index(b"\n", pos) + 1
        elif ch.isspace():
            pos += 1
        else:
            m = re.match(rb"[^\s#]+", data[pos:])
            tokens.append(m.group(0))
            pos += m.end()
    return tokens, pos


def read_pgm(path) -> np.ndarray:
    """Read a P2 or P5 PGM into a float image scaled to [0, 1]."""
    data = Path(path).read_bytes()
    (magic, w, h, maxval), offset = _pgm_tokens(data, 4)
    if magic not in (b"P2", b"P5"):
        raise DataError(f"{path}: not a PGM file (magic {magic!r})")
    w, h, maxval = int(w), int(h), int(maxval)
    if w < 1 or h < 1 or not (0 < maxval < 65536):
        raise DataError(f"{path}: invalid PGM dimensions or maxval")
    n = w * h
    if magic == b"P5":
        offset += 1  # single whitespace byte after maxval
        dtype = np.dtype(">u2" if maxval > 255 else np.uint8)
        if len(data) - offset < n * dtype.itemsize:
            raise DataError(f"{path}: truncated PGM pixel data")
        raw = np.frombuffer(data, dtype=dtype, count=n, offset=offset)
    else:
        tokens, _ = _pgm_tokens(data[offset:], n)
        raw = np.array([int(t) for t in tokens])
    if raw.size != n:
        raise DataError(f"{path}: truncated PGM pixel data")
    if raw.max(initial=0) > maxval:
        raise DataError(f"{path}: pixel value exceeds maxval")
    return raw.astype(np.float64).reshape(h, w) / maxval


def write_pgm(path, image: np.ndarray) -> None:
    """Write a float image in [0, 1] as binary PGM (P5, maxval 255)."""
    image = np.asarray(image, dtype=np.float64)
    if image.ndim != 2:
        raise DataError("image must be 2-D")
    if image.min() < 0 or image.max() > 1:
        raise DataError("image values must lie in [0, 1]")
    h, w = image.shape
    pixels = np.floor(image * 255 + 0.5).astype(np.uint8)
    with open(path, "wb") as f:
        f.write(f"P5\n{w} {h}\n255\n".encode())
        f.write(pixels.tobytes())


def read_image(path) -> np.ndarray:
    """Decode a PGM or PNG file to a grayscale float image in [0, 1]."""
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".pgm":
        return read_pgm(path)
    if suffix == ".png":
        with Image.open(path) as img:
            arr = np.asarray(img, dtype=np.float64)
        if arr.ndim == 2:
            return arr / 255.0
        if arr.ndim == 3:
            return (arr[..., :3] @ _LUMA) / 255.0
        raise DataError(f"{path}: unsupported PNG layout")
    raise DataError(f"{path}: unsupported image format '{suffix}'")


def read_ply(path) -> TexturedCloud:
    """Parse the supported ASCII PLY subset into a textured cloud.

    Accepts exactly one 'element vertex' with float properties x, y, z and a
    gray property (float in [0,1] or uchar in [0,255]); anything else is
    rejected.
    """
    lines = Path(path).read_text().splitlines()
    it = iter(lines)
    if next(it, None) != "ply":
        raise DataError(f"{path}: missing 'ply' magic")
    if next(it, None) != "format ascii 1.0":
        raise DataError(f"{path}: only 'format ascii 1.0' is supported")
    n_vertices = None
    properties = []
    gray_scale = None
    for line in it:
        if line.startswith("comment"):
            continue
        parts = line.split()
        if parts[0] == "element":
            if parts[1] != "vertex" or n_vertices is not None:
                raise DataError(f"{path}: unsupported element '{parts[1]}'")
            n_vertices = int(parts[2])
        elif parts[0] == "property":
            if n_vertices is None:
                raise DataError(f"{path}: property outside element vertex")
            ptype, name = parts[1], parts[2]
            if name in ("x", "y", "z"):
                if ptype not in ("float", "float32", "double", "float64"):
                    raise DataError(f"{path}: coordinate '{name}' must be float")
            elif name == "gray":
                if ptype in ("uchar", "uint8"):
                    gray_scale = 255.0
                elif ptype in ("float", "float32", "double", "float64"):
                    gray_scale = 1.0
                else:
                    raise DataError(f"{path}: unsupported gray type '{ptype}'")
            else:
                raise DataError(f"{path}: unsupported property '{name}'")
            properties.append(name)
        elif parts[0] == "end_header":
            break
        else:
            raise DataError(f"{path}: unsupported header line '{line}'")
    else:
        raise DataError(f"{path}: missing end_header")
    if n_vertices is None or sorted(properties) != ["gray", "x", "y", "z"]:
        raise DataError(f"{path}: vertex element must have exactly x, y, z, gray")

    rows = np.loadtxt(it, dtype=np.float64, ndmin=2)
    if rows.shape != (n_vertices, 4):
        raise DataError(
            f"{path}: expected {n_vertices} rows of 4 values, got {rows.shape}"
        )
    cols = {name: rows[:, i] for i, name in enumerate(properties)}
    points = np.column_stack([cols["x"], cols["y"], cols["z"]])
    gray = cols["gray"] / gray_scale
    if gray.min() < 0 or gray.max() > 1:
        raise DataError(f"{path}: gray values out of range")
    return TexturedCloud(points, gray)


def write_ply(path, cloud: TexturedCloud) -> None:
    """Write a textured cloud in the ASCII PLY subset read_ply accepts."""
    with open(path, "w") as f:
        f.write("ply\nformat ascii 1.0\n")
        f.write(f"element vertex {cloud.points.shape[0]}\n")
        f.write("property float x\nproperty float y\nproperty float z\n")
        f.write("property float gray\nend_header\n")
        for (x, y, z), g in zip(cloud.points, cloud.intensities):
            f.write(f"{x:.17g} {y:.17g} {z:.17g} {g:.17g}\n")
