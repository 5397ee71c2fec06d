"""Virtual-sample rendering: rigid transform, perspective projection and
point splatting of textured 3D clouds.

A point v is mapped by v' = R v + tau and then projected to
s = [o_x + f v'_x / v'_z, o_y - f v'_y / v'_z]; note the minus on the
second coordinate (image rows grow downward).  Rendering splats each point
to its nearest pixel with a smallest-depth z-buffer.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .core import DataError, Sample, build_dictionary, Dictionary


class BehindCameraError(DataError):
    """Point lies at or behind the camera plane (depth <= 0)."""


@dataclass(frozen=True)
class TexturedCloud:
    """3D points with per-point grayscale intensities in [0, 1]."""

    points: np.ndarray       # (n, 3)
    intensities: np.ndarray  # (n,)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        vals = np.asarray(self.intensities, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 3 or pts.shape[0] == 0:
            raise DataError("points must be a nonempty (n, 3) array")
        if vals.shape != (pts.shape[0],):
            raise DataError("intensities length must match point count")
        if not (np.all(np.isfinite(pts)) and np.all(np.isfinite(vals))):
            raise DataError("cloud contains non-finite entries")
        pts = pts.copy()
        vals = vals.copy()
        pts.flags.writeable = False
        vals.flags.writeable = False
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "intensities", vals)

    @property
    def centroid(self) -> np.ndarray:
        return self.points.mean(axis=0)


def yaw_rotation(degrees: float) -> np.ndarray:
    """Rotation about the vertical (y) axis."""
    psi = np.deg2rad(degrees)
    c, s = np.cos(psi), np.sin(psi)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def rotation_from_angles(yaw: float = 0.0, pitch: float = 0.0, roll: float = 0.0) -> np.ndarray:
    """Compose yaw (y axis), pitch (x axis) and roll (z axis), in degrees."""
    yw = yaw_rotation(yaw)
    px = np.deg2rad(pitch)
    rz = np.deg2rad(roll)
    cp, sp = np.cos(px), np.sin(px)
    cr, sr = np.cos(rz), np.sin(rz)
    pitch_m = np.array([[1, 0, 0], [0, cp, -sp], [0, sp, cp]])
    roll_m = np.array([[cr, -sr, 0], [sr, cr, 0], [0, 0, 1]])
    return roll_m @ pitch_m @ yw


@dataclass(frozen=True)
class Camera:
    """Perspective camera {R, tau, f, (o_x, o_y)} over a pixel grid."""

    rotation: np.ndarray
    translation: np.ndarray
    focal: float
    principal: tuple[float, float]
    image_size: tuple[int, int]  # (width, height)

    def __post_init__(self):
        R = np.asarray(self.rotation, dtype=np.float64)
        t = np.asarray(self.translation, dtype=np.float64)
        if R.shape != (3, 3) or np.max(np.abs(R.T @ R - np.eye(3))) > 1e-9:
            raise DataError("rotation must be a 3x3 orthonormal matrix")
        if t.shape != (3,):
            raise DataError("translation must be a 3-vector")
        if not (self.focal > 0):
            raise DataError("focal length must be positive")
        w, h = self.image_size
        if w < 1 or h < 1:
            raise DataError("image size must be positive")
        R = R.copy()
        t = t.copy()
        R.flags.writeable = False
        t.flags.writeable = False
        object.__setattr__(self, "rotation", R)
        object.__setattr__(self, "translation", t)

    @staticmethod
    def facing(cloud: TexturedCloud, focal: float = 1000.0,
               image_size: tuple[int, int] = (128, 128),
               distance_factor: float = 10.0) -> "Camera":
        """Identity-rotation camera placing the cloud centroid on the optical
        axis at ``distance_factor`` times the cloud radius."""
        c = cloud.centroid
        radius = float(np.max(np.linalg.norm(cloud.points - c, axis=1)))
        depth = distance_factor * max(radius, 1e-12)
        w, h = image_size
        return Camera(
            rotation=np.eye(3),
            translation=np.array([-c[0], -c[1], depth - c[2]]),
            focal=focal,
            principal=((w - 1) / 2.0, (h - 1) / 2.0),
            image_size=image_size,
        )


def project_point(v, cam: Camera) -> np.ndarray:
    """Project a single 3D point to 2D pixel coordinates."""
    v = np.asarray(v, dtype=np.float64)
    vp = cam.rotation @ v + cam.translation
    if vp[2] <= 0:
        raise BehindCameraError(f"point has nonpositive depth {vp[2]}")
    ox, oy = cam.principal
    return np.array([ox + cam.focal * vp[0] / vp[2],
                     oy - cam.focal * vp[1] / vp[2]])


def render_image(cloud: TexturedCloud, cam: Camera) -> np.ndarray:
    """Splat a cloud to an (h, w) image with a smallest-depth z-buffer.

    Out-of-frame and behind-camera points are skipped; uncovered pixels stay
    at background 0.  On an exact depth tie the later point wins.
    """
    w, h = cam.image_size
    vp = cloud.points @ cam.rotation.T + cam.translation
    z = vp[:, 2]
    front = z > 0
    ox, oy = cam.principal
    with np.errstate(divide="ignore", invalid="ignore"):
        px = np.floor(ox + cam.focal * vp[:, 0] / z + 0.5)
        py = np.floor(oy - cam.focal * vp[:, 1] / z + 0.5)
    keep = front & (px >= 0) & (px < w) & (py >= 0) & (py < h)
    px = px[keep].astype(np.intp)
    py = py[keep].astype(np.intp)
    z = z[keep]
    vals = cloud.intensities[keep]
    image = np.zeros((h, w))
    # stable sort by descending depth: the nearest point is written last
    order = np.argsort(-z, kind="stable")
    image[py[order], px[order]] = vals[order]
    return image


def render(cloud: TexturedCloud, cam: Camera) -> Sample:
    """Render and vectorize row-major into a Sample."""
    return Sample(render_image(cloud, cam).ravel())


@dataclass(frozen=True)
class PoseSweep:
    """Yaw angles (degrees) at which virtual samples are rendered."""

    yaw_angles: tuple

    def __post_init__(self):
        angles = tuple(float(a) for a in self.yaw_angles)
        if not angles:
            raise DataError("pose sweep must contain at least one angle")
        if not all(np.isfinite(angles)):
            raise DataError("pose sweep angles must be finite")
        object.__setattr__(self, "yaw_angles", angles)

    @staticmethod
    def symmetric(magnitudes) -> "PoseSweep":
        """E.g. symmetric([4, 8]) -> yaw angles (+4, -4, +8, -8)."""
        angles = []
        for m in magnitudes:
            angles.extend([float(m), -float(m)])
        return PoseSweep(tuple(angles))


def rotate_about_centroid(cloud: TexturedCloud, yaw_degrees: float) -> TexturedCloud:
    """Head rotation: yaw about the vertical axis through the cloud centroid."""
    if yaw_degrees == 0.0:
        return cloud
    R = yaw_rotation(yaw_degrees)
    c = cloud.centroid
    return TexturedCloud((cloud.points - c) @ R.T + c, cloud.intensities)


def synthesize_auxiliary(clouds, base_cam: Camera, sweep: PoseSweep,
                         resolution: tuple[int, int] | None = None,
                         normalize: bool = True) -> Dictionary:
    """Render every (cloud, yaw angle) pair into an auxiliary dictionary.

    Each render is optionally resized to ``resolution`` (width, height)
    before row-major vectorization; output column count is
    ``len(clouds) * len(sweep.yaw_angles)``.
    """
    from .data import bilinear_resize

    clouds = list(clouds)
    samples = []
    for cloud, cid in clouds:
        for angle in sweep.yaw_angles:
            image = render_image(rotate_about_centroid(cloud, angle), base_cam)
            if resolution is not None:
                image = bilinear_resize(image, resolution)
            samples.append((Sample(image.ravel()), cid))
    return build_dictionary(samples, normalize=normalize)


def make_head(subject: int, seed: int = 0, n_points: int = 20000) -> TexturedCloud:
    """Seeded synthetic test head: a half-ellipsoid with a procedural
    per-subject intensity pattern.

    Deterministic in (subject, seed); dense enough for hole-free splatting
    at resolutions up to roughly 64x64.
    """
    digest = hashlib.sha256(f"head|{seed}|{subject}".encode()).digest()
    key = int.from_bytes(digest[:16], "little")
    rng = np.random.Generator(np.random.Philox(key=key))

    # front half (z >= 0) of an ellipsoid, slight per-subject axes jitter
    axes = np.array([0.75, 1.0, 0.8]) * (1.0 + 0.05 * rng.uniform(-1, 1, 3))
    u = rng.uniform(-1.0, 1.0, n_points)          # cos(polar angle)
    phi = rng.uniform(-np.pi / 2, np.pi / 2, n_points)  # front hemisphere
    s = np.sqrt(1.0 - u * u)
    directions = np.column_stack([s * np.sin(phi), u, s * np.cos(phi)])
    points = directions * axes

    # random texture from superposed 3D cosine waves, subject-specific;
    # frequencies high enough that a large yaw decorrelates the rendering
    # from the subject's frontal view
    n_waves = 24
    freq = rng.uniform(10.0, 30.0, (n_waves, 3)) * rng.choice([-1, 1], (n_waves, 3))
    phase = rng.uniform(0, 2 * np.pi, n_waves)
    weight = rng.uniform(0.3, 1.0, n_waves)
    field = np.cos(points @ freq.T + phase) @ weight
    lo, hi = field.min(), field.max()
    intensities = 0.05 + 0.95 * (field - lo) / max(hi - lo, 1e-12)
    return TexturedCloud(points, intensities)
