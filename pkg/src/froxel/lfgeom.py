"""Camera-array geometry, froxel dimensioning, and the world <-> froxel mapping.

Conventions
-----------
World frame (millimetres):
  - origin at the geometric centre of the planar camera rig, on the camera plane
  - +x right (image column direction), +y down (image row direction), +z forward
    along the shared optical axis; all cameras are fronto-parallel
  - depth values are z-depth (distance along the optical axis), not ray length

Image frame:
  - pixel (i, j) = (column, row), top-left origin, pixel centres at integer
    coordinates, principal point at ((W-1)/2, (H-1)/2)
  - image x grows with world x and image y with world y (no vertical flip here;
    flips are handled in file I/O)

Froxel grid:
  - anchored to a single virtual reference camera at the array centre
  - cell (u, v) collects reference-image coordinates x_ref in
    [u*n_hor, (u+1)*n_hor) and y_ref in [v*n_ver, (v+1)*n_ver); u and v may be
    negative for points seen only by off-centre cameras
  - depth slice k collects depths with floor(C / z) = k, where
    C = focal * effective_baseline / pixel_pitch is the depth of exactly one
    pixel of disparity; slice k covers (C/(k+1), C/k] and slice 0 covers (C, inf)
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "BaselineMode",
    "CameraArrayConfig",
    "CameraId",
    "WorldPoint",
    "FroxelIndex",
    "froxel_width_height",
    "froxel_depth",
    "disparity_constant",
    "slice_of_depth",
    "slice_representative_depth",
    "camera_center",
    "unproject",
    "froxel_of_point",
]


class BaselineMode(enum.Enum):
    """Which baseline enters the disparity constant C = f*B_eff/p.

    NEIGHBOR uses the camera-to-camera spacing b (one pixel of disparity
    between neighbouring views).  FULL_ARRAY uses the full rig extent
    b*(rows-1) and requires a square rig.
    """

    NEIGHBOR = "neighbor"
    FULL_ARRAY = "full"


@dataclass(frozen=True)
class CameraArrayConfig:
    """Geometry of a planar rows x cols camera rig with identical pinhole cameras.

    Attributes:
        rows: number of camera rows (t direction).
        cols: number of camera columns (s direction).
        baseline_mm: neighbour-to-neighbour camera spacing, equal in x and y.
        focal_mm: focal distance f_d of every camera.
        pixel_pitch_mm: sensor pixel size p (square pixels).
        width_px: image width W in pixels.
        height_px: image height H in pixels.
        n_hor: froxel cell width in reference pixels.
        n_ver: froxel cell height in reference pixels.
        baseline_mode: baseline entering the disparity constant.
    """

    rows: int
    cols: int
    baseline_mm: float
    focal_mm: float
    pixel_pitch_mm: float
    width_px: int
    height_px: int
    n_hor: int = 1
    n_ver: int = 1
    baseline_mode: BaselineMode = BaselineMode.NEIGHBOR

    def __post_init__(self) -> None:
        for name in ("rows", "cols", "width_px", "height_px", "n_hor", "n_ver"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value <= 0:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")
        for name in ("baseline_mm", "focal_mm", "pixel_pitch_mm"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a positive finite real, got {value!r}")
        if not isinstance(self.baseline_mode, BaselineMode):
            raise ValueError(f"baseline_mode must be a BaselineMode, got {self.baseline_mode!r}")
        if self.baseline_mode is BaselineMode.FULL_ARRAY and self.rows != self.cols:
            raise ValueError("FULL_ARRAY baseline mode requires rows == cols")

    @property
    def num_cameras(self) -> int:
        """Total number of cameras M = rows * cols."""
        return self.rows * self.cols

    @property
    def effective_baseline_mm(self) -> float:
        if self.baseline_mode is BaselineMode.FULL_ARRAY:
            return self.baseline_mm * (self.rows - 1)
        return self.baseline_mm

    @property
    def principal_point(self) -> tuple[float, float]:
        """(c_x, c_y): pixel coordinates of the optical axis."""
        return (self.width_px - 1) / 2.0, (self.height_px - 1) / 2.0


@dataclass(frozen=True)
class CameraId:
    """One sub-aperture view: column s in [0, cols), row t in [0, rows)."""

    s: int
    t: int


@dataclass(frozen=True)
class WorldPoint:
    """A point in the world frame; z_mm must be positive and finite."""

    x_mm: float
    y_mm: float
    z_mm: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.z_mm) and self.z_mm > 0):
            raise ValueError(f"z_mm must be positive and finite, got {self.z_mm!r}")


@dataclass(frozen=True)
class FroxelIndex:
    """Integer froxel coordinate; u, v may be negative, k >= 0 (larger k = nearer)."""

    u: int
    v: int
    k: int

    def __post_init__(self) -> None:
        if self.k < 0:
            raise ValueError(f"slice index k must be non-negative, got {self.k}")


def _check_camera(cfg: CameraArrayConfig, cam: CameraId) -> None:
    if not (0 <= cam.s < cfg.cols and 0 <= cam.t < cfg.rows):
        raise ValueError(
            f"camera ({cam.s}, {cam.t}) out of range for a {cfg.rows}x{cfg.cols} rig"
        )


def _pixel_scale(cfg: CameraArrayConfig, z_mm):
    """World millimetres per pixel at depth z: p * z / f_d.

    Every projection and unprojection in the package goes through this one
    expression (same operand order), so forward and inverse mappings divide
    and multiply by bit-identical scale values.
    """
    return cfg.pixel_pitch_mm * z_mm / cfg.focal_mm


def _cell_index(x, scale, n_cells: int, c: float):
    """Quantize projected world coordinate(s) x to integer froxel cell indices.

    Works elementwise on floats or numpy arrays.  A plain
    floor(x/scale + c) can land one cell off for points that were produced by
    multiplying the same scale (multiply-then-divide does not always round
    trip), so membership is refined against the world-space cell edges
    (u*n_cells - c) * scale, computed with the same multiply as unproject.
    """
    x_ref = x / scale + c
    u = np.floor(x_ref / n_cells)
    left = (u * n_cells - c) * scale
    u = np.where(x < left, u - 1.0, u)
    right = ((u + 1.0) * n_cells - c) * scale
    u = np.where(x >= right, u + 1.0, u)
    return u


def froxel_width_height(cfg: CameraArrayConfig, d_plane_mm: float) -> tuple[float, float]:
    """Froxel cell extent (w, h) in mm at depth d_plane_mm.

    One cell spans n_hor x n_ver reference pixels, so w = n_hor*p*D/f_d and
    h = n_ver*p*D/f_d; both grow linearly with depth.

    Raises:
        ValueError: if d_plane_mm is not positive and finite.
    """
    if not (math.isfinite(d_plane_mm) and d_plane_mm > 0):
        raise ValueError(f"d_plane_mm must be positive and finite, got {d_plane_mm!r}")
    scale = _pixel_scale(cfg, d_plane_mm)
    return cfg.n_hor * scale, cfg.n_ver * scale


def froxel_depth(cfg: CameraArrayConfig, d_plane_mm: float) -> float:
    """Depth extent of one pixel of disparity at depth d_plane_mm.

    d = D^2 / (C - D) with C = focal*B_eff/pitch: the distance from D to the
    depth whose disparity is one pixel smaller.  Grows quadratically with D.
    Returns math.inf when D >= C (sub-pixel disparity; such points fall in
    slice 0, which is unbounded).

    Raises:
        ValueError: if d_plane_mm is not positive and finite.
    """
    if not (math.isfinite(d_plane_mm) and d_plane_mm > 0):
        raise ValueError(f"d_plane_mm must be positive and finite, got {d_plane_mm!r}")
    c = disparity_constant(cfg)
    if d_plane_mm >= c:
        return math.inf
    return d_plane_mm * d_plane_mm / (c - d_plane_mm)


def disparity_constant(cfg: CameraArrayConfig) -> float:
    """C = focal * effective_baseline / pixel_pitch: depth of one pixel disparity."""
    return cfg.focal_mm * cfg.effective_baseline_mm / cfg.pixel_pitch_mm


def slice_of_depth(cfg: CameraArrayConfig, z_mm: float) -> int:
    """Disparity slice k = floor(C / z) containing depth z.

    Slice k covers (C/(k+1), C/k]; slice 0 covers (C, inf).

    Raises:
        ValueError: if z_mm is not positive and finite.
    """
    if not (math.isfinite(z_mm) and z_mm > 0):
        raise ValueError(f"z_mm must be positive and finite, got {z_mm!r}")
    return int(math.floor(disparity_constant(cfg) / z_mm))


def slice_representative_depth(cfg: CameraArrayConfig, k: int) -> float:
    """Mid-disparity depth z_k = C/(k + 0.5) of slice k; slice_of_depth(z_k) = k."""
    if k < 0:
        raise ValueError(f"slice index k must be non-negative, got {k}")
    return disparity_constant(cfg) / (k + 0.5)


def camera_center(cfg: CameraArrayConfig, cam: CameraId) -> tuple[float, float]:
    """(x, y) position of a camera on the rig plane (z = 0), rig centred at origin.

    Raises:
        ValueError: if cam is out of range.
    """
    _check_camera(cfg, cam)
    x = (cam.s - (cfg.cols - 1) / 2.0) * cfg.baseline_mm
    y = (cam.t - (cfg.rows - 1) / 2.0) * cfg.baseline_mm
    return x, y


def unproject(cfg: CameraArrayConfig, cam: CameraId, pixel: tuple[int, int], z_mm: float) -> WorldPoint:
    """World point hit by camera cam's pixel (i, j) ray at depth z_mm.

    x = (i - c_x) * p * z / f_d + camera_x, y analogous, z unchanged.

    Raises:
        ValueError: if the pixel is outside [0, W) x [0, H) or z_mm invalid.
    """
    _check_camera(cfg, cam)
    i, j = pixel
    if not (0 <= i < cfg.width_px and 0 <= j < cfg.height_px):
        raise ValueError(
            f"pixel ({i}, {j}) out of range for a {cfg.width_px}x{cfg.height_px} image"
        )
    if not (math.isfinite(z_mm) and z_mm > 0):
        raise ValueError(f"z_mm must be positive and finite, got {z_mm!r}")
    c_x, c_y = cfg.principal_point
    cam_x, cam_y = camera_center(cfg, cam)
    scale = _pixel_scale(cfg, z_mm)
    x = (i - c_x) * scale + cam_x
    y = (j - c_y) * scale + cam_y
    return WorldPoint(x, y, z_mm)


def froxel_of_point(cfg: CameraArrayConfig, pt: WorldPoint) -> FroxelIndex:
    """Froxel containing a world point.

    Projects the point into the virtual reference camera at the array centre
    (x_ref = f_d*x/(p*z) + c_x, y_ref analogous), quantizes to cells of
    n_hor x n_ver pixels, and slices depth by integer disparity.  Indices
    outside the image are legal.
    """
    c_x, c_y = cfg.principal_point
    scale = _pixel_scale(cfg, pt.z_mm)
    u = _cell_index(pt.x_mm, scale, cfg.n_hor, c_x)
    v = _cell_index(pt.y_mm, scale, cfg.n_ver, c_y)
    return FroxelIndex(int(u), int(v), slice_of_depth(cfg, pt.z_mm))
