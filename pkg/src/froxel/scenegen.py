"""Deterministic synthetic multi-view scenes with exact per-pixel depth.

Scenes are stacks of fronto-parallel rectangular planes, each at a distinct
depth with a half-open extent [lo, hi) in world x and y.  Every camera pixel
ray is intersected with all planes; the nearest hit supplies the color and
the exact hit depth, so depth maps are analytically correct by construction
and the per-ray ground truth (which plane, which depth) is known in closed
form.

Textures:
  - Solid(color): constant color.
  - Checker(c1, c2, cell_px): a checkerboard anchored in the reference
    camera's pixel coordinates (cell index floor(x_ref / cell_px)), so cell
    boundaries land on froxel-grid cell boundaries at the plane's depth.
  - Ramp(channel, amplitude): flat base color — 0.5 on the two other
    channels, 0.0 on the designated one.  On a plane flagged `specular`, the
    designated channel additionally carries a per-camera value
    amplitude * (cam_linear_index / (M - 1)): a view-dependent radiance ramp,
    i.e. non-Lambertian ground truth with analytically known statistics.

The optional background is a solid at twice the disparity constant — the
representative depth of disparity slice 0 — so background rays always bin
and round-trip exactly through synthesis.  With background "none", misses
get infinite depth and black color, and binning rejects those rays.
"""

from __future__ import annotations

import dataclasses
import json
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .analysis import LambertianLabel, Lambertianness
from .binning import LightField, bin_lightfield
from .lfgeom import (
    CameraArrayConfig,
    CameraId,
    FroxelIndex,
    _pixel_scale,
    camera_center,
    slice_representative_depth,
)

__all__ = [
    "SolidTexture",
    "CheckerTexture",
    "RampTexture",
    "Plane",
    "SceneSpec",
    "scene_from_json",
    "scene_to_json",
    "background_depth_mm",
    "render",
    "ground_truth_labels",
]

_CHANNEL_INDEX = {"r": 0, "g": 1, "b": 2}


def _check_color(color: tuple[float, float, float], what: str) -> tuple[float, float, float]:
    color = tuple(float(c) for c in color)
    if len(color) != 3 or any(not (math.isfinite(c) and 0.0 <= c <= 1.0) for c in color):
        raise ValueError(f"{what} must be three values in [0, 1], got {color}")
    return color


@dataclasses.dataclass(frozen=True)
class SolidTexture:
    color: tuple[float, float, float]

    def __post_init__(self) -> None:
        object.__setattr__(self, "color", _check_color(self.color, "solid color"))


@dataclasses.dataclass(frozen=True)
class CheckerTexture:
    c1: tuple[float, float, float]
    c2: tuple[float, float, float]
    cell_px: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "c1", _check_color(self.c1, "checker color c1"))
        object.__setattr__(self, "c2", _check_color(self.c2, "checker color c2"))
        if not (isinstance(self.cell_px, int) and self.cell_px >= 1):
            raise ValueError(f"checker cell_px must be a positive integer, got {self.cell_px}")


@dataclasses.dataclass(frozen=True)
class RampTexture:
    channel: str
    amplitude: float

    def __post_init__(self) -> None:
        if self.channel not in _CHANNEL_INDEX:
            raise ValueError(f"ramp channel must be one of 'r', 'g', 'b', got {self.channel!r}")
        if not (math.isfinite(self.amplitude) and 0.0 <= self.amplitude <= 1.0):
            raise ValueError(f"ramp amplitude must lie in [0, 1], got {self.amplitude}")


Texture = SolidTexture | CheckerTexture | RampTexture


@dataclasses.dataclass(frozen=True)
class Plane:
    """A fronto-parallel textured rectangle at depth z_mm.

    Extents are half-open intervals [lo, hi) in world millimetres.
    """

    z_mm: float
    x_extent_mm: tuple[float, float]
    y_extent_mm: tuple[float, float]
    texture: Texture
    specular: bool = False

    def __post_init__(self) -> None:
        if not (math.isfinite(self.z_mm) and self.z_mm > 0.0):
            raise ValueError(f"plane depth must be positive and finite, got {self.z_mm}")
        for name, (lo, hi) in (("x", self.x_extent_mm), ("y", self.y_extent_mm)):
            if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
                raise ValueError(f"plane {name} extent must satisfy lo < hi, got [{lo}, {hi})")
        if not isinstance(self.texture, (SolidTexture, CheckerTexture, RampTexture)):
            raise ValueError(f"unsupported texture {type(self.texture).__name__}")
        if self.specular and not isinstance(self.texture, RampTexture):
            raise ValueError("specular planes need a Ramp texture to designate the channel")


@dataclasses.dataclass(frozen=True)
class SceneSpec:
    """Planes (any order; depths must be distinct), optional solid background,
    and the seed recorded in run manifests."""

    planes: tuple[Plane, ...]
    background: tuple[float, float, float] | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "planes", tuple(self.planes))
        depths = [plane.z_mm for plane in self.planes]
        if len(set(depths)) != len(depths):
            raise ValueError("plane depths must be distinct")
        if self.background is not None:
            object.__setattr__(
                self, "background", _check_color(self.background, "background color")
            )
        if not (isinstance(self.seed, int) and self.seed >= 0):
            raise ValueError(f"seed must be a non-negative integer, got {self.seed}")


def _require_keys(obj: dict, allowed: set[str], required: set[str], what: str) -> None:
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise ValueError(f"unknown {what} key(s): {', '.join(unknown)}")
    missing = sorted(required - set(obj))
    if missing:
        raise ValueError(f"missing {what} key(s): {', '.join(missing)}")


def _texture_from_obj(obj: dict) -> Texture:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValueError("texture must be an object with a 'kind' key")
    kind = obj["kind"]
    if kind == "solid":
        _require_keys(obj, {"kind", "color"}, {"kind", "color"}, "solid texture")
        return SolidTexture(color=tuple(obj["color"]))
    if kind == "checker":
        _require_keys(
            obj, {"kind", "c1", "c2", "cell_px"}, {"kind", "c1", "c2", "cell_px"}, "checker texture"
        )
        return CheckerTexture(c1=tuple(obj["c1"]), c2=tuple(obj["c2"]), cell_px=obj["cell_px"])
    if kind == "ramp":
        _require_keys(
            obj, {"kind", "channel", "amplitude"}, {"kind", "channel", "amplitude"}, "ramp texture"
        )
        return RampTexture(channel=obj["channel"], amplitude=float(obj["amplitude"]))
    raise ValueError(f"unknown texture kind {kind!r}")


def _texture_to_obj(texture: Texture) -> dict:
    if isinstance(texture, SolidTexture):
        return {"kind": "solid", "color": list(texture.color)}
    if isinstance(texture, CheckerTexture):
        return {"kind": "checker", "c1": list(texture.c1), "c2": list(texture.c2),
                "cell_px": texture.cell_px}
    return {"kind": "ramp", "channel": texture.channel, "amplitude": texture.amplitude}


def scene_from_json(text: str) -> SceneSpec:
    """Parse a scene description from strict JSON (unknown keys rejected)."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"scene is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise ValueError("scene must be a JSON object")
    _require_keys(obj, {"planes", "background", "seed"}, {"planes"}, "scene")
    planes = []
    if not isinstance(obj["planes"], list):
        raise ValueError("scene 'planes' must be a list")
    for entry in obj["planes"]:
        if not isinstance(entry, dict):
            raise ValueError("each plane must be a JSON object")
        _require_keys(
            entry,
            {"z_mm", "x_extent_mm", "y_extent_mm", "texture", "specular"},
            {"z_mm", "x_extent_mm", "y_extent_mm", "texture"},
            "plane",
        )
        planes.append(
            Plane(
                z_mm=float(entry["z_mm"]),
                x_extent_mm=tuple(float(e) for e in entry["x_extent_mm"]),
                y_extent_mm=tuple(float(e) for e in entry["y_extent_mm"]),
                texture=_texture_from_obj(entry["texture"]),
                specular=bool(entry.get("specular", False)),
            )
        )
    background = obj.get("background")
    if background is not None:
        if not isinstance(background, dict):
            raise ValueError("scene 'background' must be an object or null")
        _require_keys(background, {"color"}, {"color"}, "background")
        background = tuple(background["color"])
    return SceneSpec(planes=tuple(planes), background=background, seed=obj.get("seed", 0))


def scene_to_json(spec: SceneSpec) -> str:
    """Serialize a scene to canonical JSON (round-trips through
    scene_from_json)."""
    obj = {
        "planes": [
            {
                "z_mm": plane.z_mm,
                "x_extent_mm": list(plane.x_extent_mm),
                "y_extent_mm": list(plane.y_extent_mm),
                "texture": _texture_to_obj(plane.texture),
                "specular": plane.specular,
            }
            for plane in spec.planes
        ],
        "background": None if spec.background is None else {"color": list(spec.background)},
        "seed": spec.seed,
    }
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def background_depth_mm(cfg: CameraArrayConfig) -> float:
    """Depth of the solid background: the representative depth of slice 0."""
    return slice_representative_depth(cfg, 0)


def _texture_color(
    plane: Plane,
    plane_linear: float,
    x_ref: np.ndarray,
    y_ref: np.ndarray,
) -> np.ndarray:
    """Colors of the masked pixels, given their reference-frame coordinates."""
    count = x_ref.shape[0]
    texture = plane.texture
    if isinstance(texture, SolidTexture):
        return np.broadcast_to(np.asarray(texture.color), (count, 3)).copy()
    if isinstance(texture, CheckerTexture):
        cells = np.floor(x_ref / texture.cell_px) + np.floor(y_ref / texture.cell_px)
        even = (cells.astype(np.int64) % 2) == 0
        colors = np.where(even[:, None], np.asarray(texture.c1), np.asarray(texture.c2))
        return colors
    base = np.full((count, 3), 0.5, dtype=np.float64)
    channel = _CHANNEL_INDEX[texture.channel]
    base[:, channel] = 0.0
    if plane.specular:
        base[:, channel] += texture.amplitude * plane_linear
    return base


def _render_view(
    spec: SceneSpec, cfg: CameraArrayConfig, cam_linear: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Render one view; returns (image, depth, plane_ids).

    plane_ids holds the index of the hit plane in spec.planes, or -1 for
    background / no hit.
    """
    t, s = divmod(cam_linear, cfg.cols)
    cam_x, cam_y = camera_center(cfg, CameraId(s=s, t=t))
    c_x, c_y = cfg.principal_point
    height, width = cfg.height_px, cfg.width_px
    m = cfg.num_cameras
    # The shared per-camera factor of the view-dependent ramp.
    plane_linear = cam_linear / (m - 1) if m > 1 else 0.0

    image = np.zeros((height, width, 3), dtype=np.float64)
    depth = np.full((height, width), np.inf, dtype=np.float64)
    ids = np.full((height, width), -1, dtype=np.int32)
    hit = np.zeros((height, width), dtype=bool)

    ii, jj = np.meshgrid(np.arange(width, dtype=np.float64), np.arange(height, dtype=np.float64))
    order = sorted(range(len(spec.planes)), key=lambda p: spec.planes[p].z_mm)
    for plane_id in order:
        plane = spec.planes[plane_id]
        scale = _pixel_scale(cfg, plane.z_mm)
        x = (ii - c_x) * scale + cam_x
        y = (jj - c_y) * scale + cam_y
        mask = (
            ~hit
            & (x >= plane.x_extent_mm[0])
            & (x < plane.x_extent_mm[1])
            & (y >= plane.y_extent_mm[0])
            & (y < plane.y_extent_mm[1])
        )
        if not mask.any():
            continue
        x_ref = x[mask] / scale + c_x
        y_ref = y[mask] / scale + c_y
        image[mask] = _texture_color(plane, plane_linear, x_ref, y_ref)
        depth[mask] = plane.z_mm
        ids[mask] = plane_id
        hit |= mask
    if spec.background is not None:
        miss = ~hit
        image[miss] = spec.background
        depth[miss] = background_depth_mm(cfg)
    return image, depth, ids


def _render_all(
    spec: SceneSpec, cfg: CameraArrayConfig, threads: int
) -> list[tuple[np.ndarray, np.ndarray, np.ndarray]]:
    if threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads}")
    views = range(cfg.num_cameras)
    if threads == 1:
        return [_render_view(spec, cfg, m) for m in views]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda m: _render_view(spec, cfg, m), views))


def render(spec: SceneSpec, cfg: CameraArrayConfig, threads: int = 1) -> LightField:
    """Render every camera of the array; exact depths by construction.

    Independent of `threads` (views are assembled in camera order).
    """
    parts = _render_all(spec, cfg, threads)
    return LightField(
        cfg=cfg,
        images=[image for image, _, _ in parts],
        depths=[depth for _, depth, _ in parts],
    )


def ground_truth_labels(
    spec: SceneSpec, cfg: CameraArrayConfig, threads: int = 1
) -> dict[FroxelIndex, LambertianLabel]:
    """Analytic Lambertian ground truth per froxel.

    Rays are binned exactly as bin_lightfield would bin the rendered light
    field; each froxel is labeled by its dominant plane (most rays; ties go
    to the nearer surface), NonLambertian iff that plane is specular.
    Scores are 1.0 for NonLambertian and 0.0 for Lambertian froxels.
    """
    parts = _render_all(spec, cfg, threads)
    lf = LightField(
        cfg=cfg,
        images=[image for image, _, _ in parts],
        depths=[depth for _, depth, _ in parts],
    )
    store = bin_lightfield(lf)
    id_stack = np.stack([ids for _, _, ids in parts])
    view_linear = store.t.astype(np.int64) * cfg.cols + store.s
    ray_ids = id_stack[view_linear, store.j, store.i]

    plane_depths = {p: spec.planes[p].z_mm for p in range(len(spec.planes))}
    plane_depths[-1] = background_depth_mm(cfg)

    labels: dict[FroxelIndex, LambertianLabel] = {}
    for g in range(store.num_froxels):
        ids, counts = np.unique(ray_ids[store.group_slice(g)], return_counts=True)
        best = counts == counts.max()
        dominant = min((int(i) for i in ids[best]), key=lambda i: plane_depths[i])
        non_lambertian = dominant >= 0 and spec.planes[dominant].specular
        labels[store.froxel_index_at(g)] = LambertianLabel(
            label=(
                Lambertianness.NON_LAMBERTIAN if non_lambertian else Lambertianness.LAMBERTIAN
            ),
            score=1.0 if non_lambertian else 0.0,
        )
    return labels
