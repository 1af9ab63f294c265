"""Binning of light-field rays into froxels and ray-count statistics.

Every valid pixel of every camera view contributes one ray sample: the pixel
is unprojected to the world point at its depth-map depth and assigned the
froxel containing that point.  Pixels with non-finite or non-positive depth
are rejected (counted, never binned), so

    assigned + rejected == width_px * height_px * num_cameras

holds for every store built from a complete light field.

A FroxelStore keeps the samples in columnar numpy arrays in one canonical
order — froxels by (u, v, k), rays inside a froxel by (cam.t, cam.s, j, i) —
so that stores built from the same rays are equal regardless of view order,
thread count, or merge sequence.

The "fristogram" of a store is the histogram of froxel population sizes: how
many froxels hold exactly r rays.  Empty froxels (r = 0) are excluded by
default; they can be included by counting grid cells inside the bounded
frustum region spanned by the observed rays.
"""

from __future__ import annotations

import dataclasses
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .lfgeom import (
    CameraArrayConfig,
    CameraId,
    FroxelIndex,
    _cell_index,
    _pixel_scale,
    camera_center,
    disparity_constant,
)

__all__ = [
    "RaySample",
    "LightField",
    "FroxelStore",
    "Fristogram",
    "bin_lightfield",
    "fristogram",
    "fristogram_cdf",
    "reduction_factor",
    "export_fristogram_csv",
    "export_cdf_csv",
]


@dataclasses.dataclass(frozen=True)
class RaySample:
    """One binned ray: its camera, source pixel, color, and depth."""

    cam: CameraId
    pixel: tuple[int, int]
    color: tuple[float, float, float]
    z_mm: float


@dataclasses.dataclass
class LightField:
    """All views of a camera array: per-camera color images and depth maps.

    Views are stored in linear order t * cols + s.  Images are (H, W, 3)
    float64 in [0, 1]; depths are (H, W) float arrays where non-finite or
    non-positive entries mark pixels without scene content.
    """

    cfg: CameraArrayConfig
    images: list[np.ndarray]
    depths: list[np.ndarray]

    def __post_init__(self) -> None:
        m = self.cfg.num_cameras
        if len(self.images) != m or len(self.depths) != m:
            raise ValueError(
                f"light field must hold {m} images and {m} depth maps, "
                f"got {len(self.images)} and {len(self.depths)}"
            )
        shape = (self.cfg.height_px, self.cfg.width_px)
        for idx, (image, depth) in enumerate(zip(self.images, self.depths)):
            if image.shape != shape + (3,):
                raise ValueError(
                    f"view {idx} image has shape {image.shape}, expected {shape + (3,)}"
                )
            if depth.shape != shape:
                raise ValueError(
                    f"view {idx} depth map has shape {depth.shape}, expected {shape}"
                )
            finite = image[np.isfinite(image)]
            if finite.size != image.size or image.min() < 0.0 or image.max() > 1.0:
                raise ValueError(f"view {idx} image values must lie in [0, 1]")

    def view_index(self, cam: CameraId) -> int:
        return cam.t * self.cfg.cols + cam.s

    def view_image(self, cam: CameraId) -> np.ndarray:
        return self.images[self.view_index(cam)]

    def view_depth(self, cam: CameraId) -> np.ndarray:
        return self.depths[self.view_index(cam)]


def _bin_one_view(
    cfg: CameraArrayConfig, cam_linear: int, image: np.ndarray, depth: np.ndarray
) -> tuple[dict[str, np.ndarray], int]:
    """Bin a single view; returns its ray columns and its rejected count."""
    t, s = divmod(cam_linear, cfg.cols)
    cam_x, cam_y = camera_center(cfg, CameraId(s=s, t=t))
    c_x, c_y = cfg.principal_point
    constant = disparity_constant(cfg)

    z_all = np.asarray(depth, dtype=np.float64)
    valid = np.isfinite(z_all) & (z_all > 0.0)
    jj, ii = np.nonzero(valid)
    z = z_all[valid]

    scale = _pixel_scale(cfg, z)
    x = (ii - c_x) * scale + cam_x
    y = (jj - c_y) * scale + cam_y
    u = _cell_index(x, scale, cfg.n_hor, c_x)
    v = _cell_index(y, scale, cfg.n_ver, c_y)
    k = np.floor(constant / z)

    columns = {
        "u": u.astype(np.int64),
        "v": v.astype(np.int64),
        "k": k.astype(np.int64),
        "t": np.full(z.shape, t, dtype=np.int32),
        "s": np.full(z.shape, s, dtype=np.int32),
        "j": jj.astype(np.int32),
        "i": ii.astype(np.int32),
        "z": z,
        "color": np.asarray(image, dtype=np.float64)[valid],
    }
    rejected = int(valid.size - z.size)
    return columns, rejected


_COLUMN_NAMES = ("u", "v", "k", "t", "s", "j", "i", "z", "color")


class FroxelStore:
    """Columnar store of binned ray samples in canonical order.

    Attributes (read-only by convention):
        cfg: the camera-array configuration the rays were binned under.
        u, v, k: int64 froxel coordinates per ray.
        t, s, j, i: int32 camera row/column and pixel row/column per ray.
        z: float64 depth per ray (mm).
        color: float64 (N, 3) RGB per ray.
        assigned: number of rays binned.
        rejected: number of pixels rejected for invalid depth.
        starts: int64 offsets of froxel groups; group g spans
            rows starts[g]:starts[g + 1].
    """

    def __init__(
        self, cfg: CameraArrayConfig, columns: dict[str, np.ndarray], rejected: int
    ) -> None:
        self.cfg = cfg
        order = np.lexsort(
            (
                columns["i"],
                columns["j"],
                columns["s"],
                columns["t"],
                columns["k"],
                columns["v"],
                columns["u"],
            )
        )
        for name in _COLUMN_NAMES:
            setattr(self, name, columns[name][order])
        self.assigned = int(self.u.shape[0])
        self.rejected = int(rejected)
        if self.assigned:
            change = (
                (self.u[1:] != self.u[:-1])
                | (self.v[1:] != self.v[:-1])
                | (self.k[1:] != self.k[:-1])
            )
            self.starts = np.concatenate(
                ([0], np.flatnonzero(change) + 1, [self.assigned])
            ).astype(np.int64)
        else:
            self.starts = np.zeros(1, dtype=np.int64)
        self._lookup: dict[tuple[int, int, int], int] | None = None

    @property
    def num_froxels(self) -> int:
        """Number of distinct non-empty froxels."""
        return self.starts.shape[0] - 1

    def population_sizes(self) -> np.ndarray:
        """Ray count r of every non-empty froxel, in canonical froxel order."""
        return np.diff(self.starts)

    def froxel_index_at(self, group: int) -> FroxelIndex:
        a = self.starts[group]
        return FroxelIndex(u=int(self.u[a]), v=int(self.v[a]), k=int(self.k[a]))

    def froxel_indices(self) -> list[FroxelIndex]:
        """All non-empty froxel indices in canonical (u, v, k) order."""
        return [self.froxel_index_at(g) for g in range(self.num_froxels)]

    def group_slice(self, group: int) -> slice:
        return slice(int(self.starts[group]), int(self.starts[group + 1]))

    def samples_at(self, group: int) -> list[RaySample]:
        """Materialize the rays of froxel group `group`, in (t, s, j, i) order."""
        rows = self.group_slice(group)
        return [
            RaySample(
                cam=CameraId(s=int(self.s[r]), t=int(self.t[r])),
                pixel=(int(self.i[r]), int(self.j[r])),
                color=tuple(float(c) for c in self.color[r]),
                z_mm=float(self.z[r]),
            )
            for r in range(rows.start, rows.stop)
        ]

    def get(self, index: FroxelIndex) -> list[RaySample]:
        """Rays of one froxel (empty list when the froxel holds none)."""
        if self._lookup is None:
            self._lookup = {
                (int(self.u[a]), int(self.v[a]), int(self.k[a])): g
                for g, a in enumerate(self.starts[:-1])
            }
        group = self._lookup.get((index.u, index.v, index.k))
        return [] if group is None else self.samples_at(group)

    def merge(self, other: "FroxelStore") -> "FroxelStore":
        """Combine two stores built under the same configuration.

        The result is identical to binning the union of the source rays in
        one pass; counters add.
        """
        if self.cfg != other.cfg:
            raise ValueError("cannot merge stores with different configurations")
        columns = {
            name: np.concatenate([getattr(self, name), getattr(other, name)])
            for name in _COLUMN_NAMES
        }
        return FroxelStore(self.cfg, columns, self.rejected + other.rejected)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FroxelStore):
            return NotImplemented
        return (
            self.cfg == other.cfg
            and self.assigned == other.assigned
            and self.rejected == other.rejected
            and all(
                np.array_equal(getattr(self, name), getattr(other, name))
                for name in _COLUMN_NAMES
            )
        )


def bin_lightfield(lf: LightField, threads: int = 1) -> FroxelStore:
    """Bin every valid pixel of every view into its froxel.

    The result is independent of `threads`: per-view partial results are
    assembled in view order and sorted once into the canonical order.
    """
    if threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads}")
    cfg = lf.cfg
    views = range(cfg.num_cameras)
    if threads == 1:
        parts = [_bin_one_view(cfg, m, lf.images[m], lf.depths[m]) for m in views]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(
                pool.map(lambda m: _bin_one_view(cfg, m, lf.images[m], lf.depths[m]), views)
            )
    columns = {
        name: np.concatenate([part[name] for part, _ in parts])
        for name in _COLUMN_NAMES
    }
    rejected = sum(r for _, r in parts)
    return FroxelStore(cfg, columns, rejected)


@dataclasses.dataclass(frozen=True)
class Fristogram:
    """Histogram of froxel population sizes.

    counts[r] is the number of froxels holding exactly r rays.  r = 0 appears
    only when the histogram was built with include_empty=True.
    """

    counts: dict[int, int]
    total_rays: int
    nonempty_froxels: int
    include_empty: bool


def fristogram(store: FroxelStore, include_empty: bool = False) -> Fristogram:
    """Build the population-size histogram of a store.

    With include_empty=True, empty cells are counted over the bounded frustum
    region u in [0, ceil(W/n_hor)), v in [0, ceil(H/n_ver)), and k between the
    smallest and largest observed slice; this needs at least one binned ray.
    """
    sizes = store.population_sizes()
    bins = np.bincount(sizes) if sizes.size else np.zeros(0, dtype=np.int64)
    counts = {int(r): int(c) for r, c in enumerate(bins) if c > 0 and r > 0}
    if include_empty:
        if store.num_froxels == 0:
            raise ValueError("cannot bound the empty-froxel region of an empty store")
        cells_u = -(-store.cfg.width_px // store.cfg.n_hor)
        cells_v = -(-store.cfg.height_px // store.cfg.n_ver)
        k_lo, k_hi = int(store.k.min()), int(store.k.max())
        total_cells = cells_u * cells_v * (k_hi - k_lo + 1)
        first = store.starts[:-1]
        inside = (
            (store.u[first] >= 0)
            & (store.u[first] < cells_u)
            & (store.v[first] >= 0)
            & (store.v[first] < cells_v)
        )
        empty = total_cells - int(inside.sum())
        if empty > 0:
            counts[0] = empty
    return Fristogram(
        counts=counts,
        total_rays=store.assigned,
        nonempty_froxels=store.num_froxels,
        include_empty=include_empty,
    )


def fristogram_cdf(fg: Fristogram) -> list[tuple[int, float]]:
    """Cumulative fraction of non-empty froxels holding <= r rays.

    Rows ascend in r over the non-empty counts; the final fraction is
    exactly 1.0.
    """
    if fg.nonempty_froxels == 0:
        raise ValueError("cannot build a CDF with no non-empty froxels")
    rows = []
    cumulative = 0
    for r in sorted(fg.counts):
        if r == 0:
            continue
        cumulative += fg.counts[r]
        rows.append((r, cumulative / fg.nonempty_froxels))
    return rows


def reduction_factor(fg: Fristogram) -> float:
    """Rays per non-empty froxel: the compression from reducing each froxel
    to a single representative ray."""
    if fg.nonempty_froxels == 0:
        raise ValueError("reduction factor is undefined with no non-empty froxels")
    return fg.total_rays / fg.nonempty_froxels


def export_fristogram_csv(fg: Fristogram) -> str:
    """CSV `ray_count,froxel_count`, rows ascending by ray count."""
    lines = ["ray_count,froxel_count"]
    for r in sorted(fg.counts):
        lines.append(f"{r},{fg.counts[r]}")
    return "\n".join(lines) + "\n"


def export_cdf_csv(fg: Fristogram) -> str:
    """CSV `ray_count,cum_fraction`, rows ascending by ray count."""
    lines = ["ray_count,cum_fraction"]
    for r, fraction in fristogram_cdf(fg):
        lines.append(f"{r},{fraction!r}")
    return "\n".join(lines) + "\n"
