"""Froxel-domain filtering: reduce each froxel's rays to one color.

Filtering in the froxel domain replaces the population of rays inside every
froxel with a single representative color — a mean (good against additive
Gaussian noise) or a per-channel median (good against salt-and-pepper
outliers).  The result is a ReducedField: one color per non-empty froxel,
which is both a denoised representation and a heavily compressed one.

The scalar helpers (froxel_mean / froxel_median) and the store-level reduce()
run the identical numpy reductions, so a froxel reduced alone equals the same
froxel reduced in bulk, bit for bit.

ReducedFields round-trip through a compact binary format (FRXL1): the magic
`FRXL1`, a length-prefixed canonical configuration JSON, then fixed-width
little-endian records `u:i32 v:i32 k:u32 r:f32 g:f32 b:f32 n:u32` sorted by
(k descending, v, u) — farthest slice first, the order view synthesis
consumes them in.
"""

from __future__ import annotations

import dataclasses
import enum
import struct

import numpy as np

from .binning import FroxelStore, RaySample
from .lfgeom import CameraArrayConfig, FroxelIndex

__all__ = [
    "FilterStat",
    "ReducedFroxel",
    "ReducedField",
    "froxel_mean",
    "froxel_median",
    "reduce",
    "reduce_store",
    "write_frxl",
    "read_frxl",
]

_FRXL_MAGIC = b"FRXL1"
_FRXL_RECORD = np.dtype(
    [
        ("u", "<i4"),
        ("v", "<i4"),
        ("k", "<u4"),
        ("r", "<f4"),
        ("g", "<f4"),
        ("b", "<f4"),
        ("n", "<u4"),
    ]
)


class FilterStat(enum.Enum):
    MEAN = "mean"
    MEDIAN = "median"


@dataclasses.dataclass(frozen=True)
class ReducedFroxel:
    """One froxel reduced to a single representative color."""

    index: FroxelIndex
    color: tuple[float, float, float]
    n_source_rays: int

    def __post_init__(self) -> None:
        if self.n_source_rays < 1:
            raise ValueError(
                f"a reduced froxel summarizes at least one ray, got {self.n_source_rays}"
            )
        if any(not (0.0 <= c <= 1.0) for c in self.color):
            raise ValueError(f"reduced color must lie in [0, 1], got {self.color}")


@dataclasses.dataclass(frozen=True)
class ReducedField:
    """All reduced froxels of a light field, keyed by froxel index."""

    cfg: CameraArrayConfig
    froxels: dict[FroxelIndex, ReducedFroxel]


def _segment_means(colors: np.ndarray, starts: np.ndarray) -> np.ndarray:
    """Per-segment channel means of an (N, 3) block split at `starts`."""
    counts = np.diff(starts).astype(np.float64)
    sums = np.add.reduceat(colors, starts[:-1], axis=0)
    return sums / counts[:, None]


def _segment_median(colors: np.ndarray) -> np.ndarray:
    """Per-channel lower-middle median of one segment: sorted[(n - 1) // 2]."""
    ordered = np.sort(colors, axis=0)
    return ordered[(colors.shape[0] - 1) // 2]


def _colors_array(samples: list[RaySample]) -> np.ndarray:
    if not samples:
        raise ValueError("froxel filters need at least one ray sample")
    return np.array([sample.color for sample in samples], dtype=np.float64)


def froxel_mean(samples: list[RaySample]) -> tuple[float, float, float]:
    """Per-channel mean color of a froxel's rays."""
    colors = _colors_array(samples)
    mean = _segment_means(colors, np.array([0, colors.shape[0]], dtype=np.int64))[0]
    return tuple(float(c) for c in mean)


def froxel_median(samples: list[RaySample]) -> tuple[float, float, float]:
    """Per-channel median color of a froxel's rays.

    Channels are sorted independently; for even populations the lower middle
    element sorted[(n - 1) // 2] is taken, so every channel value is one that
    actually occurred in that channel.
    """
    colors = _colors_array(samples)
    return tuple(float(c) for c in _segment_median(colors))


def reduce_store(store: FroxelStore, stat: FilterStat) -> ReducedField:
    """Reduce every non-empty froxel of a store to one color.

    Raises:
        ValueError: on a store with no binned rays.
    """
    if not isinstance(stat, FilterStat):
        raise ValueError(f"stat must be a FilterStat, got {stat!r}")
    if store.num_froxels == 0:
        raise ValueError("cannot reduce a store with no binned rays")
    counts = store.population_sizes()
    if stat is FilterStat.MEAN:
        reduced = _segment_means(store.color, store.starts)
    else:
        reduced = np.empty((store.num_froxels, 3), dtype=np.float64)
        for g in range(store.num_froxels):
            reduced[g] = _segment_median(store.color[store.group_slice(g)])
    froxels = {}
    for g in range(store.num_froxels):
        index = store.froxel_index_at(g)
        froxels[index] = ReducedFroxel(
            index=index,
            color=tuple(float(c) for c in reduced[g]),
            n_source_rays=int(counts[g]),
        )
    return ReducedField(cfg=store.cfg, froxels=froxels)


# Primary name of the operation; reduce_store is the import-friendly alias.
reduce = reduce_store


def write_frxl(field: ReducedField) -> bytes:
    """Serialize a ReducedField to FRXL1 bytes (see module docstring)."""
    from .lfio import write_config

    cfg_json = write_config(field.cfg).encode("utf-8")
    records = np.empty(len(field.froxels), dtype=_FRXL_RECORD)
    ordered = sorted(field.froxels.values(), key=lambda f: (-f.index.k, f.index.v, f.index.u))
    for row, froxel in enumerate(ordered):
        records[row] = (
            froxel.index.u,
            froxel.index.v,
            froxel.index.k,
            froxel.color[0],
            froxel.color[1],
            froxel.color[2],
            froxel.n_source_rays,
        )
    return _FRXL_MAGIC + struct.pack("<I", len(cfg_json)) + cfg_json + records.tobytes()


def read_frxl(data: bytes) -> ReducedField:
    """Parse FRXL1 bytes back into a ReducedField.

    Raises:
        ValueError: bad magic, truncated header or payload, malformed
            configuration, duplicate froxel keys, or out-of-range fields.
    """
    from .lfio import read_config

    if data[: len(_FRXL_MAGIC)] != _FRXL_MAGIC:
        raise ValueError("not an FRXL1 payload (bad magic)")
    pos = len(_FRXL_MAGIC)
    if len(data) < pos + 4:
        raise ValueError("truncated FRXL1 header")
    (cfg_len,) = struct.unpack_from("<I", data, pos)
    pos += 4
    if len(data) < pos + cfg_len:
        raise ValueError("truncated FRXL1 configuration block")
    cfg = read_config(data[pos : pos + cfg_len].decode("utf-8"))
    pos += cfg_len
    body = data[pos:]
    if len(body) % _FRXL_RECORD.itemsize != 0:
        raise ValueError(
            f"FRXL1 record block of {len(body)} bytes is not a multiple of "
            f"{_FRXL_RECORD.itemsize}"
        )
    records = np.frombuffer(body, dtype=_FRXL_RECORD)
    froxels: dict[FroxelIndex, ReducedFroxel] = {}
    for record in records:
        index = FroxelIndex(u=int(record["u"]), v=int(record["v"]), k=int(record["k"]))
        if index in froxels:
            raise ValueError(f"duplicate froxel record for {index}")
        froxels[index] = ReducedFroxel(
            index=index,
            color=(float(record["r"]), float(record["g"]), float(record["b"])),
            n_source_rays=int(record["n"]),
        )
    return ReducedField(cfg=cfg, froxels=froxels)
