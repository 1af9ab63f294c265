"""Bit-exact file I/O: PFM depth maps, PPM color rasters, PGM hole masks,
array configuration JSON, and light-field directory assembly.

In-memory raster conventions (shared with the rest of the package):
  - DepthRaster: float32 numpy array of shape (H, W), z-depth in mm, rows
    top-down; NaN/inf are legal and preserved
  - ColorRaster: float64 numpy array of shape (H, W, 3), values in [0, 1],
    rows top-down

PFM files store rows bottom-to-top; the flip to top-down memory order happens
here and only here, so geometry code sees a single convention.  The PFM scale
magnitude is read back but never applied to samples (bit-exactness); only its
sign (endianness) affects decoding.

A light field on disk is a directory holding, for every camera (t, s),
`cam_<t>_<s>.ppm` and `depth_<t>_<s>.pfm`, plus one `array.json` with the
camera-array configuration.
"""

from __future__ import annotations

import json
import logging
import math
from pathlib import Path

import numpy as np

from .binning import LightField
from .lfgeom import BaselineMode, CameraArrayConfig

logger = logging.getLogger(__name__)

__all__ = [
    "DepthRaster",
    "ColorRaster",
    "read_pfm",
    "write_pfm",
    "read_ppm",
    "write_ppm",
    "read_pgm_mask",
    "write_pgm_mask",
    "read_config",
    "write_config",
    "config_sha256",
    "read_lightfield",
    "write_lightfield",
    "view_filenames",
]

# Type aliases for the raster conventions documented above.
DepthRaster = np.ndarray
ColorRaster = np.ndarray

_WHITESPACE = b" \t\n\r\f\v"


def _next_token(data: bytes, pos: int) -> tuple[bytes, int]:
    """Next whitespace-delimited token of a netpbm-style header.

    Skips comment lines introduced by '#'.  Returns (token, position after
    the single whitespace byte that terminates it).
    """
    n = len(data)
    while pos < n:
        byte = data[pos : pos + 1]
        if byte == b"#":
            while pos < n and data[pos : pos + 1] != b"\n":
                pos += 1
        elif byte in _WHITESPACE:
            pos += 1
        else:
            break
    start = pos
    while pos < n and data[pos : pos + 1] not in _WHITESPACE and data[pos : pos + 1] != b"#":
        pos += 1
    if start == pos:
        raise ValueError("truncated header")
    token = data[start:pos]
    if pos < n and data[pos : pos + 1] in _WHITESPACE:
        pos += 1  # exactly one whitespace byte separates the header from the payload
    return token, pos


def _parse_dims(w_tok: bytes, h_tok: bytes) -> tuple[int, int]:
    try:
        width, height = int(w_tok), int(h_tok)
    except ValueError as exc:
        raise ValueError(f"bad raster dimensions {w_tok!r} x {h_tok!r}") from exc
    if width <= 0 or height <= 0:
        raise ValueError(f"raster dimensions must be positive, got {width}x{height}")
    return width, height


def read_pfm(data: bytes) -> DepthRaster:
    """Decode a PFM depth map to a top-down float32 (H, W) array.

    Grayscale `Pf` is the expected form; 3-channel `PF` is accepted with a
    warning and its first channel is taken as depth.  A negative scale marks
    little-endian payloads.  NaN and infinity are preserved.

    Raises:
        ValueError: bad magic, malformed header, zero dimensions, or a payload
            whose size does not match the header exactly.
    """
    magic, pos = _next_token(data, 0)
    if magic not in (b"Pf", b"PF"):
        raise ValueError(f"not a PFM file (magic {magic!r})")
    channels = 3 if magic == b"PF" else 1
    w_tok, pos = _next_token(data, pos)
    h_tok, pos = _next_token(data, pos)
    width, height = _parse_dims(w_tok, h_tok)
    scale_tok, pos = _next_token(data, pos)
    try:
        scale = float(scale_tok)
    except ValueError as exc:
        raise ValueError(f"bad PFM scale {scale_tok!r}") from exc
    if scale == 0:
        raise ValueError("PFM scale must be non-zero")
    dtype = "<f4" if scale < 0 else ">f4"
    expected = width * height * channels * 4
    payload = data[pos:]
    if len(payload) != expected:
        raise ValueError(f"PFM payload is {len(payload)} bytes, expected {expected}")
    samples = np.frombuffer(payload, dtype=dtype).astype("<f4", copy=False)
    samples = samples.reshape(height, width, channels)
    if channels == 3:
        logger.warning("3-channel PFM supplied as depth; taking the first channel")
        samples = samples[:, :, 0]
    else:
        samples = samples[:, :, 0]
    # PFM stores the bottom row first; memory order is top-down.
    return np.ascontiguousarray(np.flipud(samples)).astype(np.float32, copy=False)


def write_pfm(raster: DepthRaster) -> bytes:
    """Encode a top-down (H, W) array as a canonical little-endian `Pf` PFM."""
    arr = np.asarray(raster)
    if arr.ndim != 2 or arr.shape[0] <= 0 or arr.shape[1] <= 0:
        raise ValueError(f"depth raster must be a non-empty 2-D array, got shape {arr.shape}")
    height, width = arr.shape
    header = f"Pf\n{width} {height}\n-1.0\n".encode("ascii")
    return header + np.flipud(arr).astype("<f4").tobytes()


def read_ppm(data: bytes) -> ColorRaster:
    """Decode a binary `P6` PPM (maxval 255 or 65535) to float64 [0, 1].

    8-bit samples map to v/255, 16-bit big-endian samples to v/65535.

    Raises:
        ValueError: bad magic, malformed header, unsupported maxval, or a
            payload whose size does not match the header exactly.
    """
    magic, pos = _next_token(data, 0)
    if magic != b"P6":
        raise ValueError(f"not a binary PPM file (magic {magic!r})")
    w_tok, pos = _next_token(data, pos)
    h_tok, pos = _next_token(data, pos)
    width, height = _parse_dims(w_tok, h_tok)
    maxval_tok, pos = _next_token(data, pos)
    try:
        maxval = int(maxval_tok)
    except ValueError as exc:
        raise ValueError(f"bad PPM maxval {maxval_tok!r}") from exc
    if maxval not in (255, 65535):
        raise ValueError(f"unsupported PPM maxval {maxval} (expected 255 or 65535)")
    dtype = np.uint8 if maxval == 255 else ">u2"
    itemsize = 1 if maxval == 255 else 2
    expected = width * height * 3 * itemsize
    payload = data[pos:]
    if len(payload) != expected:
        raise ValueError(f"PPM payload is {len(payload)} bytes, expected {expected}")
    samples = np.frombuffer(payload, dtype=dtype).reshape(height, width, 3)
    return samples.astype(np.float64) / maxval


def write_ppm(image: ColorRaster) -> bytes:
    """Encode a float64 [0, 1] image as an 8-bit binary `P6` PPM.

    Quantization is round-half-up: byte = floor(v*255 + 0.5).
    """
    arr = np.asarray(image, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[2] != 3 or arr.shape[0] <= 0 or arr.shape[1] <= 0:
        raise ValueError(f"color raster must have shape (H, W, 3), got {arr.shape}")
    if not np.all(np.isfinite(arr)) or arr.min() < 0.0 or arr.max() > 1.0:
        raise ValueError("color raster values must lie in [0, 1]")
    height, width = arr.shape[:2]
    header = f"P6\n{width} {height}\n255\n".encode("ascii")
    quantized = np.floor(arr * 255.0 + 0.5).astype(np.uint8)
    return header + quantized.tobytes()


def write_pgm_mask(hole_mask: np.ndarray) -> bytes:
    """Encode a boolean hole mask (True = hole) as a `P5` PGM with maxval 1.

    Sample value 0 marks a hole, 1 a filled pixel.
    """
    mask = np.asarray(hole_mask)
    if mask.ndim != 2 or mask.dtype != np.bool_:
        raise ValueError(f"hole mask must be a 2-D boolean array, got {mask.dtype} {mask.shape}")
    height, width = mask.shape
    header = f"P5\n{width} {height}\n1\n".encode("ascii")
    return header + (~mask).astype(np.uint8).tobytes()


def read_pgm_mask(data: bytes) -> np.ndarray:
    """Decode a maxval-1 `P5` PGM back to a boolean hole mask (True = hole)."""
    magic, pos = _next_token(data, 0)
    if magic != b"P5":
        raise ValueError(f"not a binary PGM file (magic {magic!r})")
    w_tok, pos = _next_token(data, pos)
    h_tok, pos = _next_token(data, pos)
    width, height = _parse_dims(w_tok, h_tok)
    maxval_tok, pos = _next_token(data, pos)
    if maxval_tok != b"1":
        raise ValueError(f"hole mask PGM must have maxval 1, got {maxval_tok!r}")
    payload = data[pos:]
    if len(payload) != width * height:
        raise ValueError(f"PGM payload is {len(payload)} bytes, expected {width * height}")
    samples = np.frombuffer(payload, dtype=np.uint8).reshape(height, width)
    if samples.max(initial=0) > 1:
        raise ValueError("hole mask PGM contains samples above maxval 1")
    return samples == 0


_CONFIG_FIELDS = (
    "rows",
    "cols",
    "baseline_mm",
    "focal_mm",
    "pixel_pitch_mm",
    "width_px",
    "height_px",
    "n_hor",
    "n_ver",
    "baseline_mode",
)
_MODE_NAMES = {mode.value: mode for mode in BaselineMode}


def read_config(text: str) -> CameraArrayConfig:
    """Parse a camera-array configuration from strict JSON.

    The object must contain exactly the CameraArrayConfig field names
    (snake_case); unknown keys are rejected by name, missing keys and
    non-positive values are errors.  baseline_mode is "neighbor" or "full".
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise ValueError("config must be a JSON object")
    unknown = sorted(set(obj) - set(_CONFIG_FIELDS))
    if unknown:
        raise ValueError(f"unknown config key(s): {', '.join(unknown)}")
    missing = [name for name in _CONFIG_FIELDS if name not in obj]
    if missing:
        raise ValueError(f"missing config key(s): {', '.join(missing)}")
    mode_name = obj["baseline_mode"]
    if mode_name not in _MODE_NAMES:
        raise ValueError(
            f"baseline_mode must be one of {sorted(_MODE_NAMES)}, got {mode_name!r}"
        )
    kwargs = {name: obj[name] for name in _CONFIG_FIELDS[:-1]}
    for name in ("baseline_mm", "focal_mm", "pixel_pitch_mm"):
        if isinstance(kwargs[name], int) and not isinstance(kwargs[name], bool):
            kwargs[name] = float(kwargs[name])
    return CameraArrayConfig(baseline_mode=_MODE_NAMES[mode_name], **kwargs)


def write_config(cfg: CameraArrayConfig) -> str:
    """Serialize a configuration to canonical JSON (sorted keys, compact)."""
    obj = {name: getattr(cfg, name) for name in _CONFIG_FIELDS[:-1]}
    obj["baseline_mode"] = cfg.baseline_mode.value
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def config_sha256(cfg: CameraArrayConfig) -> str:
    """Hex SHA-256 of the canonical config JSON; the run-manifest config hash."""
    import hashlib

    return hashlib.sha256(write_config(cfg).encode("utf-8")).hexdigest()


def view_filenames(t: int, s: int) -> tuple[str, str]:
    """(image, depth) file names of camera (t, s) in a light-field directory."""
    return f"cam_{t}_{s}.ppm", f"depth_{t}_{s}.pfm"


def read_lightfield(directory: str | Path) -> LightField:
    """Assemble a LightField from a `cam_<t>_<s>.ppm` / `depth_<t>_<s>.pfm` /
    `array.json` directory.

    Raises:
        ValueError: missing directory, missing array.json, or missing views.
    """
    root = Path(directory)
    if not root.is_dir():
        raise ValueError(f"light-field directory not found: {root}")
    cfg_path = root / "array.json"
    if not cfg_path.is_file():
        raise ValueError(f"missing array.json in {root}")
    cfg = read_config(cfg_path.read_text(encoding="utf-8"))
    images, depths = [], []
    for t in range(cfg.rows):
        for s in range(cfg.cols):
            image_name, depth_name = view_filenames(t, s)
            image_path, depth_path = root / image_name, root / depth_name
            if not image_path.is_file() or not depth_path.is_file():
                raise ValueError(f"missing view files for camera ({t}, {s}) in {root}")
            images.append(read_ppm(image_path.read_bytes()))
            depths.append(read_pfm(depth_path.read_bytes()))
    return LightField(cfg=cfg, images=images, depths=depths)


def write_lightfield(lf: LightField, directory: str | Path) -> list[Path]:
    """Write a LightField to the directory layout; returns the files written."""
    root = Path(directory)
    root.mkdir(parents=True, exist_ok=True)
    written = []
    cfg_path = root / "array.json"
    cfg_path.write_text(write_config(lf.cfg) + "\n", encoding="utf-8")
    written.append(cfg_path)
    for t in range(lf.cfg.rows):
        for s in range(lf.cfg.cols):
            idx = t * lf.cfg.cols + s
            image_name, depth_name = view_filenames(t, s)
            image_path, depth_path = root / image_name, root / depth_name
            image_path.write_bytes(write_ppm(lf.images[idx]))
            depth_path.write_bytes(write_pfm(lf.depths[idx]))
            written.extend([image_path, depth_path])
    return written
