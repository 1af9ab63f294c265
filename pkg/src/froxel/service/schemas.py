"""Pydantic request/response models of the froxel service.

All file and directory references are paths on the host the service runs on;
the service is a local pipeline runner, not a upload/download file server.
Numeric metric values travel as fixed-format strings ("%.6f", or "inf") so
that responses stay strict JSON — JSON has no representation for infinity —
and so the CLI can print them verbatim.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

__all__ = [
    "GenSceneRequest",
    "GenSceneResponse",
    "AddNoiseRequest",
    "AddNoiseResponse",
    "BinRequest",
    "BinResponse",
    "FristogramRequest",
    "FristogramResponse",
    "AnalyzeRequest",
    "AnalyzeResponse",
    "ReduceRequest",
    "ReduceResponse",
    "SynthesizeRequest",
    "SynthesizeResponse",
    "MetricsRequest",
    "MetricsView",
    "MetricsResponse",
    "HealthResponse",
]

BaselineModeName = Literal["neighbor", "full"]
FilterName = Literal["mean", "median"]


class GenSceneRequest(BaseModel):
    """Render a scene JSON under an array config into a light-field directory."""

    scene: str
    config: str
    out: str
    threads: int = Field(default=1, ge=1)


class GenSceneResponse(BaseModel):
    outputs: list[str]
    manifest: str
    views: int


class AddNoiseRequest(BaseModel):
    """Corrupt the images of a light-field directory into a new directory."""

    lf: str
    out: str
    noise: Literal["gaussian", "sap"]
    mean: float = 0.0
    sigma2: Optional[float] = None
    density: Optional[float] = None
    seed: int = Field(default=0, ge=0)
    threads: int = Field(default=1, ge=1)


class AddNoiseResponse(BaseModel):
    outputs: list[str]
    manifest: str
    views: int


class BinRequest(BaseModel):
    """Bin a light-field directory and write a JSON binning summary."""

    lf: str
    out: str
    baseline_mode: Optional[BaselineModeName] = None
    threads: int = Field(default=1, ge=1)


class BinResponse(BaseModel):
    outputs: list[str]
    manifest: str
    assigned: int
    rejected: int
    nonempty_froxels: int
    reduction_factor: Optional[float]


class FristogramRequest(BaseModel):
    """Bin a light field and export its fristogram CSV (and optionally the CDF)."""

    lf: str
    out: str
    cdf_out: Optional[str] = None
    include_empty: bool = False
    baseline_mode: Optional[BaselineModeName] = None
    threads: int = Field(default=1, ge=1)


class FristogramResponse(BaseModel):
    outputs: list[str]
    manifest: str
    total_rays: int
    nonempty_froxels: int


class AnalyzeRequest(BaseModel):
    """Bin a light field and export per-froxel color statistics CSV."""

    lf: str
    out: str
    tau: float = Field(default=0.02, ge=0.0)
    baseline_mode: Optional[BaselineModeName] = None
    threads: int = Field(default=1, ge=1)


class AnalyzeResponse(BaseModel):
    outputs: list[str]
    manifest: str
    froxels: int
    lambertian: int
    non_lambertian: int


class ReduceRequest(BaseModel):
    """Bin a light field and reduce it to one color per froxel (FRXL file)."""

    lf: str
    out: str
    filter: FilterName = "mean"
    baseline_mode: Optional[BaselineModeName] = None
    threads: int = Field(default=1, ge=1)


class ReduceResponse(BaseModel):
    outputs: list[str]
    manifest: str
    froxels: int


class SynthesizeRequest(BaseModel):
    """Bin + reduce a light field, then render a novel view from it."""

    lf: str
    out: str
    viewpoint: tuple[float, float]
    filter: FilterName = "mean"
    baseline_mode: Optional[BaselineModeName] = None
    threads: int = Field(default=1, ge=1)


class SynthesizeResponse(BaseModel):
    outputs: list[str]
    manifest: str
    holes: int


class MetricsRequest(BaseModel):
    """PSNR/SSIM of a test image (or light-field directory) vs a reference."""

    ref: str
    test: str
    out: Optional[str] = None


class MetricsView(BaseModel):
    """Metrics of one view; `view` is "t,s" or null for a single-image pair."""

    view: Optional[str]
    psnr_db: str
    ssim: str


class MetricsResponse(BaseModel):
    outputs: list[str]
    manifest: Optional[str]
    views: list[MetricsView]
    mean: MetricsView


class HealthResponse(BaseModel):
    status: Literal["ok"]
    version: str
