"""Pipeline runners behind the service endpoints.

Each `run_*` function executes one pipeline end to end: read inputs, compute,
write the declared outputs, then write a run manifest next to them.  All
input problems raise ValueError (the app maps those to HTTP 400); outputs are
bit-deterministic functions of (inputs, request, seeds) regardless of the
thread count.

A run manifest records everything needed to reproduce the run:

    {"tool": "froxel", "version": ..., "command": ..., "request": {...},
     "config_hash": <sha256 of the canonical array config JSON, or null>,
     "seeds": [...], "rng": "numpy-pcg64",
     "outputs": [{"path": ..., "sha256": ...}, ...]}

Directory-producing commands write `<dir>/manifest.json`; file-producing
commands write `<out>.manifest.json` beside the primary output.
`rerun_manifest` re-issues the recorded request through the same runner.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from pathlib import Path

from .. import __version__
from ..analysis import Lambertianness, classify_store, export_stats_csv
from ..binning import (
    LightField,
    bin_lightfield,
    export_cdf_csv,
    export_fristogram_csv,
    fristogram,
    reduction_factor,
)
from ..filters import FilterStat, reduce_store, write_frxl
from ..lfgeom import BaselineMode, CameraArrayConfig
from ..lfio import (
    config_sha256,
    read_config,
    read_lightfield,
    read_ppm,
    write_lightfield,
    write_pgm_mask,
    write_ppm,
)
from ..metrics import psnr as psnr_of
from ..metrics import ssim as ssim_of
from ..noise import GaussianNoise, NoiseParams, SaltPepperNoise, add_noise
from ..scenegen import ground_truth_labels, render, scene_from_json  # noqa: F401
from ..synth import ViewRequest, synthesize
from . import schemas

__all__ = [
    "run_gen_scene",
    "run_add_noise",
    "run_bin",
    "run_fristogram",
    "run_analyze",
    "run_reduce",
    "run_synthesize",
    "run_metrics",
    "rerun_manifest",
]

_RNG_NAME = "numpy-pcg64"


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _write_manifest(
    manifest_path: Path,
    command: str,
    request,
    cfg: CameraArrayConfig | None,
    seeds: list[int],
    outputs: list[Path],
) -> Path:
    manifest = {
        "tool": "froxel",
        "version": __version__,
        "command": command,
        "request": request.model_dump(),
        "config_hash": None if cfg is None else config_sha256(cfg),
        "seeds": seeds,
        "rng": _RNG_NAME,
        "outputs": [{"path": str(p), "sha256": _sha256(p)} for p in outputs],
    }
    manifest_path.parent.mkdir(parents=True, exist_ok=True)
    manifest_path.write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return manifest_path


def _file_manifest_path(out: Path) -> Path:
    return out.with_name(out.name + ".manifest.json")


def _read_text(path_str: str, what: str) -> str:
    path = Path(path_str)
    if not path.is_file():
        raise ValueError(f"{what} not found: {path}")
    return path.read_text(encoding="utf-8")


def _load_lightfield(lf_dir: str, baseline_mode: str | None) -> LightField:
    lf = read_lightfield(lf_dir)
    if baseline_mode is not None:
        cfg = dataclasses.replace(lf.cfg, baseline_mode=BaselineMode(baseline_mode))
        lf = LightField(cfg=cfg, images=lf.images, depths=lf.depths)
    return lf


def _fmt_metric(value: float) -> str:
    """Fixed %.6f formatting; infinities print as 'inf'."""
    return f"{value:.6f}" if math.isfinite(value) else ("inf" if value > 0 else "-inf")


def run_gen_scene(request: schemas.GenSceneRequest) -> schemas.GenSceneResponse:
    spec = scene_from_json(_read_text(request.scene, "scene file"))
    cfg = read_config(_read_text(request.config, "config file"))
    lf = render(spec, cfg, threads=request.threads)
    written = write_lightfield(lf, request.out)
    manifest = _write_manifest(
        Path(request.out) / "manifest.json",
        "gen-scene",
        request,
        cfg,
        [spec.seed],
        written,
    )
    return schemas.GenSceneResponse(
        outputs=[str(p) for p in written],
        manifest=str(manifest),
        views=cfg.num_cameras,
    )


def _noise_params(request: schemas.AddNoiseRequest) -> NoiseParams:
    if request.noise == "gaussian":
        if request.sigma2 is None:
            raise ValueError("gaussian noise requires sigma2")
        kind = GaussianNoise(mean=request.mean, variance=request.sigma2)
    else:
        if request.density is None:
            raise ValueError("salt-and-pepper noise requires density")
        kind = SaltPepperNoise(density=request.density)
    return NoiseParams(kind=kind, seed=request.seed)


def run_add_noise(request: schemas.AddNoiseRequest) -> schemas.AddNoiseResponse:
    lf = _load_lightfield(request.lf, None)
    params = _noise_params(request)
    noisy = add_noise(lf, params, threads=request.threads)
    written = write_lightfield(noisy, request.out)
    manifest = _write_manifest(
        Path(request.out) / "manifest.json",
        "add-noise",
        request,
        lf.cfg,
        [request.seed],
        written,
    )
    return schemas.AddNoiseResponse(
        outputs=[str(p) for p in written],
        manifest=str(manifest),
        views=lf.cfg.num_cameras,
    )


def run_bin(request: schemas.BinRequest) -> schemas.BinResponse:
    lf = _load_lightfield(request.lf, request.baseline_mode)
    store = bin_lightfield(lf, threads=request.threads)
    factor = None
    if store.num_froxels > 0:
        factor = reduction_factor(fristogram(store))
    summary = {
        "assigned": store.assigned,
        "rejected": store.rejected,
        "total_rays": store.assigned,
        "nonempty_froxels": store.num_froxels,
        "reduction_factor": factor,
    }
    out = Path(request.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    manifest = _write_manifest(
        _file_manifest_path(out), "bin", request, lf.cfg, [], [out]
    )
    return schemas.BinResponse(
        outputs=[str(out)],
        manifest=str(manifest),
        assigned=store.assigned,
        rejected=store.rejected,
        nonempty_froxels=store.num_froxels,
        reduction_factor=factor,
    )


def run_fristogram(request: schemas.FristogramRequest) -> schemas.FristogramResponse:
    lf = _load_lightfield(request.lf, request.baseline_mode)
    store = bin_lightfield(lf, threads=request.threads)
    fg = fristogram(store, include_empty=request.include_empty)
    out = Path(request.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(export_fristogram_csv(fg), encoding="utf-8")
    written = [out]
    if request.cdf_out is not None:
        cdf_out = Path(request.cdf_out)
        cdf_out.parent.mkdir(parents=True, exist_ok=True)
        cdf_out.write_text(export_cdf_csv(fg), encoding="utf-8")
        written.append(cdf_out)
    manifest = _write_manifest(
        _file_manifest_path(out), "fristogram", request, lf.cfg, [], written
    )
    return schemas.FristogramResponse(
        outputs=[str(p) for p in written],
        manifest=str(manifest),
        total_rays=fg.total_rays,
        nonempty_froxels=fg.nonempty_froxels,
    )


def run_analyze(request: schemas.AnalyzeRequest) -> schemas.AnalyzeResponse:
    lf = _load_lightfield(request.lf, request.baseline_mode)
    store = bin_lightfield(lf, threads=request.threads)
    csv_text = export_stats_csv(store, tau=request.tau)
    labels = classify_store(store, tau=request.tau)
    lambertian = sum(
        1 for label in labels.values() if label.label is Lambertianness.LAMBERTIAN
    )
    out = Path(request.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(csv_text, encoding="utf-8")
    manifest = _write_manifest(
        _file_manifest_path(out), "analyze", request, lf.cfg, [], [out]
    )
    return schemas.AnalyzeResponse(
        outputs=[str(out)],
        manifest=str(manifest),
        froxels=store.num_froxels,
        lambertian=lambertian,
        non_lambertian=store.num_froxels - lambertian,
    )


def run_reduce(request: schemas.ReduceRequest) -> schemas.ReduceResponse:
    lf = _load_lightfield(request.lf, request.baseline_mode)
    store = bin_lightfield(lf, threads=request.threads)
    field = reduce_store(store, FilterStat(request.filter))
    out = Path(request.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_bytes(write_frxl(field))
    manifest = _write_manifest(
        _file_manifest_path(out), "reduce", request, lf.cfg, [], [out]
    )
    return schemas.ReduceResponse(
        outputs=[str(out)],
        manifest=str(manifest),
        froxels=len(field.froxels),
    )


def run_synthesize(request: schemas.SynthesizeRequest) -> schemas.SynthesizeResponse:
    lf = _load_lightfield(request.lf, request.baseline_mode)
    store = bin_lightfield(lf, threads=request.threads)
    field = reduce_store(store, FilterStat(request.filter))
    view = ViewRequest(x_mm=request.viewpoint[0], y_mm=request.viewpoint[1])
    image, hole_mask = synthesize(field, view)
    out = Path(request.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_bytes(write_ppm(image))
    holes_out = out.with_suffix(".holes.pgm")
    holes_out.write_bytes(write_pgm_mask(hole_mask))
    written = [out, holes_out]
    manifest = _write_manifest(
        _file_manifest_path(out), "synthesize", request, lf.cfg, [], written
    )
    return schemas.SynthesizeResponse(
        outputs=[str(p) for p in written],
        manifest=str(manifest),
        holes=int(hole_mask.sum()),
    )


def _metric_pair(ref_path: Path, test_path: Path, view: str | None) -> schemas.MetricsView:
    ref = read_ppm(ref_path.read_bytes())
    test = read_ppm(test_path.read_bytes())
    return schemas.MetricsView(
        view=view,
        psnr_db=_fmt_metric(psnr_of(ref, test)),
        ssim=_fmt_metric(ssim_of(ref, test)),
    )


def run_metrics(request: schemas.MetricsRequest) -> schemas.MetricsResponse:
    ref_path, test_path = Path(request.ref), Path(request.test)
    views: list[schemas.MetricsView] = []
    if ref_path.is_dir() and test_path.is_dir():
        cfg = read_config(_read_text(str(ref_path / "array.json"), "reference array.json"))
        psnrs, ssims = [], []
        for t in range(cfg.rows):
            for s in range(cfg.cols):
                name = f"cam_{t}_{s}.ppm"
                ref_view, test_view = ref_path / name, test_path / name
                if not ref_view.is_file() or not test_view.is_file():
                    raise ValueError(f"missing view image {name} in one of the directories")
                ref = read_ppm(ref_view.read_bytes())
                test = read_ppm(test_view.read_bytes())
                p, q = psnr_of(ref, test), ssim_of(ref, test)
                psnrs.append(p)
                ssims.append(q)
                views.append(
                    schemas.MetricsView(
                        view=f"{t},{s}", psnr_db=_fmt_metric(p), ssim=_fmt_metric(q)
                    )
                )
        mean = schemas.MetricsView(
            view=None,
            psnr_db=_fmt_metric(sum(psnrs) / len(psnrs)),
            ssim=_fmt_metric(sum(ssims) / len(ssims)),
        )
    elif ref_path.is_file() and test_path.is_file():
        views.append(_metric_pair(ref_path, test_path, None))
        mean = views[0]
    else:
        raise ValueError(
            "metrics needs two image files or two light-field directories, "
            f"got {request.ref!r} and {request.test!r}"
        )
    outputs: list[Path] = []
    manifest_path: Path | None = None
    if request.out is not None:
        out = Path(request.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        report = {
            "views": [v.model_dump() for v in views],
            "mean": mean.model_dump(),
        }
        out.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        outputs.append(out)
        manifest_path = _write_manifest(
            _file_manifest_path(out), "metrics", request, None, [], outputs
        )
    return schemas.MetricsResponse(
        outputs=[str(p) for p in outputs],
        manifest=None if manifest_path is None else str(manifest_path),
        views=views,
        mean=mean,
    )


_RUNNERS = {
    "gen-scene": (schemas.GenSceneRequest, run_gen_scene),
    "add-noise": (schemas.AddNoiseRequest, run_add_noise),
    "bin": (schemas.BinRequest, run_bin),
    "fristogram": (schemas.FristogramRequest, run_fristogram),
    "analyze": (schemas.AnalyzeRequest, run_analyze),
    "reduce": (schemas.ReduceRequest, run_reduce),
    "synthesize": (schemas.SynthesizeRequest, run_synthesize),
    "metrics": (schemas.MetricsRequest, run_metrics),
}


def rerun_manifest(manifest: dict):
    """Re-issue the request recorded in a run manifest; reproduces its
    outputs bit-exactly."""
    command = manifest.get("command")
    if command not in _RUNNERS:
        raise ValueError(f"manifest names unknown command {command!r}")
    request_model, runner = _RUNNERS[command]
    return runner(request_model(**manifest["request"]))
