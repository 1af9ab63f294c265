"""Command-line front end: a thin client of the froxel service.

Every subcommand builds one request, posts it to the matching service
endpoint, and reports the result.  By default the service runs in-process;
`--server URL` targets a remote instance instead, so scripted pipelines and
a long-running service behave identically.

Exit codes: 0 success, 2 usage error (bad flags/arguments), 1 processing
error (bad inputs, failed pipeline).  Diagnostics go to stderr; stdout
carries only declared results (the metrics lines).
"""

from __future__ import annotations

import argparse
import sys
import warnings

__all__ = ["main", "build_parser"]

_METRIC_ENDPOINT_TIMEOUT = 300.0


def _viewpoint(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"viewpoint must be 'x,y', got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"viewpoint must be two numbers, got {text!r}") from exc


def _add_common(parser: argparse.ArgumentParser, baseline_mode: bool = True) -> None:
    if baseline_mode:
        parser.add_argument(
            "--baseline-mode",
            choices=["neighbor", "full"],
            default=None,
            help="override the array.json baseline mode",
        )
    parser.add_argument("--threads", type=int, default=1, help="worker thread cap (default 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="froxel",
        description="Light-field froxel analysis: binning, statistics, denoising, synthesis.",
    )
    parser.add_argument("--server", default=None, help="base URL of a running froxel service")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("gen-scene", help="render a synthetic scene to a light-field directory")
    p.add_argument("--scene", required=True, help="scene JSON file")
    p.add_argument("--config", required=True, help="camera-array config JSON file")
    p.add_argument("--out", required=True, help="output light-field directory")
    _add_common(p, baseline_mode=False)

    p = sub.add_parser("add-noise", help="corrupt a light field's images into a new directory")
    p.add_argument("--lf", required=True, help="input light-field directory")
    p.add_argument("--out", required=True, help="output light-field directory")
    p.add_argument("--noise", required=True, choices=["gaussian", "sap"])
    p.add_argument("--mean", type=float, default=0.0, help="gaussian mean (default 0)")
    p.add_argument("--sigma2", type=float, default=None, help="gaussian variance")
    p.add_argument("--density", type=float, default=None, help="salt-and-pepper density")
    p.add_argument("--seed", type=int, default=0, help="base RNG seed (default 0)")
    _add_common(p, baseline_mode=False)

    p = sub.add_parser("bin", help="bin a light field and write a JSON binning summary")
    p.add_argument("--lf", required=True)
    p.add_argument("--out", required=True, help="summary JSON path")
    _add_common(p)

    p = sub.add_parser("fristogram", help="export the froxel ray-count histogram CSV")
    p.add_argument("--lf", required=True)
    p.add_argument("--out", required=True, help="histogram CSV path")
    p.add_argument("--cdf", default=None, help="also write the CDF CSV here")
    p.add_argument(
        "--include-empty",
        action="store_true",
        help="count empty cells of the bounded frustum region",
    )
    _add_common(p)

    p = sub.add_parser("analyze", help="export per-froxel color statistics CSV")
    p.add_argument("--lf", required=True)
    p.add_argument("--out", required=True, help="statistics CSV path")
    p.add_argument("--tau", type=float, default=0.02, help="Lambertian threshold (default 0.02)")
    _add_common(p)

    p = sub.add_parser("reduce", help="reduce each froxel to one color (FRXL file)")
    p.add_argument("--lf", required=True)
    p.add_argument("--out", required=True, help="output FRXL path")
    p.add_argument("--filter", choices=["mean", "median"], default="mean")
    _add_common(p)

    p = sub.add_parser("synthesize", help="render a novel view from the reduced field")
    p.add_argument("--lf", required=True)
    p.add_argument("--out", required=True, help="output PPM path (hole mask goes beside it)")
    p.add_argument("--viewpoint", required=True, type=_viewpoint, help="camera-plane x,y in mm")
    p.add_argument("--filter", choices=["mean", "median"], default="mean")
    _add_common(p)

    p = sub.add_parser("metrics", help="PSNR/SSIM of a test image or light field vs a reference")
    p.add_argument("--ref", required=True, help="reference PPM file or light-field directory")
    p.add_argument("--test", required=True, help="test PPM file or light-field directory")
    p.add_argument("--out", default=None, help="optional JSON report path")

    return parser


def _request_payload(args: argparse.Namespace) -> tuple[str, dict]:
    """Map parsed arguments to (endpoint path, request body)."""
    command = args.command
    if command == "gen-scene":
        body = {
            "scene": args.scene,
            "config": args.config,
            "out": args.out,
            "threads": args.threads,
        }
    elif command == "add-noise":
        body = {
            "lf": args.lf,
            "out": args.out,
            "noise": args.noise,
            "mean": args.mean,
            "sigma2": args.sigma2,
            "density": args.density,
            "seed": args.seed,
            "threads": args.threads,
        }
    elif command == "bin":
        body = {
            "lf": args.lf,
            "out": args.out,
            "baseline_mode": args.baseline_mode,
            "threads": args.threads,
        }
    elif command == "fristogram":
        body = {
            "lf": args.lf,
            "out": args.out,
            "cdf_out": args.cdf,
            "include_empty": args.include_empty,
            "baseline_mode": args.baseline_mode,
            "threads": args.threads,
        }
    elif command == "analyze":
        body = {
            "lf": args.lf,
            "out": args.out,
            "tau": args.tau,
            "baseline_mode": args.baseline_mode,
            "threads": args.threads,
        }
    elif command == "reduce":
        body = {
            "lf": args.lf,
            "out": args.out,
            "filter": args.filter,
            "baseline_mode": args.baseline_mode,
            "threads": args.threads,
        }
    elif command == "synthesize":
        body = {
            "lf": args.lf,
            "out": args.out,
            "viewpoint": list(args.viewpoint),
            "filter": args.filter,
            "baseline_mode": args.baseline_mode,
            "threads": args.threads,
        }
    else:  # metrics
        body = {"ref": args.ref, "test": args.test, "out": args.out}
    return f"/{command}", body


def _make_client(server: str | None):
    if server is not None:
        import httpx

        return httpx.Client(base_url=server, timeout=_METRIC_ENDPOINT_TIMEOUT)
    from .service.app import app

    # The in-process client import emits a deprecation warning about the
    # httpx successor package; it is irrelevant noise for CLI users.
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    return TestClient(app, raise_server_exceptions=False)


def _print_metrics(payload: dict) -> None:
    views = payload["views"]
    if len(views) == 1 and views[0]["view"] is None:
        view = views[0]
        print(f"psnr_db={view['psnr_db']} ssim={view['ssim']}")
        return
    for view in views:
        print(f"view={view['view']} psnr_db={view['psnr_db']} ssim={view['ssim']}")
    mean = payload["mean"]
    print(f"mean psnr_db={mean['psnr_db']} ssim={mean['ssim']}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "add-noise":
        if args.noise == "gaussian" and args.sigma2 is None:
            parser.error("--noise gaussian requires --sigma2")
        if args.noise == "sap" and args.density is None:
            parser.error("--noise sap requires --density")

    path, body = _request_payload(args)
    try:
        with _make_client(args.server) as client:
            response = client.post(path, json=body)
    except Exception as exc:  # connection/transport failures
        print(f"froxel: {exc}", file=sys.stderr)
        return 1

    if response.status_code != 200:
        try:
            detail = response.json().get("detail", response.text)
        except ValueError:
            detail = response.text
        print(f"froxel: {detail}", file=sys.stderr)
        return 1

    if args.command == "metrics":
        _print_metrics(response.json())
    return 0


if __name__ == "__main__":
    sys.exit(main())
