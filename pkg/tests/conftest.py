"""Shared fixtures: camera rigs, scene builders, and the acceptance summary.

The rigs used across the suite:
  - desk_rig: 4x4 cameras, 64x64 px, C = 10000 mm exactly; depths like 5000,
    4000, 2000 mm give integer/exact slice and scale arithmetic in float64.
  - dyadic_rig: 4x4 cameras, 64x64 px with power-of-two optics (C = 16384),
    for zero-tolerance comparisons.
  - cinema_rig: a production-scale 4x4 / 70 mm / 12.5 mm / 5.86 um array
    at 1920x1200 px, used for the worked examples.
  - toy_rig: single camera, f/p = 100, 100x100 px.
"""

from __future__ import annotations

import re

import pytest

from froxel.lfgeom import BaselineMode, CameraArrayConfig


def make_desk_rig(**overrides) -> CameraArrayConfig:
    params = dict(
        rows=4,
        cols=4,
        baseline_mm=10.0,
        focal_mm=10.0,
        pixel_pitch_mm=0.01,
        width_px=64,
        height_px=64,
    )
    params.update(overrides)
    return CameraArrayConfig(**params)


def make_dyadic_rig(**overrides) -> CameraArrayConfig:
    params = dict(
        rows=4,
        cols=4,
        baseline_mm=16.0,
        focal_mm=16.0,
        pixel_pitch_mm=0.015625,
        width_px=64,
        height_px=64,
    )
    params.update(overrides)
    return CameraArrayConfig(**params)


def make_cinema_rig(**overrides) -> CameraArrayConfig:
    params = dict(
        rows=4,
        cols=4,
        baseline_mm=70.0,
        focal_mm=12.5,
        pixel_pitch_mm=0.00586,
        width_px=1920,
        height_px=1200,
        baseline_mode=BaselineMode.NEIGHBOR,
    )
    params.update(overrides)
    return CameraArrayConfig(**params)


def make_toy_rig(**overrides) -> CameraArrayConfig:
    params = dict(
        rows=1,
        cols=1,
        baseline_mm=10.0,
        focal_mm=10.0,
        pixel_pitch_mm=0.1,
        width_px=100,
        height_px=100,
    )
    params.update(overrides)
    return CameraArrayConfig(**params)


@pytest.fixture
def desk_rig() -> CameraArrayConfig:
    return make_desk_rig()


@pytest.fixture
def dyadic_rig() -> CameraArrayConfig:
    return make_dyadic_rig()


@pytest.fixture
def cinema_rig() -> CameraArrayConfig:
    return make_cinema_rig()


@pytest.fixture
def toy_rig() -> CameraArrayConfig:
    return make_toy_rig()


# --- acceptance criteria summary -------------------------------------------

_ACCEPTANCE_PATTERN = re.compile(r"test_c(\d{2})_([a-z0-9_]+)")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Print one PASS/FAIL line per acceptance criterion after the run."""
    results: dict[int, tuple[str, str]] = {}
    for outcome, status in (("passed", "PASS"), ("failed", "FAIL"), ("error", "FAIL")):
        for report in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py" not in nodeid:
                continue
            if getattr(report, "when", "call") != "call" and outcome != "error":
                continue
            match = _ACCEPTANCE_PATTERN.search(nodeid)
            if not match:
                continue
            number = int(match.group(1))
            name = match.group(2).replace("_", "-")
            # A FAIL in any phase trumps an earlier PASS record.
            if results.get(number, (None, "PASS"))[1] == "PASS":
                results[number] = (name, status)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        name, status = results[number]
        terminalreporter.write_line(f"ACCEPTANCE {number:02d} {name}: {status}")
