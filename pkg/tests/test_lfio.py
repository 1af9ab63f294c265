"""File-format tests: PFM depth maps, PPM images, PGM hole masks, the
camera-array JSON config, and the light-field directory layout.

Golden byte strings are constructed by hand from the format definitions so
the codec is checked against the wire format, not against itself.
"""

from __future__ import annotations

import hashlib
import json
import logging
import struct

import numpy as np
import pytest

from conftest import make_desk_rig
from froxel.binning import LightField
from froxel.lfgeom import BaselineMode, disparity_constant
from froxel.lfio import (
    config_sha256,
    read_config,
    read_lightfield,
    read_pfm,
    read_pgm_mask,
    read_ppm,
    view_filenames,
    write_config,
    write_lightfield,
    write_pfm,
    write_pgm_mask,
    write_ppm,
)


class TestPfm:
    def test_single_sample_little_endian(self):
        data = b"Pf\n1 1\n-1.0\n" + struct.pack("<f", 1000.0)
        raster = read_pfm(data)
        assert raster.shape == (1, 1)
        assert raster.dtype == np.float32
        assert raster[0, 0] == 1000.0

    def test_big_endian_scale_sign(self):
        data = b"Pf\n1 1\n1.0\n" + struct.pack(">f", 42.0)
        assert read_pfm(data)[0, 0] == 42.0

    def test_bottom_row_stored_first(self):
        # Payload rows are bottom-to-top: 3,4 then 1,2 decodes to [[1,2],[3,4]].
        payload = struct.pack("<4f", 3.0, 4.0, 1.0, 2.0)
        raster = read_pfm(b"Pf\n2 2\n-1.0\n" + payload)
        np.testing.assert_array_equal(raster, np.array([[1.0, 2.0], [3.0, 4.0]]))

    def test_write_matches_golden_bytes(self):
        raster = np.array([[1.0, 2.0], [3.0, 4.0]], dtype=np.float32)
        expected = b"Pf\n2 2\n-1.0\n" + struct.pack("<4f", 3.0, 4.0, 1.0, 2.0)
        assert write_pfm(raster) == expected

    def test_round_trip_preserves_non_finite(self):
        raster = np.array([[np.inf, 5.0], [np.nan, -1.0]], dtype=np.float32)
        got = read_pfm(write_pfm(raster))
        np.testing.assert_array_equal(np.isnan(got), np.isnan(raster))
        np.testing.assert_array_equal(got[~np.isnan(got)], raster[~np.isnan(raster)])

    def test_scale_magnitude_is_ignored(self):
        data = b"Pf\n1 1\n-100.0\n" + struct.pack("<f", 7.0)
        assert read_pfm(data)[0, 0] == 7.0  # only the sign matters

    def test_three_channel_takes_first_and_warns(self, caplog):
        payload = struct.pack("<6f", 1.0, 2.0, 3.0, 4.0, 5.0, 6.0)
        with caplog.at_level(logging.WARNING, logger="froxel.lfio"):
            raster = read_pfm(b"PF\n2 1\n-1.0\n" + payload)
        assert "first channel" in caplog.text
        np.testing.assert_array_equal(raster, np.array([[1.0, 4.0]], dtype=np.float32))

    def test_header_comments_are_skipped(self):
        data = b"Pf\n# made by hand\n1 1\n# scale next\n-1.0\n" + struct.pack("<f", 9.0)
        assert read_pfm(data)[0, 0] == 9.0

    def test_payload_may_start_with_whitespace_byte(self):
        # Exactly one byte separates header and payload; a payload whose first
        # byte happens to be 0x20 must not be eaten as whitespace.
        payload = b"\x20\x00\x80\x3f"  # little-endian float32 ~1.0000038
        raster = read_pfm(b"Pf\n1 1\n-1.0\n" + payload)
        assert raster[0, 0] == np.frombuffer(payload, dtype="<f4")[0]

    @pytest.mark.parametrize(
        "data,fragment",
        [
            (b"P6\n1 1\n-1.0\n" + b"\0" * 4, "magic"),
            (b"Pf\n0 1\n-1.0\n", "positive"),
            (b"Pf\n1 1\n0\n" + b"\0" * 4, "non-zero"),
            (b"Pf\n1 1\nfast\n" + b"\0" * 4, "scale"),
            (b"Pf\n1 1\n-1.0\n" + b"\0" * 3, "expected 4"),
            (b"Pf\n1 1\n-1.0\n" + b"\0" * 5, "expected 4"),
            (b"Pf\n1 1\n", "truncated"),
        ],
    )
    def test_rejects_malformed_input(self, data, fragment):
        with pytest.raises(ValueError, match=fragment):
            read_pfm(data)

    def test_write_rejects_bad_shapes(self):
        with pytest.raises(ValueError):
            write_pfm(np.zeros((2, 2, 3), dtype=np.float32))
        with pytest.raises(ValueError):
            write_pfm(np.zeros(4, dtype=np.float32))


class TestPpm:
    def test_single_magenta_pixel(self):
        data = b"P6\n1 1\n255\n" + bytes([255, 0, 255])
        image = read_ppm(data)
        assert image.shape == (1, 1, 3)
        np.testing.assert_array_equal(image[0, 0], [1.0, 0.0, 1.0])

    def test_sixteen_bit_big_endian(self):
        payload = struct.pack(">3H", 65535, 0, 32768)
        image = read_ppm(b"P6\n1 1\n65535\n" + payload)
        np.testing.assert_allclose(image[0, 0], [1.0, 0.0, 32768 / 65535])

    def test_write_quantizes_round_half_up(self):
        image = np.array([[[0.5, 1.0 / 255.0, 0.0]]])
        data = write_ppm(image)
        assert data == b"P6\n1 1\n255\n" + bytes([128, 1, 0])

    def test_round_trip_error_bounded_by_half_step(self):
        rng = np.random.default_rng(3)
        image = rng.random((5, 7, 3))
        got = read_ppm(write_ppm(image))
        assert np.abs(got - image).max() <= 0.5 / 255.0 + 1e-12

    def test_round_trip_exact_on_grid(self):
        image = np.arange(12, dtype=np.float64).reshape(2, 2, 3) / 255.0
        np.testing.assert_array_equal(read_ppm(write_ppm(image)), image)

    def test_header_comments_are_skipped(self):
        data = b"P6\n# camera 0_0\n2 1\n255\n" + bytes(6)
        assert read_ppm(data).shape == (1, 2, 3)

    @pytest.mark.parametrize(
        "data,fragment",
        [
            (b"P5\n1 1\n255\n" + bytes(3), "magic"),
            (b"P6\n1 1\n254\n" + bytes(3), "maxval"),
            (b"P6\n1 1\n255\n" + bytes(2), "expected 3"),
            (b"P6\n1 1\n255\n" + bytes(4), "expected 3"),
            (b"P6\n-1 1\n255\n", "positive"),
            (b"P6\n1 one\n255\n", "dimensions"),
        ],
    )
    def test_rejects_malformed_input(self, data, fragment):
        with pytest.raises(ValueError, match=fragment):
            read_ppm(data)

    def test_write_rejects_out_of_range_values(self):
        with pytest.raises(ValueError):
            write_ppm(np.full((1, 1, 3), 1.5))
        with pytest.raises(ValueError):
            write_ppm(np.full((1, 1, 3), np.nan))

    def test_write_rejects_bad_shape(self):
        with pytest.raises(ValueError):
            write_ppm(np.zeros((2, 2)))


class TestPgmMask:
    def test_golden_bytes(self):
        mask = np.array([[True, False]])  # hole, filled
        assert write_pgm_mask(mask) == b"P5\n2 1\n1\n" + bytes([0, 1])

    def test_round_trip(self):
        rng = np.random.default_rng(17)
        mask = rng.random((6, 4)) < 0.5
        np.testing.assert_array_equal(read_pgm_mask(write_pgm_mask(mask)), mask)

    def test_rejects_non_boolean(self):
        with pytest.raises(ValueError):
            write_pgm_mask(np.zeros((2, 2), dtype=np.uint8))

    @pytest.mark.parametrize(
        "data,fragment",
        [
            (b"P6\n1 1\n1\n\0", "magic"),
            (b"P5\n1 1\n255\n\0", "maxval 1"),
            (b"P5\n2 1\n1\n\0", "expected 2"),
            (b"P5\n1 1\n1\n\x02", "above maxval"),
        ],
    )
    def test_rejects_malformed_input(self, data, fragment):
        with pytest.raises(ValueError, match=fragment):
            read_pgm_mask(data)


class TestConfigJson:
    def test_write_is_canonical(self, desk_rig):
        expected = (
            '{"baseline_mm":10.0,"baseline_mode":"neighbor","cols":4,'
            '"focal_mm":10.0,"height_px":64,"n_hor":1,"n_ver":1,"pixel_pitch_mm":0.01,'
            '"rows":4,"width_px":64}'
        )
        assert write_config(desk_rig) == expected

    def test_round_trip(self, desk_rig):
        assert read_config(write_config(desk_rig)) == desk_rig
        full = make_desk_rig(baseline_mode=BaselineMode.FULL_ARRAY)
        assert read_config(write_config(full)) == full

    def test_eight_by_eight_rig_full_array_constant(self):
        text = json.dumps(
            {
                "rows": 8,
                "cols": 8,
                "baseline_mm": 70.0,
                "focal_mm": 12.5,
                "pixel_pitch_mm": 0.00586,
                "width_px": 1920,
                "height_px": 1200,
                "n_hor": 1,
                "n_ver": 1,
                "baseline_mode": "full",
            }
        )
        cfg = read_config(text)
        assert cfg.num_cameras == 64
        assert disparity_constant(cfg) == pytest.approx(1045221.84, abs=0.01)

    def test_unknown_key_is_named(self):
        obj = json.loads(write_config(make_desk_rig()))
        obj["fov"] = 90
        with pytest.raises(ValueError, match="fov"):
            read_config(json.dumps(obj))

    def test_missing_key_is_named(self):
        obj = json.loads(write_config(make_desk_rig()))
        del obj["focal_mm"]
        with pytest.raises(ValueError, match="focal_mm"):
            read_config(json.dumps(obj))

    def test_bad_mode_name(self):
        obj = json.loads(write_config(make_desk_rig()))
        obj["baseline_mode"] = "diagonal"
        with pytest.raises(ValueError, match="diagonal"):
            read_config(json.dumps(obj))

    def test_rejects_non_object_and_bad_json(self):
        with pytest.raises(ValueError, match="JSON"):
            read_config("{not json")
        with pytest.raises(ValueError, match="object"):
            read_config("[1, 2]")

    def test_integer_lengths_are_accepted_as_floats(self):
        obj = json.loads(write_config(make_desk_rig()))
        obj["baseline_mm"] = 10  # JSON integer
        assert read_config(json.dumps(obj)).baseline_mm == 10.0

    def test_sha256_matches_canonical_text(self, desk_rig):
        expected = hashlib.sha256(write_config(desk_rig).encode()).hexdigest()
        assert config_sha256(desk_rig) == expected
        assert config_sha256(make_desk_rig(rows=2)) != expected


class TestLightFieldDirectory:
    def _make_lightfield(self):
        cfg = make_desk_rig(rows=2, cols=2, width_px=4, height_px=3)
        rng = np.random.default_rng(29)
        images = [np.round(rng.random((3, 4, 3)) * 255) / 255 for _ in range(4)]
        depths = [
            np.full((3, 4), 100.0 * (idx + 1), dtype=np.float32) for idx in range(4)
        ]
        depths[0][0, 0] = np.inf  # pixel without scene content survives the trip
        return LightField(cfg=cfg, images=images, depths=depths)

    def test_view_filenames(self):
        assert view_filenames(1, 3) == ("cam_1_3.ppm", "depth_1_3.pfm")

    def test_round_trip(self, tmp_path):
        lf = self._make_lightfield()
        written = write_lightfield(lf, tmp_path)
        assert sorted(p.name for p in written) == sorted(
            ["array.json"]
            + [f"cam_{t}_{s}.ppm" for t in range(2) for s in range(2)]
            + [f"depth_{t}_{s}.pfm" for t in range(2) for s in range(2)]
        )
        got = read_lightfield(tmp_path)
        assert got.cfg == lf.cfg
        for a, b in zip(got.images, lf.images):
            np.testing.assert_array_equal(a, b)
        for a, b in zip(got.depths, lf.depths):
            np.testing.assert_array_equal(a, b)

    def test_missing_directory(self, tmp_path):
        with pytest.raises(ValueError, match="not found"):
            read_lightfield(tmp_path / "absent")

    def test_missing_config(self, tmp_path):
        with pytest.raises(ValueError, match="array.json"):
            read_lightfield(tmp_path)

    def test_missing_view_names_camera(self, tmp_path):
        lf = self._make_lightfield()
        write_lightfield(lf, tmp_path)
        (tmp_path / "cam_1_0.ppm").unlink()
        with pytest.raises(ValueError, match=r"\(1, 0\)"):
            read_lightfield(tmp_path)
