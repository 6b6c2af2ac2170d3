import numpy as np
import pytest

from liedlab import arrayio


class TestBinaryFormat:
    def test_real_round_trip(self, tmp_path):
        rng = np.random.default_rng(0)
        data = rng.standard_normal((16, 32))
        path = tmp_path / "field.lied"
        arrayio.write_array(path, data, dy=0.25, dz=0.5)
        back, dy, dz = arrayio.read_array(path)
        assert np.array_equal(back, data)
        assert (dy, dz) == (0.25, 0.5)

    def test_complex_round_trip(self, tmp_path):
        rng = np.random.default_rng(1)
        data = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
        path = tmp_path / "field.lied"
        arrayio.write_array(path, data, dy=0.1, dz=0.1)
        back, _, _ = arrayio.read_array(path)
        assert back.dtype == np.complex128
        assert np.array_equal(back, data)

    def test_header_layout(self, tmp_path):
        path = tmp_path / "field.lied"
        arrayio.write_array(path, np.zeros((4, 4)), dy=1.0, dz=2.0)
        raw = path.read_bytes()
        assert raw[:4] == b"LIED"
        assert len(raw) == arrayio._HEADER.size + 4 * 4 * 8

    def test_bad_magic_rejected(self, tmp_path):
        path = tmp_path / "junk.lied"
        path.write_bytes(b"NOPE" + b"\0" * 64)
        with pytest.raises(ValueError, match="magic"):
            arrayio.read_array(path)


class TestCsv:
    def test_round_trip_with_comments(self, tmp_path):
        path = tmp_path / "trace.csv"
        cols = {"k_y": np.linspace(-1, 1, 11), "S": np.linspace(0, 5, 11) ** 2}
        arrayio.write_csv(path, cols, comments=["config_hash=abc123"])
        back, comments = arrayio.read_csv(path)
        assert comments == ["config_hash=abc123"]
        assert np.allclose(back["k_y"], cols["k_y"], atol=0)
        assert np.allclose(back["S"], cols["S"], atol=0)

    def test_length_mismatch_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            arrayio.write_csv(tmp_path / "x.csv", {"a": [1, 2], "b": [1]})
