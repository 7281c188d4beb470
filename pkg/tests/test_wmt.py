import numpy as np
import pytest

from motionweave.wmt import load_tensor, read_tensor_bytes, save_tensor, write_tensor_bytes


def test_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    for shape in [(7,), (3, 4), (2, 3, 4, 5)]:
        arr = rng.standard_normal(shape).astype(np.float32)
        path = tmp_path / "t.wmt1"
        save_tensor(arr, path)
        back = load_tensor(path)
        assert back.shape == arr.shape
        assert np.array_equal(back, arr)


def test_header_layout():
    data = write_tensor_bytes(np.zeros((2, 3), dtype=np.float32))
    assert data[:4] == b"WMT1"
    assert data[4] == 2
    assert int.from_bytes(data[5:9], "little") == 2
    assert int.from_bytes(data[9:13], "little") == 3
    assert len(data) == 13 + 4 * 6


def test_bad_magic():
    with pytest.raises(ValueError):
        read_tensor_bytes(b"NOPE" + bytes(20))


def test_truncated_payload():
    good = write_tensor_bytes(np.zeros(4, dtype=np.float32))
    with pytest.raises(ValueError):
        read_tensor_bytes(good[:-4])


def test_float64_input_is_cast():
    arr = np.array([1.0, 2.0], dtype=np.float64)
    back = read_tensor_bytes(write_tensor_bytes(arr))
    assert back.dtype == np.float32
