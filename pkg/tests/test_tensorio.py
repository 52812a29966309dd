"""WFT1 tensor files and binary PGM images."""
import struct

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wavekit import TensorFormatError, load_tensor, random_field, read_pgm, save_tensor, write_pgm


@settings(deadline=None, max_examples=20)
@given(
    seed=st.integers(0, 2**32 - 1),
    c=st.integers(1, 3),
    h=st.integers(1, 9),
    w=st.integers(1, 9),
)
def test_tensor_roundtrip_is_bitwise(tmp_path_factory, seed, c, h, w):
    path = tmp_path_factory.mktemp("wft") / "t.wft1"
    f = random_field(seed, h, w, c)
    save_tensor(f, path)
    back = load_tensor(path)
    assert back.shape == f.shape
    assert np.array_equal(back.data, f.data)


def test_tensor_header_layout(tmp_path):
    path = tmp_path / "t.wft1"
    save_tensor(random_field(0, 3, 5, 2), path)
    raw = path.read_bytes()
    assert raw[:4] == b"WFT1"
    dtype_code, rank, c, h, w = struct.unpack_from("<5I", raw, 4)
    assert (dtype_code, rank, c, h, w) == (1, 3, 2, 3, 5)
    assert len(raw) == 4 + 20 + 2 * 3 * 5 * 8


def _valid_bytes() -> bytes:
    return (
        b"WFT1"
        + struct.pack("<5I", 1, 3, 1, 2, 2)
        + np.arange(4.0).astype("<f8").tobytes()
    )


@pytest.mark.parametrize(
    "mutate,message",
    [
        (lambda b: b"XXXX" + b[4:], "magic"),
        (lambda b: b[:10], "truncated header"),
        (lambda b: b[:4] + struct.pack("<5I", 9, 3, 1, 2, 2) + b[24:], "dtype"),
        (lambda b: b[:4] + struct.pack("<5I", 1, 2, 1, 2, 2) + b[24:], "rank"),
        (lambda b: b[:-8], "payload"),
        (lambda b: b + b"\x00" * 8, "payload"),
        (lambda b: b[:4] + struct.pack("<5I", 1, 3, 0, 2, 2), "zero dimension"),
    ],
)
def test_tensor_errors_name_the_defect(tmp_path, mutate, message):
    path = tmp_path / "bad.wft1"
    path.write_bytes(mutate(_valid_bytes()))
    with pytest.raises(TensorFormatError, match=message):
        load_tensor(path)


def test_pgm_roundtrip(tmp_path):
    path = tmp_path / "img.pgm"
    img = (np.arange(48).reshape(6, 8) * 5 % 256).astype(np.uint8)
    write_pgm(path, img)
    back = read_pgm(path)
    assert back.dtype == np.uint8
    assert np.array_equal(back, img)


def test_pgm_write_clips_and_rounds(tmp_path):
    path = tmp_path / "img.pgm"
    write_pgm(path, np.array([[-5.0, 0.4, 254.6, 300.0]]))
    assert read_pgm(path).tolist() == [[0, 0, 255, 255]]


def test_pgm_reader_skips_comments(tmp_path):
    path = tmp_path / "img.pgm"
    payload = bytes(range(6))
    path.write_bytes(b"P5\n# a comment\n3 # trailing\n2\n255\n" + payload)
    img = read_pgm(path)
    assert img.shape == (2, 3)
    assert img.tobytes() == payload


@pytest.mark.parametrize(
    "content,message",
    [
        (b"P2\n2 2\n255\n0 1 2 3\n", "P5"),
        (b"P5\n2 2\n65535\n" + b"\x00" * 8, "maxval"),
        (b"P5\n2 2\n255\n\x00\x00", "truncated"),
        (b"P5\n2 2\n", "truncated"),
    ],
)
def test_pgm_reader_rejects_bad_input(tmp_path, content, message):
    path = tmp_path / "bad.pgm"
    path.write_bytes(content)
    with pytest.raises(ValueError, match=message):
        read_pgm(path)


def test_pgm_write_rejects_non_2d(tmp_path):
    with pytest.raises(ValueError):
        write_pgm(tmp_path / "x.pgm", np.zeros((2, 2, 2)))
