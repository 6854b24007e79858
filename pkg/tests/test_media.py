"""PGM I/O, sequence handling, and synthetic video generation."""

import os

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra import numpy as hnp

from vidmark import (
    DimensionError,
    FormatError,
    VideoSequence,
    gen_synthetic,
    load_pgm,
    load_pgm_image,
    load_sequence,
    save_pgm,
    save_pgm_image,
    save_sequence,
)


def test_load_minimal_header():
    data = b"P5 8 8 255 " + bytes(64)
    frame = load_pgm(data)
    assert frame.shape == (8, 8)
    assert frame.dtype == np.uint8
    assert not frame.any()


def test_load_newline_header():
    data = b"P5\n8 8\n255\n" + bytes(range(64))
    frame = load_pgm(data)
    assert frame[0, 0] == 0
    assert frame[7, 7] == 63


def test_load_comment_lines_skipped():
    data = b"P5\n# made by hand\n8 # width\n8\n# one more\n255\n" + bytes(64)
    frame = load_pgm(data)
    assert frame.shape == (8, 8)


def test_save_then_load_identity():
    frame = np.arange(128, dtype=np.uint8).reshape(8, 16)
    data = save_pgm(frame)
    assert data.startswith(b"P5\n16 8\n255\n")
    assert np.array_equal(load_pgm(data), frame)


def test_save_canonical_bytes():
    data = save_pgm(np.zeros((8, 8), dtype=np.uint8))
    assert data == b"P5\n8 8\n255\n" + bytes(64)


def test_truncated_payload_rejected():
    data = b"P5\n8 8\n255\n" + bytes(63)
    with pytest.raises(FormatError):
        load_pgm(data)


def test_wrong_magic_rejected():
    with pytest.raises(FormatError):
        load_pgm(b"P4\n8 8\n255\n" + bytes(64))


def test_wrong_maxval_rejected():
    with pytest.raises(FormatError):
        load_pgm(b"P5\n8 8\n100\n" + bytes(64))


def test_frame_dims_must_be_multiples_of_eight():
    with pytest.raises(DimensionError):
        load_pgm(b"P5\n12 8\n255\n" + bytes(96))


def test_image_loader_takes_any_dims():
    img = load_pgm_image(b"P5\n3 2\n255\n" + bytes([1, 2, 3, 4, 5, 6]))
    assert img.shape == (2, 3)
    assert img[1, 2] == 6


def test_image_save_round_trip_odd_dims():
    img = np.arange(31 * 64, dtype=np.uint8).reshape(31, 64)
    assert np.array_equal(load_pgm_image(save_pgm_image(img)), img)


def test_trailing_bytes_tolerated():
    # some writers append a final newline after the payload
    frame = load_pgm(b"P5\n8 8\n255\n" + bytes(64) + b"\n")
    assert frame.shape == (8, 8)


side = st.sampled_from([8, 16, 24])


@settings(deadline=None, max_examples=40)
@given(hnp.arrays(np.uint8, st.tuples(side, side)))
def test_pgm_round_trip_property(frame):
    assert np.array_equal(load_pgm(save_pgm(frame)), frame)


def test_sequence_round_trip(tmp_path, rng):
    frames = [rng.integers(0, 256, size=(16, 24), dtype=np.uint8) for _ in range(3)]
    video = VideoSequence(frames, frame_rate=30.0)
    paths = save_sequence(video, tmp_path)
    names = [os.path.basename(p) for p in paths]
    assert names == ["frame_0000.pgm", "frame_0001.pgm", "frame_0002.pgm"]
    back = load_sequence(paths, frame_rate=30.0)
    assert len(back) == 3
    assert back.frame_rate == 30.0
    for a, b in zip(video, back):
        assert np.array_equal(a, b)


def test_sequence_rejects_mixed_dims():
    frames = [np.zeros((8, 8), dtype=np.uint8), np.zeros((16, 8), dtype=np.uint8)]
    with pytest.raises(DimensionError):
        VideoSequence(frames)


def test_sequence_rejects_empty():
    with pytest.raises(ValueError):
        VideoSequence([])


def test_sequence_rejects_bad_dtype():
    with pytest.raises(ValueError):
        VideoSequence([np.zeros((8, 8), dtype=np.float64)])


def test_gen_shape_and_determinism():
    a = gen_synthetic(64, 48, 3, motion=(4, -8), texture_seed=7)
    b = gen_synthetic(64, 48, 3, motion=(4, -8), texture_seed=7)
    assert a.width == 64 and a.height == 48 and len(a) == 3
    for x, y in zip(a, b):
        assert np.array_equal(x, y)
    c = gen_synthetic(64, 48, 3, motion=(4, -8), texture_seed=8)
    assert not np.array_equal(a[0], c[0])


def test_gen_zero_motion_is_static():
    video = gen_synthetic(32, 32, 4, motion=(0, 0))
    for frame in video:
        assert np.array_equal(frame, video[0])


def test_gen_shift_moves_content():
    video = gen_synthetic(32, 32, 2, motion=(4, 0))
    # content at column x+4 of frame 0 appears at column x of frame 1
    assert np.array_equal(video[1], np.roll(video[0], -4, axis=1))


def test_gen_wrap_relation():
    dx, dy = 8, -12
    video = gen_synthetic(64, 64, 3, motion=(dx, dy), texture_seed=3)
    h, w = 64, 64
    ys, xs = np.mgrid[0:h, 0:w]
    for t in range(2):
        assert np.array_equal(video[t + 1], video[t][(ys + dy) % h, (xs + dx) % w])


def test_gen_distinct_block_means():
    video = gen_synthetic(64, 64, 1)
    frame = video[0]
    means = frame.reshape(16, 4, 16, 4).mean(axis=(1, 3))
    assert len(np.unique(means)) == 256


def test_gen_large_frame_still_works():
    video = gen_synthetic(256, 256, 2, motion=(4, 4))
    assert video.width == 256
    assert np.array_equal(video[1], np.roll(video[0], shift=(-4, -4), axis=(0, 1)))


def test_gen_rejects_out_of_range_motion():
    with pytest.raises(ValueError):
        gen_synthetic(32, 32, 2, motion=(17, 0))
    with pytest.raises(ValueError):
        gen_synthetic(32, 32, 2, motion=(0, -17))


def test_gen_rejects_bad_dims():
    with pytest.raises(DimensionError):
        gen_synthetic(30, 32, 2)
