"""Fragile spatial watermark: embedding, extraction, capacity."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra import numpy as hnp

from vidmark import CapacityError, DimensionError, binarize, capacity, embed, extract
from vidmark.watermark import DEFAULT_LAYOUT, EmbedLayout


def test_binarize_threshold_boundary():
    img = np.array([[0, 127, 128, 255]], dtype=np.uint8)
    assert binarize(img).tolist() == [[0, 0, 255, 255]]


def test_binarize_custom_threshold():
    img = np.array([[9, 10, 11]], dtype=np.uint8)
    assert binarize(img, threshold=10).tolist() == [[0, 255, 255]]


def test_binarize_is_idempotent(rng):
    img = rng.integers(0, 256, size=(16, 16), dtype=np.uint8)
    once = binarize(img)
    assert np.array_equal(binarize(once), once)


def test_capacity_values():
    assert capacity(256, 256) == 1024
    assert capacity(8, 8) == 1
    assert capacity(64, 32) == 32


def test_capacity_rejects_bad_dims():
    with pytest.raises(DimensionError):
        capacity(12, 8)


def test_embed_single_pair_placement():
    cover = np.full((8, 8), 100, dtype=np.uint8)
    wm = np.array([[255, 0]], dtype=np.uint8)
    stego = embed(cover, wm)
    assert stego[0, 0] == 20
    assert stego[0, 1] == 10
    changed = stego != cover
    assert changed.sum() == 2


def test_embed_two_blocks_raster_order():
    cover = np.full((16, 16), 100, dtype=np.uint8)
    wm = np.array([[255, 255], [0, 0]], dtype=np.uint8)
    stego = embed(cover, wm)
    # pair 0 lands in the first 8x8 block, pair 1 in the block to its right
    assert stego[0, 0] == 20 and stego[0, 1] == 20
    assert stego[0, 8] == 10 and stego[0, 9] == 10
    assert (stego != cover).sum() == 4


def test_embed_does_not_mutate_cover():
    cover = np.full((8, 8), 100, dtype=np.uint8)
    keep = cover.copy()
    embed(cover, np.array([[255, 0]], dtype=np.uint8))
    assert np.array_equal(cover, keep)


def test_embed_rejects_oversized_watermark():
    cover = np.zeros((8, 8), dtype=np.uint8)
    wm = np.zeros((1, 4), dtype=np.uint8)
    with pytest.raises(CapacityError):
        embed(cover, wm)


def test_embed_rejects_non_binary_watermark():
    cover = np.zeros((8, 8), dtype=np.uint8)
    with pytest.raises(ValueError):
        embed(cover, np.array([[1, 0]], dtype=np.uint8))


def test_extract_threshold_rule():
    frame = np.full((8, 16), 200, dtype=np.uint8)
    frame[0, 0], frame[0, 1] = 17, 12
    frame[0, 8], frame[0, 9] = 15, 14
    wm = extract(frame, wm_width=2, wm_height=2)
    # value >= 15 reads as white, below as black
    assert wm.tolist() == [[255, 0], [255, 0]]


def test_odd_length_watermark_pads_with_black():
    cover = np.full((8, 16), 100, dtype=np.uint8)
    wm = np.array([[255, 0, 255]], dtype=np.uint8)
    stego = embed(cover, wm)
    assert stego[0, 8] == 20
    assert stego[0, 9] == 10  # pad bit
    assert np.array_equal(extract(stego, 3, 1), wm)


def test_changes_limited_to_carrier_pixels(rng):
    cover = rng.integers(0, 256, size=(64, 64), dtype=np.uint8)
    wm = binarize(rng.integers(0, 256, size=(8, 16), dtype=np.uint8))
    stego = embed(cover, wm)
    diff_rows, diff_cols = np.nonzero(stego != cover)
    # every touched pixel sits on a pair anchor or its right neighbour
    assert np.all(diff_rows % 8 == 0)
    assert np.all((diff_cols % 8 == 0) | (diff_cols % 8 == 1))
    assert np.array_equal(extract(stego, 16, 8), wm)


def test_reembedding_is_stable(rng):
    cover = rng.integers(0, 256, size=(32, 32), dtype=np.uint8)
    wm = binarize(rng.integers(0, 256, size=(4, 8), dtype=np.uint8))
    stego = embed(cover, wm)
    assert np.array_equal(embed(stego, wm), stego)


def test_custom_layout():
    layout = EmbedLayout(mapped_high=200, mapped_low=50, decision_threshold=100)
    cover = np.full((8, 8), 0, dtype=np.uint8)
    stego = embed(cover, np.array([[255, 0]], dtype=np.uint8), layout=layout)
    assert stego[0, 0] == 200 and stego[0, 1] == 50
    assert extract(stego, 2, 1, layout=layout).tolist() == [[255, 0]]
    assert DEFAULT_LAYOUT.cover_block == 8


wm_side = st.integers(min_value=1, max_value=16)


@settings(deadline=None, max_examples=40)
@given(
    hnp.arrays(np.uint8, st.tuples(wm_side, wm_side)),
    st.integers(min_value=0, max_value=2**31 - 1),
)
def test_round_trip_property(raw_wm, seed):
    wm = binarize(raw_wm)
    needed = (wm.size + 1) // 2
    blocks = max(1, int(np.ceil(np.sqrt(needed))))
    side = 8 * blocks
    while capacity(side, side) < needed:
        side += 8
    cover = np.random.default_rng(seed).integers(0, 256, size=(side, side), dtype=np.uint8)
    stego = embed(cover, wm)
    assert np.array_equal(extract(stego, wm.shape[1], wm.shape[0]), wm)
