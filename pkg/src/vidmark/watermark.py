"""Fragile spatial watermarking of grayscale frames.

The cover is tiled into 8x8 blocks. The binary watermark is flattened
row-major and split into 1x2 pairs (an odd pixel count is padded with one
trailing 0); pair k lands in block k (raster block order) at the block's
top-left pixel and the pixel to its right, remapped 255 -> 20 and 0 -> 10.
A used block therefore has exactly 2 of its 64 pixels rewritten: 3.125%.
Extraction reads the same two pixels back and classifies v >= 15 as 255.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, DimensionError
from .media import validate_frame


@dataclass(frozen=True)
class EmbedLayout:
    """Geometry and levels of the embedding; the defaults are the contract."""

    cover_block: int = 8     # cover tiling, pixels; pairs are 1 row x 2 cols
    mapped_high: int = 20    # carrier value for watermark 255
    mapped_low: int = 10     # carrier value for watermark 0
    decision_threshold: int = 15  # extraction: v >= threshold reads as 255


DEFAULT_LAYOUT = EmbedLayout()


def binarize(image, threshold: int = 128) -> np.ndarray:
    """Map a grayscale image to a strict {0, 255} watermark.

    Pixels >= threshold become 255, the rest 0. Already-binary images pass
    through unchanged (with the default threshold).
    """
    arr = np.asarray(image)
    if arr.ndim != 2:
        raise DimensionError(f"watermark must be 2-D, got shape {arr.shape}")
    return np.where(arr >= threshold, 255, 0).astype(np.uint8)


def _check_binary(wm) -> np.ndarray:
    arr = np.asarray(wm)
    if arr.ndim != 2:
        raise DimensionError(f"watermark must be 2-D, got shape {arr.shape}")
    if arr.size == 0:
        raise DimensionError("watermark must contain at least one pixel")
    if not np.isin(arr, (0, 255)).all():
        raise ValueError("watermark pixels must be 0 or 255; run binarize() first")
    return arr.astype(np.uint8)


def capacity(frame_width: int, frame_height: int, layout: EmbedLayout = DEFAULT_LAYOUT) -> int:
    """Number of watermark pairs a frame of the given size can carry."""
    b = layout.cover_block
    if frame_width <= 0 or frame_height <= 0 or frame_width % b or frame_height % b:
        raise DimensionError(
            f"cover dimensions must be positive multiples of {b}, "
            f"got {frame_width}x{frame_height}"
        )
    return (frame_width // b) * (frame_height // b)


def _carrier_indices(width: int, n_pairs: int, layout: EmbedLayout):
    """Pixel coordinates of the two carriers of blocks 0..n_pairs-1."""
    b = layout.cover_block
    blocks_per_row = width // b
    k = np.arange(n_pairs)
    rows = (k // blocks_per_row) * b
    cols = (k % blocks_per_row) * b
    return rows, cols


def embed(cover, wm, layout: EmbedLayout = DEFAULT_LAYOUT) -> np.ndarray:
    """Return a copy of ``cover`` with ``wm`` written into its carrier pixels.

    Raises CapacityError when ceil(wm.size / 2) exceeds capacity().
    """
    cover = validate_frame(cover)
    wm = _check_binary(wm)
    h, w = cover.shape
    cap = capacity(w, h, layout)

    flat = wm.reshape(-1)
    if flat.size % 2:
        flat = np.concatenate([flat, np.zeros(1, dtype=np.uint8)])
    n_pairs = flat.size // 2
    if n_pairs > cap:
        raise CapacityError(
            f"watermark needs {n_pairs} pairs but a {w}x{h} cover holds {cap}"
        )

    mapped = np.where(flat == 255, layout.mapped_high, layout.mapped_low)
    mapped = mapped.astype(np.uint8)
    rows, cols = _carrier_indices(w, n_pairs, layout)
    out = cover.copy()
    out[rows, cols] = mapped[0::2]
    out[rows, cols + 1] = mapped[1::2]
    return out


def extract(stego, wm_width: int, wm_height: int, layout: EmbedLayout = DEFAULT_LAYOUT) -> np.ndarray:
    """Recover a wm_width x wm_height binary watermark from ``stego``.

    Reads the carriers of the first ceil(wm_width*wm_height / 2) blocks in
    raster order and thresholds each value. Extraction touches only carrier
    pixels, so it works on any frame the embedding geometry fits.
    """
    stego = validate_frame(stego)
    if wm_width <= 0 or wm_height <= 0:
        raise DimensionError(
            f"watermark dimensions must be positive, got {wm_width}x{wm_height}"
        )
    h, w = stego.shape
    cap = capacity(w, h, layout)
    n = wm_width * wm_height
    n_pairs = math.ceil(n / 2)
    if n_pairs > cap:
        raise CapacityError(
            f"watermark needs {n_pairs} pairs but a {w}x{h} frame holds {cap}"
        )

    rows, cols = _carrier_indices(w, n_pairs, layout)
    values = np.empty(2 * n_pairs, dtype=np.uint8)
    values[0::2] = stego[rows, cols]
    values[1::2] = stego[rows, cols + 1]
    bits = np.where(values >= layout.decision_threshold, 255, 0).astype(np.uint8)
    return bits[:n].reshape(wm_height, wm_width)
