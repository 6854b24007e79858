"""Shared test helpers, kept independent of the library's own search code."""

import numpy as np
import pytest


def oracle_search_block(cur_mean, ref_means, center, radius=4, block=4):
    """Brute-force reference for the windowed mean search.

    Enumerates the full window in raster order as pure Python and picks the
    lexicographic minimum of (absolute difference, Chebyshev distance,
    raster position). Deliberately shares no code with the library.
    """
    rows = len(ref_means)
    cols = len(ref_means[0])
    r, c = center
    candidates = []
    raster = 0
    for dr in range(-radius, radius + 1):
        for dc in range(-radius, radius + 1):
            rq, cq = r + dr, c + dc
            if 0 <= rq < rows and 0 <= cq < cols:
                diff = abs(float(cur_mean) - float(ref_means[rq][cq]))
                cheb = max(abs(dr), abs(dc))
                candidates.append((diff, cheb, raster, dc * block, dr * block))
            raster += 1
    best = min(candidates)
    return best[3], best[4]


def random_shift_video(rng, width, height, frame_count):
    """Random texture followed by random block-aligned global shifts.

    frame[t+1][y, x] == frame[t][(y + dy) % h, (x + dx) % w] for that
    frame's shift (dx, dy), each a multiple of 4 within +-16.
    """
    frames = [rng.integers(0, 256, size=(height, width), dtype=np.uint8)]
    for _ in range(frame_count - 1):
        dx, dy = (int(v) * 4 for v in rng.integers(-4, 5, size=2))
        frames.append(np.roll(frames[-1], shift=(-dy, -dx), axis=(0, 1)))
    return frames


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
