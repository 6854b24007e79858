"""Frame/video data model, binary PGM I/O and synthetic test sequences.

A frame is a 2-D uint8 numpy array, shape ``(height, width)``, row-major.
Both dimensions must be positive multiples of 8 so the 8x8 watermark grid
and the 4x4 motion grid tile the frame exactly; that constraint is enforced
once at ingestion (file load, synthesis, sequence construction) and assumed
everywhere downstream.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, FormatError

# Frame and sequence naming used by save_sequence / the CLI.
FRAME_PATTERN = "frame_{:04d}.pgm"

_PGM_WHITESPACE = frozenset(b" \t\n\r\x0b\x0c")

# 4x4 block means of a uint8 image take at most this many distinct values
# (sums 0..16*255), which bounds where gen_synthetic can honour distinctness.
_DISTINCT_MEAN_VALUES = 16 * 255 + 1
_TEXTURE_RETRIES = 16


def validate_frame(frame) -> np.ndarray:
    """Check that ``frame`` is a legal frame array and return it.

    Raises DimensionError when the shape is wrong and ValueError when the
    dtype is not uint8.
    """
    arr = np.asarray(frame)
    if arr.dtype != np.uint8:
        raise ValueError(f"frame dtype must be uint8, got {arr.dtype}")
    if arr.ndim != 2:
        raise DimensionError(f"frame must be 2-D, got shape {arr.shape}")
    h, w = arr.shape
    if h <= 0 or w <= 0 or h % 8 or w % 8:
        raise DimensionError(
            f"frame dimensions must be positive multiples of 8, got {w}x{h}"
        )
    return arr


@dataclass
class VideoSequence:
    """An ordered list of equal-sized frames plus an informational rate.

    ``frame_rate`` is carried for reporting only; nothing in the codec or
    the container depends on it.
    """

    frames: list = field(default_factory=list)
    frame_rate: float = 25.0

    def __post_init__(self):
        if not self.frames:
            raise ValueError("a video needs at least one frame")
        self.frames = [validate_frame(f) for f in self.frames]
        first = self.frames[0].shape
        for i, f in enumerate(self.frames):
            if f.shape != first:
                raise DimensionError(
                    f"frame {i} is {f.shape[1]}x{f.shape[0]}, "
                    f"expected {first[1]}x{first[0]}"
                )
        if self.frame_rate <= 0:
            raise ValueError("frame_rate must be positive")

    @property
    def width(self) -> int:
        return self.frames[0].shape[1]

    @property
    def height(self) -> int:
        return self.frames[0].shape[0]

    def __len__(self):
        return len(self.frames)

    def __iter__(self):
        return iter(self.frames)

    def __getitem__(self, k):
        return self.frames[k]


def _next_token(data: bytes, pos: int):
    """Return (token, new_pos), skipping PGM whitespace and # comments."""
    n = len(data)
    while pos < n:
        c = data[pos]
        if c in _PGM_WHITESPACE:
            pos += 1
        elif c == 0x23:  # '#': comment runs to end of line
            while pos < n and data[pos] not in (0x0A, 0x0D):
                pos += 1
        else:
            break
    start = pos
    while pos < n and data[pos] not in _PGM_WHITESPACE and data[pos] != 0x23:
        pos += 1
    if start == pos:
        raise FormatError("truncated PGM header")
    return data[start:pos], pos


def load_pgm_image(data: bytes) -> np.ndarray:
    """Parse a binary (P5) PGM of any dimensions into a uint8 array.

    Header comments and arbitrary whitespace are accepted per the netpbm
    convention; exactly one whitespace byte separates the maxval from the
    raster. Exactly width*height raster bytes are consumed, so trailing
    bytes (e.g. a concatenated stream) are ignored. Used directly for
    watermark bitmaps, whose dimensions are unconstrained; video frames go
    through load_pgm, which adds the multiple-of-8 rule.
    """
    data = bytes(data)
    magic, pos = _next_token(data, 0)
    if magic != b"P5":
        raise FormatError(f"bad PGM magic {magic!r}, expected b'P5'")
    fields = []
    for name in ("width", "height", "maxval"):
        tok, pos = _next_token(data, pos)
        try:
            fields.append(int(tok))
        except ValueError:
            raise FormatError(f"non-numeric PGM {name}: {tok!r}") from None
    width, height, maxval = fields
    if maxval != 255:
        raise FormatError(f"unsupported PGM maxval {maxval}, expected 255")
    if width <= 0 or height <= 0:
        raise DimensionError(f"PGM dimensions must be positive, got {width}x{height}")
    if pos >= len(data) or data[pos] not in _PGM_WHITESPACE:
        raise FormatError("missing whitespace between PGM maxval and raster")
    pos += 1
    end = pos + width * height
    if end > len(data):
        raise FormatError(
            f"truncated PGM payload: need {width * height} bytes, have {len(data) - pos}"
        )
    pixels = np.frombuffer(data, dtype=np.uint8, count=width * height, offset=pos)
    return pixels.reshape(height, width).copy()


def save_pgm_image(image) -> bytes:
    """Serialize any 2-D uint8 array to canonical binary PGM bytes.

    The header is always ``P5\\n{width} {height}\\n255\\n`` so identical
    inputs produce identical files.
    """
    arr = np.asarray(image)
    if arr.dtype != np.uint8:
        raise ValueError(f"image dtype must be uint8, got {arr.dtype}")
    if arr.ndim != 2 or arr.size == 0:
        raise DimensionError(f"image must be non-empty 2-D, got shape {arr.shape}")
    h, w = arr.shape
    return b"P5\n%d %d\n255\n" % (w, h) + arr.tobytes()


def load_pgm(data: bytes) -> np.ndarray:
    """Parse a binary (P5) PGM into a video frame.

    On top of load_pgm_image this enforces the frame contract: dimensions
    must be positive multiples of 8.
    """
    arr = load_pgm_image(data)
    h, w = arr.shape
    if w % 8 or h % 8:
        raise DimensionError(
            f"PGM dimensions must be positive multiples of 8, got {w}x{h}"
        )
    return arr


def save_pgm(frame) -> bytes:
    """Serialize a frame to canonical binary PGM bytes."""
    return save_pgm_image(validate_frame(frame))


def write_bytes(path, data: bytes) -> None:
    """Write ``data`` to ``path`` atomically (write temp, then rename).

    A failure mid-write never leaves a truncated file at ``path``.
    """
    path = os.fspath(path)
    tmp = path + ".tmp"
    with open(tmp, "wb") as fh:
        fh.write(data)
    os.replace(tmp, path)


def load_sequence(paths, frame_rate: float = 25.0) -> VideoSequence:
    """Load PGM files (in the given order) into a VideoSequence."""
    paths = list(paths)
    if not paths:
        raise ValueError("no frame paths given")
    frames = []
    for p in paths:
        with open(p, "rb") as fh:
            frames.append(load_pgm(fh.read()))
    return VideoSequence(frames, frame_rate)


def save_sequence(video: VideoSequence, directory) -> list:
    """Write ``video`` as frame_0000.pgm, frame_0001.pgm, ... under ``directory``.

    Returns the written paths. Each file is written atomically.
    """
    directory = os.fspath(directory)
    os.makedirs(directory, exist_ok=True)
    written = []
    for k, frame in enumerate(video.frames):
        path = os.path.join(directory, FRAME_PATTERN.format(k))
        write_bytes(path, save_pgm(frame))
        written.append(path)
    return written


def _textured_frame(width: int, height: int, seed: int) -> np.ndarray:
    """Deterministic pseudo-random texture whose 4x4-block means are
    pairwise distinct whenever that is achievable.

    Block means of uint8 pixels take at most 4081 distinct values, so for
    frames with more 4x4 blocks than that (256x256 and up) distinctness is
    impossible and a plain seeded random texture is returned instead.
    """
    rows, cols = height // 4, width // 4
    blocks = rows * cols
    if blocks > _DISTINCT_MEAN_VALUES:
        rng = np.random.default_rng(seed)
        return rng.integers(0, 256, size=(height, width), dtype=np.uint8)

    for attempt in range(_TEXTURE_RETRIES):
        rng = np.random.default_rng(seed + attempt)
        # Distinct per-block pixel sums force distinct means. Fill each block
        # with floor(sum/16) everywhere plus +1 on (sum mod 16) random cells.
        sums = rng.choice(_DISTINCT_MEAN_VALUES, size=blocks, replace=False)
        base = sums // 16
        rem = sums % 16
        cells = np.repeat(base[:, None], 16, axis=1)
        order = rng.permuted(np.tile(np.arange(16), (blocks, 1)), axis=1)
        cells = (cells + (order < rem[:, None])).astype(np.uint8)
        frame = (
            cells.reshape(rows, cols, 4, 4)
            .transpose(0, 2, 1, 3)
            .reshape(height, width)
        )
        means = frame.reshape(rows, 4, cols, 4).mean(axis=(1, 3))
        if np.unique(means).size == blocks:
            return frame
    raise RuntimeError(
        f"could not realise distinct block means for {width}x{height} "
        f"after {_TEXTURE_RETRIES} attempts"
    )


def gen_synthetic(
    width: int,
    height: int,
    frame_count: int,
    motion=(0, 0),
    texture_seed: int = 0,
    frame_rate: float = 25.0,
) -> VideoSequence:
    """Generate a translating test sequence with known per-frame motion.

    Frame 0 is a seeded texture (see _textured_frame); every later frame is
    the previous one cyclically displaced so that

        frame[t+1][y, x] == frame[t][(y + dy) % height, (x + dx) % width]

    i.e. block matching of frame t+1 against frame t recovers exactly
    ``(dx, dy)`` wherever the true source block lies inside the frame.
    """
    if width <= 0 or height <= 0 or width % 8 or height % 8:
        raise DimensionError(
            f"dimensions must be positive multiples of 8, got {width}x{height}"
        )
    if frame_count < 1:
        raise ValueError("frame_count must be at least 1")
    dx, dy = int(motion[0]), int(motion[1])
    if max(abs(dx), abs(dy)) > 16:
        raise ValueError(f"per-frame displacement out of range: ({dx}, {dy})")

    frames = [_textured_frame(width, height, texture_seed)]
    for _ in range(frame_count - 1):
        frames.append(np.roll(frames[-1], shift=(-dy, -dx), axis=(0, 1)))
    return VideoSequence(frames, frame_rate)
