"""GOP-structured encoder/decoder and the bit-exact .s2f container.

Every gop_length-th frame (frame 0, gop, 2*gop, ...) is an I frame stored
verbatim; every other frame is a P frame carrying only its motion field, no
residual, so P reconstruction is the motion-compensated prediction itself.
The encoder is closed-loop: P frames are estimated against the encoder's
own reconstruction of the previous frame, never the pristine input, so
encoder and decoder walk the same reference chain bit for bit.

Container layout (little-endian, no padding):

    header, 24 bytes:
        magic       4 bytes  = b"S2F1"
        version     u16      = 1
        width       u32      pixels, positive multiple of 8
        height      u32      pixels, positive multiple of 8
        frame_count u32      >= 1
        block_size  u8       = 4
        gop_length  u8       >= 1
        wm_width    u16      watermark metadata, 0 when absent
        wm_height   u16

    then frame_count records in display order, each:
        frame_type  u8       0 = I, 1 = P
        I payload:  width*height raw pixel bytes, row-major
        P payload:  one (dx: s8, dy: s8) pair per 4x4 block in raster
                    order; pixel units, multiples of 4, |v| <= 16

    Record k must be type I exactly when k % gop_length == 0.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, FormatError
from .media import VideoSequence
from .motion import SearchConfig, compensate, estimate_motion

MAGIC = b"S2F1"
VERSION = 1
FRAME_I = 0
FRAME_P = 1

_HEADER = struct.Struct("<4sHIIIBBHH")
HEADER_SIZE = _HEADER.size  # 24


@dataclass(frozen=True)
class S2fHeader:
    width: int
    height: int
    frame_count: int
    block_size: int = 4
    gop_length: int = 6
    wm_width: int = 0
    wm_height: int = 0
    version: int = VERSION


@dataclass(eq=False)
class FrameRecord:
    """One frame of payload: raw pixels for I, a motion field for P."""

    frame_type: int
    pixels: np.ndarray | None = None   # I: (h, w) uint8
    field: np.ndarray | None = None    # P: (rows, cols, 2) int16, (dx, dy)

    def __eq__(self, other):
        if not isinstance(other, FrameRecord):
            return NotImplemented
        if self.frame_type != other.frame_type:
            return False
        if (self.pixels is None) != (other.pixels is None):
            return False
        if self.pixels is not None:
            return bool(np.array_equal(self.pixels, other.pixels))
        if (self.field is None) != (other.field is None):
            return False
        if self.field is not None:
            return bool(np.array_equal(self.field, other.field))
        return True


@dataclass(eq=False)
class S2fStream:
    header: S2fHeader
    records: list

    def __eq__(self, other):
        if not isinstance(other, S2fStream):
            return NotImplemented
        return (
            self.header == other.header
            and len(self.records) == len(other.records)
            and all(a == b for a, b in zip(self.records, other.records))
        )


def encode(
    video: VideoSequence,
    gop_length: int = 6,
    wm_size=None,
    return_reconstruction: bool = False,
):
    """Encode a video into an S2fStream.

    ``wm_size`` is an optional (width, height) recorded in the header so a
    later extract needs no sidecar. With ``return_reconstruction=True`` the
    encoder's internal reconstruction sequence is returned alongside the
    stream; by the closed-loop contract it must equal decode(stream).
    """
    if not isinstance(video, VideoSequence):
        video = VideoSequence(list(video))
    if not 1 <= gop_length <= 255:
        raise ValueError(f"gop_length must be in 1..255, got {gop_length}")
    wm_w = wm_h = 0
    if wm_size is not None:
        wm_w, wm_h = int(wm_size[0]), int(wm_size[1])
        if not (0 < wm_w <= 0xFFFF and 0 < wm_h <= 0xFFFF):
            raise ValueError(f"watermark size out of range: {wm_w}x{wm_h}")

    cfg = SearchConfig()
    records = []
    recon_frames = []
    prev = None
    for k, frame in enumerate(video.frames):
        if k % gop_length == 0:
            records.append(FrameRecord(FRAME_I, pixels=frame.copy()))
            recon = frame.copy()
        else:
            field = estimate_motion(frame, prev, cfg)
            records.append(FrameRecord(FRAME_P, field=field))
            recon = compensate(prev, field, cfg.block_size)
        recon_frames.append(recon)
        prev = recon

    header = S2fHeader(
        width=video.width,
        height=video.height,
        frame_count=len(video),
        gop_length=gop_length,
        wm_width=wm_w,
        wm_height=wm_h,
    )
    stream = S2fStream(header, records)
    if return_reconstruction:
        return stream, VideoSequence(recon_frames, video.frame_rate)
    return stream


def decode(stream: S2fStream) -> VideoSequence:
    """Reconstruct the frame sequence of a stream."""
    h = stream.header
    if len(stream.records) != h.frame_count:
        raise FormatError(
            f"frame_count {h.frame_count} but {len(stream.records)} records"
        )
    frames = []
    prev = None
    for k, rec in enumerate(stream.records):
        if rec.frame_type == FRAME_I:
            frame = rec.pixels.copy()
        elif rec.frame_type == FRAME_P:
            if prev is None:
                raise FormatError("record 0 must be an I frame")
            frame = compensate(prev, rec.field, h.block_size)
        else:
            raise FormatError(f"record {k}: unknown frame type {rec.frame_type}")
        frames.append(frame)
        prev = frame
    return VideoSequence(frames)


def _check_field_serializable(field, rows, cols, k):
    fld = np.asarray(field)
    if fld.shape != (rows, cols, 2):
        raise DimensionError(
            f"record {k}: field shape {fld.shape}, expected ({rows}, {cols}, 2)"
        )
    if (np.abs(fld) > 16).any() or (fld % 4).any():
        raise FormatError(
            f"record {k}: vectors must be multiples of 4 within +-16"
        )
    return fld


def serialize(stream: S2fStream) -> bytes:
    """Canonical byte form of a stream; parse() inverts it exactly."""
    h = stream.header
    if len(stream.records) != h.frame_count:
        raise FormatError(
            f"frame_count {h.frame_count} but {len(stream.records)} records"
        )
    rows, cols = h.height // h.block_size, h.width // h.block_size
    parts = [
        _HEADER.pack(
            MAGIC,
            h.version,
            h.width,
            h.height,
            h.frame_count,
            h.block_size,
            h.gop_length,
            h.wm_width,
            h.wm_height,
        )
    ]
    for k, rec in enumerate(stream.records):
        parts.append(bytes([rec.frame_type]))
        if rec.frame_type == FRAME_I:
            px = np.asarray(rec.pixels)
            if px.shape != (h.height, h.width):
                raise DimensionError(
                    f"record {k}: I payload shape {px.shape}, "
                    f"expected ({h.height}, {h.width})"
                )
            parts.append(px.astype(np.uint8).tobytes())
        elif rec.frame_type == FRAME_P:
            fld = _check_field_serializable(rec.field, rows, cols, k)
            parts.append(fld.astype(np.int8).tobytes())
        else:
            raise FormatError(f"record {k}: unknown frame type {rec.frame_type}")
    return b"".join(parts)


def parse(data: bytes) -> S2fStream:
    """Parse .s2f bytes, validating structure as it goes."""
    data = bytes(data)
    if len(data) < HEADER_SIZE:
        raise FormatError(f"truncated header: {len(data)} bytes, need {HEADER_SIZE}")
    magic, version, width, height, frame_count, block_size, gop_length, wm_w, wm_h = (
        _HEADER.unpack_from(data, 0)
    )
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise FormatError(f"unsupported version {version}, expected {VERSION}")
    if width == 0 or width % 8:
        raise FormatError(f"width {width} is not a positive multiple of 8")
    if height == 0 or height % 8:
        raise FormatError(f"height {height} is not a positive multiple of 8")
    if frame_count == 0:
        raise FormatError("frame_count must be at least 1")
    if block_size != 4:
        raise FormatError(f"block_size {block_size} unsupported, expected 4")
    if gop_length < 1:
        raise FormatError("gop_length must be at least 1")

    rows, cols = height // block_size, width // block_size
    i_size = width * height
    p_size = 2 * rows * cols
    header = S2fHeader(
        width=width,
        height=height,
        frame_count=frame_count,
        block_size=block_size,
        gop_length=gop_length,
        wm_width=wm_w,
        wm_height=wm_h,
        version=version,
    )

    records = []
    pos = HEADER_SIZE
    for k in range(frame_count):
        if pos + 1 > len(data):
            raise FormatError(f"record {k}: truncated, missing frame type")
        ftype = data[pos]
        pos += 1
        expect_i = k % gop_length == 0
        if ftype == FRAME_I:
            if not expect_i:
                raise FormatError(f"record {k}: I frame outside the GOP grid")
            if pos + i_size > len(data):
                raise FormatError(
                    f"record {k}: truncated I payload ({len(data) - pos} of {i_size} bytes)"
                )
            pixels = (
                np.frombuffer(data, dtype=np.uint8, count=i_size, offset=pos)
                .reshape(height, width)
                .copy()
            )
            records.append(FrameRecord(FRAME_I, pixels=pixels))
            pos += i_size
        elif ftype == FRAME_P:
            if expect_i:
                raise FormatError(f"record {k}: P frame where the GOP grid needs I")
            if pos + p_size > len(data):
                raise FormatError(
                    f"record {k}: truncated P payload ({len(data) - pos} of {p_size} bytes)"
                )
            raw = np.frombuffer(data, dtype=np.int8, count=p_size, offset=pos)
            field = raw.reshape(rows, cols, 2).astype(np.int16)
            if (np.abs(field) > 16).any() or (field % 4).any():
                bad = np.argwhere((np.abs(field) > 16).any(axis=2) | (field % 4).any(axis=2))
                r, c = bad[0]
                raise FormatError(
                    f"record {k}, block ({r}, {c}): vector "
                    f"({field[r, c, 0]}, {field[r, c, 1]}) is not a multiple of 4 within +-16"
                )
            records.append(FrameRecord(FRAME_P, field=field))
            pos += p_size
        else:
            raise FormatError(f"record {k}: unknown frame type {ftype}")
    if pos != len(data):
        raise FormatError(f"{len(data) - pos} trailing bytes after record {frame_count - 1}")
    return S2fStream(header, records)
