"""Command line front end.

Subcommands: embed, extract, encode, decode, transcode, metrics, gen.
Exit codes: 0 success, 1 usage error, 2 I/O error, 3 format/validation
error, 4 capacity/dimension error. All file outputs are written atomically
(temp file + rename) so a failed run never leaves a truncated file.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import codec, media, metrics, watermark
from .errors import CapacityError, DimensionError, FormatError


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; reroute to our exit code 1.
    def error(self, message):
        raise UsageError(message)


def _parse_size(text: str):
    try:
        w, h = text.lower().split("x")
        w, h = int(w), int(h)
    except ValueError:
        raise UsageError(f"expected WxH, got {text!r}") from None
    if w <= 0 or h <= 0:
        raise UsageError(f"size must be positive, got {text!r}")
    return w, h


def _parse_motion(text: str):
    try:
        dx, dy = (int(p) for p in text.split(","))
    except ValueError:
        raise UsageError(f"expected DX,DY, got {text!r}") from None
    if max(abs(dx), abs(dy)) > 16:
        raise UsageError(f"per-frame motion is limited to +-16, got {text!r}")
    return dx, dy


def _read(path) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()


def _load_frame(path):
    return media.load_pgm(_read(path))


def _pgm_paths(directory):
    entries = sorted(
        os.path.join(directory, name)
        for name in os.listdir(directory)
        if name.endswith(".pgm")
    )
    if not entries:
        raise FileNotFoundError(f"no .pgm files in {directory}")
    return entries


def _load_dir(directory) -> media.VideoSequence:
    return media.load_sequence(_pgm_paths(directory))


def _load_wm(path, threshold: int = 128):
    return watermark.binarize(media.load_pgm_image(_read(path)), threshold)


def _cmd_embed(args) -> int:
    wm = _load_wm(args.watermark, args.threshold)
    if os.path.isdir(args.cover):
        video = _load_dir(args.cover)
        stego = media.VideoSequence(
            [watermark.embed(f, wm) for f in video], video.frame_rate
        )
        paths = media.save_sequence(stego, args.output)
        print(f"embedded {wm.shape[1]}x{wm.shape[0]} watermark into "
              f"{len(paths)} frames -> {args.output}")
    else:
        out = watermark.embed(_load_frame(args.cover), wm)
        media.write_bytes(args.output, media.save_pgm(out))
        print(f"embedded {wm.shape[1]}x{wm.shape[0]} watermark -> {args.output}")
    return 0


def _cmd_extract(args) -> int:
    if args.stego.endswith(".s2f"):
        stream = codec.parse(_read(args.stego))
        frame = stream.records[0].pixels  # record 0 is always an I frame
        size = args.wm_size or (stream.header.wm_width, stream.header.wm_height)
        if size[0] == 0 or size[1] == 0:
            raise UsageError(
                "stream header carries no watermark size; pass --wm-size WxH"
            )
    else:
        if args.wm_size is None:
            raise UsageError("--wm-size WxH is required for PGM input")
        frame = _load_frame(args.stego)
        size = args.wm_size
    wm = watermark.extract(frame, size[0], size[1])
    media.write_bytes(args.output, media.save_pgm_image(wm))
    print(f"extracted {size[0]}x{size[1]} watermark -> {args.output}")
    return 0


def _cmd_encode(args) -> int:
    video = _load_dir(args.input)
    stream = codec.encode(video, gop_length=args.gop, wm_size=args.wm_size)
    blob = codec.serialize(stream)
    media.write_bytes(args.output, blob)
    n_i = sum(1 for r in stream.records if r.frame_type == codec.FRAME_I)
    print(f"encoded {len(video)} frames ({n_i} I + {len(video) - n_i} P), "
          f"gop {args.gop} -> {args.output} ({len(blob)} bytes)")
    return 0


def _cmd_decode(args) -> int:
    stream = codec.parse(_read(args.input))
    video = codec.decode(stream)
    media.save_sequence(video, args.output)
    h = stream.header
    note = ""
    if h.wm_width and h.wm_height:
        note = f" (watermark {h.wm_width}x{h.wm_height} in header)"
    print(f"decoded {len(video)} frames {h.width}x{h.height} -> {args.output}{note}")
    return 0


def _cmd_transcode(args) -> int:
    video = _load_dir(args.input)
    wm = _load_wm(args.watermark, args.threshold)
    stego = media.VideoSequence(
        [watermark.embed(f, wm) for f in video], video.frame_rate
    )
    stream = codec.encode(
        stego, gop_length=args.gop, wm_size=(wm.shape[1], wm.shape[0])
    )
    blob = codec.serialize(stream)
    media.write_bytes(args.output, blob)
    print(f"watermarked and encoded {len(video)} frames, gop {args.gop} "
          f"-> {args.output} ({len(blob)} bytes)")
    return 0


def _cmd_metrics(args) -> int:
    original = _load_dir(args.original)
    decoded = _load_dir(args.decoded)
    wm = None
    wm_size = args.wm_size
    if args.wm is not None:
        wm = _load_wm(args.wm)
    report = metrics.sequence_report(original, decoded, wm=wm, wm_size=wm_size)
    media.write_bytes(args.output, metrics.report_to_csv(report).encode())
    print(f"wrote {len(report.video)} frame rows -> {args.output}")
    return 0


def _cmd_gen(args) -> int:
    w, h = args.size
    video = media.gen_synthetic(
        w, h, args.frames, motion=args.motion, texture_seed=args.seed
    )
    media.save_sequence(video, args.output)
    print(f"generated {args.frames} frames {w}x{h}, motion "
          f"({args.motion[0]},{args.motion[1]}), seed {args.seed} -> {args.output}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="vidmark",
        description="Grayscale video watermarking and motion-compensated compression.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("embed", help="watermark one frame or a sequence directory")
    p.add_argument("cover", help="cover PGM file or directory of PGM frames")
    p.add_argument("watermark", help="watermark PGM (binarized on load)")
    p.add_argument("output", help="output PGM file or directory")
    p.add_argument("--threshold", type=int, default=128,
                   help="binarization threshold for the watermark image")
    p.set_defaults(run=_cmd_embed)

    p = sub.add_parser("extract", help="recover a watermark from a frame or stream")
    p.add_argument("stego", help="watermarked PGM, or an .s2f stream (frame 0 used)")
    p.add_argument("output", help="output watermark PGM")
    p.add_argument("--wm-size", type=_parse_size, metavar="WxH",
                   help="watermark size; defaults to the .s2f header entry")
    p.set_defaults(run=_cmd_extract)

    p = sub.add_parser("encode", help="compress a PGM directory into an .s2f stream")
    p.add_argument("input", help="directory of PGM frames")
    p.add_argument("output", help="output .s2f path")
    p.add_argument("--gop", type=int, default=6, help="I-frame period (default 6)")
    p.add_argument("--wm-size", type=_parse_size, metavar="WxH",
                   help="record an embedded watermark's size in the header")
    p.set_defaults(run=_cmd_encode)

    p = sub.add_parser("decode", help="decompress an .s2f stream to PGM frames")
    p.add_argument("input", help=".s2f path")
    p.add_argument("output", help="output directory")
    p.set_defaults(run=_cmd_decode)

    p = sub.add_parser("transcode", help="embed a watermark into every frame, then encode")
    p.add_argument("input", help="directory of PGM frames")
    p.add_argument("watermark", help="watermark PGM (binarized on load)")
    p.add_argument("output", help="output .s2f path")
    p.add_argument("--gop", type=int, default=6, help="I-frame period (default 6)")
    p.add_argument("--threshold", type=int, default=128,
                   help="binarization threshold for the watermark image")
    p.set_defaults(run=_cmd_transcode)

    p = sub.add_parser("metrics", help="per-frame quality report as CSV")
    p.add_argument("original", help="directory of reference PGM frames")
    p.add_argument("decoded", help="directory of decoded PGM frames")
    p.add_argument("output", help="output CSV path")
    p.add_argument("--wm", help="original watermark PGM for per-frame extraction scores")
    p.add_argument("--wm-size", type=_parse_size, metavar="WxH",
                   help="watermark size override (defaults to the image's own)")
    p.set_defaults(run=_cmd_metrics)

    p = sub.add_parser("gen", help="generate a synthetic translating sequence")
    p.add_argument("output", help="output directory")
    p.add_argument("--size", type=_parse_size, default=(256, 256), metavar="WxH",
                   help="frame size (default 256x256)")
    p.add_argument("--frames", type=int, default=20, help="frame count (default 20)")
    p.add_argument("--motion", type=_parse_motion, default=(0, 0), metavar="DX,DY",
                   help="per-frame displacement (default 0,0)")
    p.add_argument("--seed", type=int, default=0, help="texture seed (default 0)")
    p.set_defaults(run=_cmd_gen)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.run(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    except FormatError as exc:
        print(f"format error: {exc}", file=sys.stderr)
        return 3
    except (CapacityError, DimensionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
