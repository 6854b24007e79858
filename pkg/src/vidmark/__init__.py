"""Grayscale video watermarking and motion-compensated compression.

The toolkit embeds fragile binary watermarks into 8-bit video frames
(two carrier pixels per 8x8 block), compresses sequences with a GOP
codec whose P frames carry only mean-matrix block motion vectors, stores
the result in the bit-exact .s2f container, and scores reconstruction
quality with MSE/PSNR/correlation/SSIM reports.
"""

from .codec import (
    FRAME_I,
    FRAME_P,
    HEADER_SIZE,
    FrameRecord,
    S2fHeader,
    S2fStream,
    decode,
    encode,
    parse,
    serialize,
)
from .errors import (
    CapacityError,
    DimensionError,
    FormatError,
    UndefinedCorrelationError,
)
from .media import (
    VideoSequence,
    gen_synthetic,
    load_pgm,
    load_pgm_image,
    load_sequence,
    save_pgm,
    save_pgm_image,
    save_sequence,
)
from .metrics import (
    FrameMetrics,
    MetricsReport,
    SsimParams,
    correlation,
    mse,
    psnr,
    report_to_csv,
    sequence_report,
    ssim,
)
from .motion import (
    MotionVector,
    SearchConfig,
    block_means,
    compensate,
    estimate_motion,
    field_to_csv,
    full_search,
    mad_cost,
    mse_cost,
    search_block,
)
from .watermark import EmbedLayout, binarize, capacity, embed, extract

__version__ = "0.1.0"

__all__ = [
    "FRAME_I",
    "FRAME_P",
    "CapacityError",
    "DimensionError",
    "EmbedLayout",
    "FormatError",
    "FrameMetrics",
    "FrameRecord",
    "HEADER_SIZE",
    "MetricsReport",
    "MotionVector",
    "S2fHeader",
    "S2fStream",
    "SearchConfig",
    "SsimParams",
    "UndefinedCorrelationError",
    "VideoSequence",
    "binarize",
    "block_means",
    "capacity",
    "compensate",
    "correlation",
    "decode",
    "embed",
    "encode",
    "estimate_motion",
    "extract",
    "field_to_csv",
    "full_search",
    "gen_synthetic",
    "load_pgm",
    "load_pgm_image",
    "load_sequence",
    "mad_cost",
    "mse",
    "mse_cost",
    "parse",
    "psnr",
    "report_to_csv",
    "save_pgm",
    "save_pgm_image",
    "save_sequence",
    "search_block",
    "sequence_report",
    "serialize",
    "ssim",
]
