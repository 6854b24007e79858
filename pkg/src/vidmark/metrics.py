"""Frame quality metrics: MSE, PSNR, Pearson correlation, global SSIM.

SSIM here is the single-window variant: means, variances and covariance are
taken once over the whole image (sample form, N-1 denominators) and
combined as

    ssim = (2*mu_x*mu_y + C1) / (mu_x^2 + mu_y^2 + C1)
         * (2*cov_xy   + C2) / (var_x + var_y    + C2)

with C1 = (0.01*255)^2 and C2 = (0.03*255)^2. No sliding window, no
Gaussian weighting; identical inputs score exactly 1.0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, UndefinedCorrelationError
from .media import VideoSequence
from .watermark import extract

MAX_PIXEL = 255.0

CSV_HEADER = "frame,mse,psnr_db,wm_correlation,wm_ssim"


@dataclass(frozen=True)
class SsimParams:
    k1: float = 0.01
    k2: float = 0.03
    dynamic_range: float = MAX_PIXEL
    # Exponents of the luminance and (merged) contrast-structure factors.
    # The printed product form merges contrast and structure, so beta and
    # gamma must stay equal; the defaults collapse to the formula above.
    alpha: float = 1.0
    beta: float = 1.0
    gamma: float = 1.0

    @property
    def c1(self) -> float:
        return (self.k1 * self.dynamic_range) ** 2

    @property
    def c2(self) -> float:
        return (self.k2 * self.dynamic_range) ** 2


DEFAULT_SSIM = SsimParams()


@dataclass
class FrameMetrics:
    """Per-frame scores; correlation/ssim are None when not computed or
    undefined (zero-variance input)."""

    frame_index: int
    mse: float
    psnr_db: float
    correlation: float | None = None
    ssim: float | None = None


@dataclass
class MetricsReport:
    """Video rows (decoded vs original frames) and, when a watermark was
    supplied, watermark rows (extracted vs original watermark)."""

    video: list
    watermark: list | None = None


def _as_pair(a, b):
    x = np.asarray(a, dtype=np.float64)
    y = np.asarray(b, dtype=np.float64)
    if x.shape != y.shape:
        raise DimensionError(f"image shapes differ: {x.shape} vs {y.shape}")
    if x.size == 0:
        raise DimensionError("images must be non-empty")
    return x.reshape(-1), y.reshape(-1)


def mse(a, b) -> float:
    """Mean squared pixel difference."""
    x, y = _as_pair(a, b)
    d = x - y
    return float(np.dot(d, d) / d.size)


def psnr(a, b) -> float:
    """Peak signal-to-noise ratio in dB against a 255 peak.

    Identical inputs give +infinity (rendered as "inf" in CSV output).
    """
    m = mse(a, b)
    if m == 0.0:
        return math.inf
    return 10.0 * math.log10(MAX_PIXEL * MAX_PIXEL / m)


def correlation(a, b) -> float:
    """Pearson correlation of the flattened pixel values, clamped to [-1, 1].

    Raises UndefinedCorrelationError when either input has zero variance.
    """
    x, y = _as_pair(a, b)
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(np.dot(dx, dx))
    syy = float(np.dot(dy, dy))
    if sxx == 0.0 or syy == 0.0:
        raise UndefinedCorrelationError(
            "correlation undefined: an input has zero variance"
        )
    r = float(np.dot(dx, dy)) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def ssim(a, b, params: SsimParams = DEFAULT_SSIM) -> float:
    """Global single-window structural similarity."""
    if params.beta != params.gamma:
        raise ValueError(
            "the merged contrast-structure factor needs beta == gamma"
        )
    x, y = _as_pair(a, b)
    n = x.size
    if n < 2:
        raise DimensionError("ssim needs at least 2 pixels")

    mu_x = float(x.mean())
    mu_y = float(y.mean())
    dx = x - mu_x
    dy = y - mu_y
    var_x = float(np.dot(dx, dx)) / (n - 1)
    var_y = float(np.dot(dy, dy)) / (n - 1)
    cov = float(np.dot(dx, dy)) / (n - 1)

    c1, c2 = params.c1, params.c2
    lum = (2.0 * mu_x * mu_y + c1) / (mu_x * mu_x + mu_y * mu_y + c1)
    cs = (2.0 * cov + c2) / (var_x + var_y + c2)
    if params.alpha != 1.0:
        lum = math.copysign(abs(lum) ** params.alpha, lum)
    if params.beta != 1.0:
        cs = math.copysign(abs(cs) ** params.beta, cs)
    return lum * cs


def _metrics_row(k, a, b, with_similarity: bool) -> FrameMetrics:
    m = mse(a, b)
    p = psnr(a, b)
    corr = s = None
    if with_similarity:
        try:
            corr = correlation(a, b)
        except UndefinedCorrelationError:
            corr = None
        s = ssim(a, b)
    return FrameMetrics(k, m, p, corr, s)


def sequence_report(
    original: VideoSequence,
    decoded: VideoSequence,
    wm=None,
    wm_size=None,
) -> MetricsReport:
    """Per-frame quality of ``decoded`` against ``original``.

    When ``wm`` is given, each decoded frame also gets a watermark row:
    the watermark is extracted from the decoded frame and scored against
    ``wm`` (correlation and ssim, plus mse/psnr of the two bitmaps).
    ``wm_size`` defaults to the watermark's own (width, height).
    """
    if len(original) != len(decoded):
        raise DimensionError(
            f"sequence lengths differ: {len(original)} vs {len(decoded)}"
        )
    if (original.width, original.height) != (decoded.width, decoded.height):
        raise DimensionError(
            f"sequence dimensions differ: {original.width}x{original.height} "
            f"vs {decoded.width}x{decoded.height}"
        )

    video_rows = [
        _metrics_row(k, a, b, with_similarity=True)
        for k, (a, b) in enumerate(zip(original, decoded))
    ]

    wm_rows = None
    if wm is not None:
        wm = np.asarray(wm)
        if wm_size is None:
            wm_size = (wm.shape[1], wm.shape[0])
        wm_w, wm_h = int(wm_size[0]), int(wm_size[1])
        if wm.shape != (wm_h, wm_w):
            raise DimensionError(
                f"watermark is {wm.shape[1]}x{wm.shape[0]} but wm_size says {wm_w}x{wm_h}"
            )
        wm_rows = []
        for k, frame in enumerate(decoded):
            recovered = extract(frame, wm_w, wm_h)
            wm_rows.append(_metrics_row(k, wm, recovered, with_similarity=True))
    return MetricsReport(video_rows, wm_rows)


def _fmt(v) -> str:
    if v is None:
        return ""
    if math.isinf(v):
        return "inf"
    return f"{v:.6g}"


def report_to_csv(report: MetricsReport) -> str:
    """Render a report as CSV text, one row per frame.

    Watermark columns are left empty when the report has no watermark rows;
    infinite PSNR prints as "inf"; numbers carry 6 significant digits.
    """
    lines = [CSV_HEADER]
    for i, row in enumerate(report.video):
        wm_corr = wm_ssim = ""
        if report.watermark is not None:
            wm_row = report.watermark[i]
            wm_corr = _fmt(wm_row.correlation)
            wm_ssim = _fmt(wm_row.ssim)
        lines.append(
            f"{row.frame_index},{_fmt(row.mse)},{_fmt(row.psnr_db)},{wm_corr},{wm_ssim}"
        )
    return "\n".join(lines) + "\n"
