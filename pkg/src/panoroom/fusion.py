"""Segmentation-weighted depth fusion and background-label derivation.

The fused depth is the convex blend ``d_back * p + d_coarse * (1 - p)``
with the background-segmentation probability as the weight; labels are the
binary indicator of the depth residual falling strictly below a threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bgdepth import DepthMap, require_same_grid
from .equirect import GridSpec
from .errors import ShapeMismatchError

DEFAULT_SEG_GAMMA = 0.1  # meters


@dataclass(frozen=True)
class SegMap:
    """H x W background probabilities (or binary labels) in [0, 1]."""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != self.grid.shape:
            raise ShapeMismatchError(f"seg values {v.shape} != grid {self.grid.shape}")
        if np.any(v < 0) or np.any(v > 1) or not np.all(np.isfinite(v)):
            raise ValueError("segmentation values must lie in [0, 1]")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)


def fuse_depth(coarse: DepthMap, background: DepthMap, seg: SegMap) -> DepthMap:
    """Blend coarse and background depth with the segmentation weight.

    Invalid pixels fall back to whichever input is valid; 0 when neither is.
    """
    grid = require_same_grid(coarse, background, seg)
    c = coarse.values
    b = background.values
    p = seg.values
    blended = b * p + c * (1.0 - p)
    out = np.where(
        (c > 0) & (b > 0),
        blended,
        np.where(b > 0, b, np.where(c > 0, c, 0.0)),
    )
    return DepthMap(grid=grid, values=out)


def derive_seg_labels(
    gt: DepthMap, background: DepthMap, gamma: float = DEFAULT_SEG_GAMMA
) -> SegMap:
    """Binary background labels: 1 where |d_gt - d_back| < gamma (strict).

    Pixels with invalid ground truth are labeled 0.
    """
    if gamma <= 0:
        raise ValueError("gamma must be > 0")
    grid = require_same_grid(gt, background)
    residual = np.abs(gt.values - background.values)
    labels = ((residual < gamma) & (gt.values > 0)).astype(np.float64)
    return SegMap(grid=grid, values=labels)
