"""Layout-constrained denoising of measured depth maps.

A pixel is rewritten with the background depth when (a) its measurement is
missing (value 0), or (b) its 3D unprojection lands outside the closed
room shell by more than ``slack`` meters. Points inside the room are never
touched. The shell is the floor-plan polygon extruded between the floor
and ceiling planes and capped, so the outside distance of a point is
``hypot(horizontal distance to the polygon region, vertical distance to
the height slab)``.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .bgdepth import DepthMap, require_same_grid
from .equirect import GridSpec, pixel_center_dirs
from .layout import ManhattanRoom

DEFAULT_SLACK = 1.0  # meters


def shell_outside_distance(room: ManhattanRoom, points: np.ndarray) -> np.ndarray:
    """Euclidean distance from 3D points to the closed room shell (0 inside)."""
    pts = np.ascontiguousarray(np.asarray(points, dtype=np.float64).reshape(-1, 3))
    return _kernels.shell_outside_distance(
        room.edges, room.cam_to_floor, room.cam_to_ceil, pts
    )


def denoise_depth(
    gt: DepthMap,
    background: DepthMap,
    room: ManhattanRoom,
    grid: GridSpec,
    slack: float = DEFAULT_SLACK,
) -> DepthMap:
    if slack <= 0:
        raise ValueError("slack must be > 0")
    require_same_grid(gt, background)
    if gt.grid != grid:
        raise ValueError("depth map grid differs from requested grid")

    dirs = pixel_center_dirs(grid)
    points = gt.values[..., None] * dirs
    dist = shell_outside_distance(room, points.reshape(-1, 3)).reshape(grid.shape)
    replace = (gt.values == 0) | (dist > slack)
    out = np.where(replace, background.values, gt.values)
    return DepthMap(grid=grid, values=out)
