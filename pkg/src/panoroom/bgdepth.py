"""Camera height resolution and background depth from a room layout.

Depth maps hold radial (Euclidean) distance in meters; 0 marks an invalid
pixel. Background depth has two modes:

* ``"exact"`` -- plane-geometry formulas (the default; agrees with the
  ray-cast oracle to machine precision):
  ceiling ``up / sin(lat)``, floor ``down / sin(-lat)``, wall
  ``r(v) / cos(lat)`` with ``r(v) = down / tan(phi_f(v))``;
* ``"paper-literal"`` -- the small-angle floor/ceiling linearization
  ``h / |lat|`` and the multiplicative wall construction
  ``r(v) * cos(lat)``, kept only to document how far that form diverges
  from exact geometry.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .equirect import GridSpec, pixel_center_lats
from .errors import NoValidSamplesError, ShapeMismatchError
from .layout import CameraHeights, LayoutMap

CEILING, WALL, FLOOR = 0, 1, 2

RESOLVE_MODES = ("exact", "paper-literal")


@dataclass(frozen=True)
class DepthMap:
    """H x W radial distances in meters; 0 = invalid/missing."""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != self.grid.shape:
            raise ShapeMismatchError(f"depth values {v.shape} != grid {self.grid.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("depth values must be finite")
        if np.any(v < 0):
            raise ValueError("depth values must be >= 0")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)


def require_same_grid(*maps) -> GridSpec:
    grid = maps[0].grid
    for m in maps[1:]:
        if m.grid != grid:
            raise ShapeMismatchError(f"grids differ: {m.grid} vs {grid}")
    return grid


# --- scalar/array depth formulas (shared by the map renderer and tests) ---


def floor_depth(lat_mag, down: float, mode: str = "exact"):
    """Radial floor depth at |lat| below the horizon."""
    if mode == "exact":
        return down / np.sin(lat_mag)
    return down / np.asarray(lat_mag, dtype=np.float64)


def ceiling_depth(lat_mag, up: float, mode: str = "exact"):
    """Radial ceiling depth at |lat| above the horizon."""
    if mode == "exact":
        return up / np.sin(lat_mag)
    return up / np.asarray(lat_mag, dtype=np.float64)


def wall_depth(lat, wall_range, mode: str = "exact"):
    """Radial wall depth at latitude ``lat`` for horizontal range ``wall_range``."""
    if mode == "exact":
        return wall_range / np.cos(lat)
    return wall_range * np.cos(lat)


def classify_regions(layout: LayoutMap, grid: GridSpec) -> np.ndarray:
    """Per-pixel {CEILING, WALL, FLOOR} labels from the layout boundaries.

    A pixel center exactly on a boundary counts as wall.
    """
    layout.validate_against(grid)
    rows = (np.arange(grid.height, dtype=np.float64) + 0.5)[:, None]
    region = np.full(grid.shape, WALL, dtype=np.int8)
    region[rows < layout.ceil_rows[None, :]] = CEILING
    region[rows > layout.floor_rows[None, :]] = FLOOR
    return region


def sample_bilinear(values: np.ndarray, row: float, col: float) -> float:
    """Invalid-aware bilinear sample at a continuous (row, col) coordinate.

    Map values live at pixel centers; columns wrap horizontally. Neighbors
    with value 0 are dropped and the remaining weights renormalized.
    Returns 0 when every contributing neighbor is invalid.
    """
    h, w = values.shape
    r = row - 0.5
    c = col - 0.5
    r0 = int(np.floor(r))
    c0 = int(np.floor(c))
    fr = r - r0
    fc = c - c0
    total = 0.0
    wsum = 0.0
    for dr, wr in ((0, 1.0 - fr), (1, fr)):
        ri = min(max(r0 + dr, 0), h - 1)
        for dc, wc in ((0, 1.0 - fc), (1, fc)):
            ci = (c0 + dc) % w
            weight = wr * wc
            v = values[ri, ci]
            if weight > 0.0 and v > 0.0:
                total += weight * v
                wsum += weight
    if wsum == 0.0:
        return 0.0
    return total / wsum


def _column_estimates_interior(layout, coarse, grid):
    """Exact per-column height estimates from in-region pixel centers.

    Any pure ceiling (floor) pixel satisfies ``h = d * sin(|lat|)`` exactly,
    so sampling the pixel center nearest the boundary inside each region
    recovers the heights to machine precision on clean maps. Invalid pixels
    are skipped by walking further into the region.
    """
    h = grid.height
    v = coarse.values
    up = np.full(grid.width, np.nan)
    down = np.full(grid.width, np.nan)
    for col in range(grid.width):
        i = int(np.ceil(layout.ceil_rows[col] - 0.5)) - 1  # last center above boundary
        while i >= 0 and v[i, col] <= 0.0:
            i -= 1
        if i >= 0:
            lat = (0.5 - (i + 0.5) / h) * np.pi
            up[col] = v[i, col] * np.sin(lat)
        i = int(np.floor(layout.floor_rows[col] - 0.5)) + 1  # first center below boundary
        while i < h and v[i, col] <= 0.0:
            i += 1
        if i < h:
            lat = (0.5 - (i + 0.5) / h) * np.pi
            down[col] = v[i, col] * np.sin(-lat)
    return up, down


def _column_estimates_boundary(layout, coarse, grid):
    """Per-column estimates from bilinear samples at the boundary rows."""
    up = np.full(grid.width, np.nan)
    down = np.full(grid.width, np.nan)
    for col in range(grid.width):
        phi_c = (0.5 - layout.ceil_rows[col] / grid.height) * np.pi
        phi_f = (layout.floor_rows[col] / grid.height - 0.5) * np.pi
        d_c = sample_bilinear(coarse.values, layout.ceil_rows[col], col + 0.5)
        d_f = sample_bilinear(coarse.values, layout.floor_rows[col], col + 0.5)
        if d_c > 0.0:
            up[col] = d_c * np.sin(phi_c)
        if d_f > 0.0:
            down[col] = d_f * np.sin(phi_f)
    return up, down


def resolve_camera_heights(
    layout: LayoutMap,
    coarse: DepthMap,
    grid: GridSpec,
    aggregator: str | int = "median",
    sampling: str = "interior",
) -> CameraHeights:
    """Recover (up, down) camera heights from layout boundaries plus depth.

    ``aggregator`` is ``"median"``, ``"mean"``, or an integer column index.
    ``sampling="interior"`` (default) reads the depth at the pixel center
    just inside each region, which is exact on clean maps;
    ``sampling="boundary"`` bilinearly samples at the boundary row itself.
    """
    layout.validate_against(grid)
    if coarse.grid != grid:
        raise ShapeMismatchError("coarse depth grid differs from requested grid")
    if sampling == "interior":
        up, down = _column_estimates_interior(layout, coarse, grid)
    elif sampling == "boundary":
        up, down = _column_estimates_boundary(layout, coarse, grid)
    else:
        raise ValueError(f"unknown sampling {sampling!r}")

    if isinstance(aggregator, (int, np.integer)):
        col = int(aggregator)
        if not (np.isfinite(up[col]) and np.isfinite(down[col])):
            raise NoValidSamplesError(f"column {col} has no valid boundary samples")
        return CameraHeights(up=float(up[col]), down=float(down[col]))

    reduce = {"median": np.median, "mean": np.mean}.get(aggregator)
    if reduce is None:
        raise ValueError(f"unknown aggregator {aggregator!r}")
    up_valid = up[np.isfinite(up)]
    down_valid = down[np.isfinite(down)]
    if len(up_valid) == 0 or len(down_valid) == 0:
        raise NoValidSamplesError("no column produced a valid boundary depth sample")
    return CameraHeights(up=float(reduce(up_valid)), down=float(reduce(down_valid)))


def resolve_background_depth(
    layout: LayoutMap,
    heights: CameraHeights,
    grid: GridSpec,
    mode: str = "exact",
) -> DepthMap:
    """Per-pixel distance to the room shell implied by the layout."""
    if mode not in RESOLVE_MODES:
        raise ValueError(f"mode must be one of {RESOLVE_MODES}, got {mode!r}")
    layout.validate_against(grid)
    region = classify_regions(layout, grid)
    lat = pixel_center_lats(grid)[:, None]

    phi_f = (layout.floor_rows / grid.height - 0.5) * np.pi
    wall_range = heights.down / np.tan(phi_f)

    with np.errstate(divide="ignore", invalid="ignore"):
        d_ceil = ceiling_depth(lat, heights.up, mode)
        d_floor = floor_depth(-lat, heights.down, mode)
        d_wall = wall_depth(lat, wall_range[None, :], mode)
    out = np.where(region == CEILING, d_ceil, np.where(region == FLOOR, d_floor, d_wall))
    return DepthMap(grid=grid, values=out)
