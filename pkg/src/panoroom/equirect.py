"""Equirectangular pixel <-> spherical angle <-> 3D ray conversions.

Conventions used everywhere in this package:

* images are H rows by W columns with W = 2H;
* continuous pixel coordinates: row in [0, H] increases downward,
  col in [0, W] increases to the right;
* latitude ``lat = (0.5 - row/H) * pi`` (zenith at row 0, nadir at row H);
* longitude ``lon = (col/W) * 2*pi - pi`` (half-open [-pi, pi));
* world frame: camera at the origin, z up, lon 0 along +x, so a ray
  direction is ``(cos lat cos lon, cos lat sin lon, sin lat)``;
* per-pixel map values live at pixel centers (i + 0.5, j + 0.5).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import CoordinateRangeError


@dataclass(frozen=True)
class GridSpec:
    """Equirectangular image dimensions; width must be twice the height."""

    width: int
    height: int

    def __post_init__(self):
        if self.height <= 0 or self.width <= 0:
            raise ValueError("grid dimensions must be positive")
        if self.width != 2 * self.height:
            raise ValueError(
                f"equirectangular grid needs width == 2*height, got {self.width}x{self.height}"
            )

    @property
    def shape(self) -> tuple[int, int]:
        return (self.height, self.width)


class SphereAngles(NamedTuple):
    lat: float
    lon: float


class Ray(NamedTuple):
    origin: np.ndarray
    dir: np.ndarray


def pixel_to_angles(row, col, grid: GridSpec) -> SphereAngles:
    """Map continuous pixel coordinates to (lat, lon); accepts arrays."""
    row = np.asarray(row, dtype=np.float64)
    col = np.asarray(col, dtype=np.float64)
    if np.any(row < 0) or np.any(row > grid.height) or np.any(col < 0) or np.any(col > grid.width):
        raise CoordinateRangeError(
            f"pixel coordinates outside [0,{grid.height}]x[0,{grid.width}]"
        )
    lat = (0.5 - row / grid.height) * np.pi
    lon = (col / grid.width) * 2.0 * np.pi - np.pi
    return SphereAngles(lat[()], lon[()])


def angles_to_pixel(a: SphereAngles, grid: GridSpec):
    """Inverse of :func:`pixel_to_angles` (exact, no rounding)."""
    lat = np.asarray(a[0], dtype=np.float64)
    lon = np.asarray(a[1], dtype=np.float64)
    row = (0.5 - lat / np.pi) * grid.height
    col = (lon + np.pi) / (2.0 * np.pi) * grid.width
    return row[()], col[()]


def angles_to_dir(lat, lon) -> np.ndarray:
    """Unit direction(s) for spherical angles; last axis is (x, y, z)."""
    lat = np.asarray(lat, dtype=np.float64)
    lon = np.asarray(lon, dtype=np.float64)
    cl = np.cos(lat)
    return np.stack([cl * np.cos(lon), cl * np.sin(lon), np.sin(lat)], axis=-1)


def pixel_to_ray(row, col, grid: GridSpec) -> Ray:
    """Ray from the camera center through a continuous pixel coordinate."""
    lat, lon = pixel_to_angles(row, col, grid)
    d = angles_to_dir(lat, lon)
    return Ray(np.zeros(d.shape, dtype=np.float64), d)


def wrap_angle(a):
    """Wrap angle(s) into [-pi, pi)."""
    return (np.asarray(a, dtype=np.float64) + np.pi) % (2.0 * np.pi) - np.pi


def pixel_center_lats(grid: GridSpec) -> np.ndarray:
    """Latitudes of the H pixel-center rows, top to bottom."""
    rows = np.arange(grid.height, dtype=np.float64) + 0.5
    return (0.5 - rows / grid.height) * np.pi


def pixel_center_lons(grid: GridSpec) -> np.ndarray:
    """Longitudes of the W pixel-center columns, left to right."""
    cols = np.arange(grid.width, dtype=np.float64) + 0.5
    return (cols / grid.width) * 2.0 * np.pi - np.pi


def pixel_center_dirs(grid: GridSpec) -> np.ndarray:
    """(H, W, 3) unit ray directions at all pixel centers."""
    lat = pixel_center_lats(grid)[:, None]
    lon = pixel_center_lons(grid)[None, :]
    cl = np.cos(lat)
    return np.stack(
        [
            cl * np.cos(lon),
            cl * np.sin(lon),
            np.broadcast_to(np.sin(lat), (grid.height, grid.width)),
        ],
        axis=-1,
    )
