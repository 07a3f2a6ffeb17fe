"""Room layout data model and conversions to/from 3D Manhattan rooms.

A layout stores, per image column, the continuous ceiling-boundary row,
floor-boundary row, and a corner probability. A Manhattan room is a
rectilinear floor-plan polygon (camera at the horizontal origin) plus the
camera-to-floor and camera-to-ceiling heights.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .equirect import GridSpec, pixel_center_lons
from .errors import CornerExtractionError, PolygonError


def _readonly(a, dtype=np.float64):
    out = np.array(a, dtype=dtype)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class CameraHeights:
    """Vertical camera-to-ceiling (up) and camera-to-floor (down) distances."""

    up: float
    down: float

    def __post_init__(self):
        for name in ("up", "down"):
            v = getattr(self, name)
            if not np.isfinite(v) or v <= 0:
                raise ValueError(f"camera height '{name}' must be finite and > 0, got {v}")


@dataclass(frozen=True)
class LayoutMap:
    """Per-column layout: ceiling row, floor row, corner probability."""

    ceil_rows: np.ndarray
    floor_rows: np.ndarray
    corner_prob: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "ceil_rows", _readonly(self.ceil_rows))
        object.__setattr__(self, "floor_rows", _readonly(self.floor_rows))
        object.__setattr__(self, "corner_prob", _readonly(self.corner_prob))
        n = len(self.ceil_rows)
        if len(self.floor_rows) != n or len(self.corner_prob) != n:
            raise ValueError("layout channel lengths differ")
        if np.any(self.corner_prob < 0) or np.any(self.corner_prob > 1):
            raise ValueError("corner probabilities must lie in [0, 1]")

    @property
    def width(self) -> int:
        return len(self.ceil_rows)

    def validate_against(self, grid: GridSpec) -> None:
        if self.width != grid.width:
            raise ValueError(f"layout width {self.width} != grid width {grid.width}")
        half = grid.height / 2.0
        if np.any(self.ceil_rows <= 0) or np.any(self.ceil_rows >= half):
            raise ValueError("ceiling rows must lie in (0, H/2)")
        if np.any(self.floor_rows <= half) or np.any(self.floor_rows >= grid.height):
            raise ValueError("floor rows must lie in (H/2, H)")


def polygon_edges(vertices: np.ndarray) -> np.ndarray:
    """(N, 4) array of (ax, ay, bx, by) edges of a closed polygon."""
    v = np.asarray(vertices, dtype=np.float64)
    return np.concatenate([v, np.roll(v, -1, axis=0)], axis=1)


def _segments_intersect(p1, p2, p3, p4):
    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    d1 = orient(p3, p4, p1)
    d2 = orient(p3, p4, p2)
    d3 = orient(p1, p2, p3)
    d4 = orient(p1, p2, p4)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)):
        return True
    return False


def is_simple_polygon(vertices: np.ndarray) -> bool:
    """True when no two non-adjacent edges cross (O(n^2); n is small)."""
    v = np.asarray(vertices, dtype=np.float64)
    n = len(v)
    for i in range(n):
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue
            if _segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]):
                return False
    return True


def signed_area(vertices: np.ndarray) -> float:
    v = np.asarray(vertices, dtype=np.float64)
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


@dataclass(frozen=True)
class ManhattanRoom:
    """Rectilinear floor plan (CCW, camera at origin) with camera heights."""

    vertices: np.ndarray
    cam_to_floor: float
    cam_to_ceil: float

    def __post_init__(self):
        object.__setattr__(self, "vertices", _readonly(self.vertices))
        v = self.vertices
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] < 4:
            raise PolygonError("floor plan needs at least 4 (x, y) vertices")
        if not np.isfinite(self.cam_to_floor) or self.cam_to_floor <= 0:
            raise PolygonError("cam_to_floor must be finite and > 0")
        if not np.isfinite(self.cam_to_ceil) or self.cam_to_ceil <= 0:
            raise PolygonError("cam_to_ceil must be finite and > 0")
        if not is_simple_polygon(v):
            raise PolygonError("floor plan polygon is self-intersecting")
        if signed_area(v) <= 0:
            raise PolygonError("floor plan polygon must be counter-clockwise")
        edges = polygon_edges(v)
        if not _kernels._point_in_polygon(edges, 0.0, 0.0):
            raise PolygonError("camera (origin) must lie strictly inside the floor plan")

    @property
    def edges(self) -> np.ndarray:
        return polygon_edges(self.vertices)

    @property
    def heights(self) -> CameraHeights:
        return CameraHeights(up=self.cam_to_ceil, down=self.cam_to_floor)

    def diagonal(self) -> float:
        """Upper bound on any camera-to-shell distance."""
        span = float(np.max(np.linalg.norm(self.vertices, axis=1)))
        return float(np.hypot(span, max(self.cam_to_floor, self.cam_to_ceil)))


def extract_corners(layout: LayoutMap, prob_threshold: float = 0.5, nms_window: int = 4) -> np.ndarray:
    """Peak-pick corner columns: threshold plus circular non-max suppression.

    A column survives when its probability reaches the threshold and is the
    (leftmost, on ties) maximum within +-nms_window columns.
    """
    if nms_window < 1:
        raise ValueError("nms_window must be >= 1")
    p = layout.corner_prob
    w = len(p)
    keep = []
    for v in np.nonzero(p >= prob_threshold)[0]:
        ok = True
        for o in range(-nms_window, nms_window + 1):
            if o == 0:
                continue
            u = (v + o) % w
            if p[u] > p[v] or (p[u] == p[v] and u < v):
                ok = False
                break
        if ok:
            keep.append(int(v))
    if len(keep) < 4:
        raise CornerExtractionError(
            f"found {len(keep)} corner columns, need >= 4 to close the room"
        )
    return np.array(sorted(keep), dtype=np.int64)


def _fit_line(points: np.ndarray):
    """Total-least-squares line through >= 2 points: (centroid, unit dir)."""
    c = points.mean(axis=0)
    _, _, vt = np.linalg.svd(points - c, full_matrices=False)
    return c, vt[0]


def _intersect_lines(l1, l2):
    (c1, d1), (c2, d2) = l1, l2
    a = np.array([[d1[0], -d2[0]], [d1[1], -d2[1]]])
    det = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
    if abs(det) < 1e-9:
        return None
    t = np.linalg.solve(a, c2 - c1)[0]
    return c1 + t * d1


def snap_manhattan(vertices: np.ndarray) -> np.ndarray:
    """Force alternating axis-aligned edges by averaging shared coordinates."""
    v = np.asarray(vertices, dtype=np.float64)
    n = len(v)
    if n % 2 != 0:
        raise PolygonError("Manhattan snapping needs an even vertex count")
    deltas = np.roll(v, -1, axis=0) - v
    horizontal = np.abs(deltas[:, 0]) >= np.abs(deltas[:, 1])  # edge runs along x
    for k in range(n):
        if horizontal[k] == horizontal[(k + 1) % n]:
            raise PolygonError("edges do not alternate axis alignment; cannot snap")
    out = np.empty_like(v)
    for k in range(n):
        a, b = v[k], v[(k + 1) % n]
        if horizontal[k]:
            ym = 0.5 * (a[1] + b[1])
            out[k, 1] = ym
            out[(k + 1) % n, 1] = ym
        else:
            xm = 0.5 * (a[0] + b[0])
            out[k, 0] = xm
            out[(k + 1) % n, 0] = xm
    return out


def layout_to_room(
    layout: LayoutMap,
    heights: CameraHeights,
    grid: GridSpec,
    snap: bool = True,
    corner_cols: np.ndarray | None = None,
    prob_threshold: float = 0.5,
    nms_window: int = 4,
) -> ManhattanRoom:
    """Invert a layout into a floor-plan polygon anchored by the floor boundary.

    Each wall between consecutive corner columns contributes the boundary
    points of its interior columns (floor boundary lifted to the horizontal
    plane through ``heights.down``); a vertex is recovered as the
    intersection of the two adjacent wall lines, which is exact whenever the
    layout itself is. Walls too narrow to fit a line fall back to the corner
    column's own boundary sample.
    """
    layout.validate_against(grid)
    if corner_cols is None:
        corner_cols = extract_corners(layout, prob_threshold, nms_window)
    corner_cols = np.asarray(corner_cols, dtype=np.int64)
    n = len(corner_cols)
    if n < 4:
        raise CornerExtractionError("need >= 4 corner columns")

    w = grid.width
    phi_f = (layout.floor_rows / grid.height - 0.5) * np.pi
    r = heights.down / np.tan(phi_f)
    az = pixel_center_lons(grid)
    px = r * np.cos(az)
    py = r * np.sin(az)

    lines = []
    for k in range(n):
        c0 = int(corner_cols[k])
        c1 = int(corner_cols[(k + 1) % n])
        span = (c1 - c0) % w
        interior = (c0 + 1 + np.arange(span - 1)) % w if span >= 2 else np.array([], dtype=int)
        if len(interior) >= 2:
            pts = np.stack([px[interior], py[interior]], axis=1)
            lines.append(_fit_line(pts))
        else:
            lines.append(None)

    verts = np.empty((n, 2), dtype=np.float64)
    for k in range(n):
        prev_line = lines[k - 1]
        next_line = lines[k]
        vertex = None
        if prev_line is not None and next_line is not None:
            vertex = _intersect_lines(prev_line, next_line)
        if vertex is None:
            c = int(corner_cols[k])
            vertex = np.array([px[c], py[c]])
        verts[k] = vertex

    if snap:
        verts = snap_manhattan(verts)
    return ManhattanRoom(verts, cam_to_floor=heights.down, cam_to_ceil=heights.up)


def room_to_layout(room: ManhattanRoom, grid: GridSpec) -> LayoutMap:
    """Render the exact layout of a room: boundary rows per column center,
    one-hot corner indicator for columns whose azimuth sector holds a vertex."""
    az = pixel_center_lons(grid)
    r = _kernels.boundary_range(room.edges, az)
    floor_rows = grid.height * (0.5 + np.arctan(room.cam_to_floor / r) / np.pi)
    ceil_rows = grid.height * (0.5 - np.arctan(room.cam_to_ceil / r) / np.pi)
    corner = np.zeros(grid.width, dtype=np.float64)
    for x, y in room.vertices:
        alpha = np.arctan2(y, x)
        v = int(np.floor((alpha + np.pi) / (2.0 * np.pi) * grid.width)) % grid.width
        corner[v] = 1.0
    return LayoutMap(ceil_rows=ceil_rows, floor_rows=floor_rows, corner_prob=corner)


def corner_azimuth_columns(room: ManhattanRoom, grid: GridSpec) -> np.ndarray:
    """Column sector index for each vertex direction, in vertex order."""
    cols = []
    for x, y in room.vertices:
        alpha = np.arctan2(y, x)
        cols.append(int(np.floor((alpha + np.pi) / (2.0 * np.pi) * grid.width)) % grid.width)
    return np.array(cols, dtype=np.int64)
