"""Hot numeric kernels: panorama ray casting, boundary ranging, shell distance.

Each kernel has a numba-compiled loop implementation and a pure-numpy
vectorized fallback. The backend is picked at import time from the
``PANOROOM_BACKEND`` environment variable (``numba`` by default, ``numpy``
forces the fallback). Both paths compute the same formulas; the benchmark
in ``benchmarks/bench_kernels.py`` compares them.

Geometry inputs are plain arrays so the kernels stay jit-friendly:

* ``edges``: (N, 4) float64, one floor-plan polygon edge per row as
  (ax, ay, bx, by), camera at the horizontal origin;
* ``boxes``: (M, 6) float64 axis-aligned boxes as (minx, miny, minz,
  maxx, maxy, maxz);
* heights: ``cam_down`` (camera to floor) and ``cam_up`` (camera to
  ceiling), both positive.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


USE_NUMBA = _HAVE_NUMBA and os.environ.get("PANOROOM_BACKEND", "numba").lower() != "numpy"


# ---------------------------------------------------------------------------
# loop implementations (numba-compiled when the numba backend is active)


@njit(cache=True)
def _point_in_polygon(edges, px, py):
    inside = False
    for k in range(edges.shape[0]):
        ay = edges[k, 1]
        by = edges[k, 3]
        if (ay > py) != (by > py):
            ax = edges[k, 0]
            bx = edges[k, 2]
            xint = ax + (py - ay) * (bx - ax) / (by - ay)
            if px < xint:
                inside = not inside
    return inside


@njit(cache=True)
def _ray_boundary_range(edges, dx, dy):
    """First positive crossing distance of the 2D ray t*(dx,dy), t > 0."""
    best = np.inf
    for k in range(edges.shape[0]):
        ax = edges[k, 0]
        ay = edges[k, 1]
        ex = edges[k, 2] - ax
        ey = edges[k, 3] - ay
        det = ex * dy - ey * dx
        if det == 0.0:
            continue
        t = (ex * ay - ey * ax) / det
        u = (dx * ay - dy * ax) / det
        if t > 0.0 and 0.0 <= u <= 1.0 and t < best:
            best = t
    return best


@njit(cache=True)
def _raycast_loop(edges, cam_down, cam_up, boxes, height, width, include_boxes):
    out = np.empty((height, width), dtype=np.float64)
    nbox = boxes.shape[0]
    for i in range(height):
        lat = (0.5 - (i + 0.5) / height) * np.pi
        sl = np.sin(lat)
        cl = np.cos(lat)
        for j in range(width):
            lon = ((j + 0.5) / width) * 2.0 * np.pi - np.pi
            dx = cl * np.cos(lon)
            dy = cl * np.sin(lon)
            dz = sl
            best = np.inf
            if dz < 0.0:
                t = -cam_down / dz
                if _point_in_polygon(edges, t * dx, t * dy):
                    best = t
            elif dz > 0.0:
                t = cam_up / dz
                if _point_in_polygon(edges, t * dx, t * dy):
                    best = t
            for k in range(edges.shape[0]):
                ax = edges[k, 0]
                ay = edges[k, 1]
                ex = edges[k, 2] - ax
                ey = edges[k, 3] - ay
                det = ex * dy - ey * dx
                if det == 0.0:
                    continue
                t = (ex * ay - ey * ax) / det
                u = (dx * ay - dy * ax) / det
                if t > 0.0 and 0.0 <= u <= 1.0 and t < best:
                    z = t * dz
                    if -cam_down <= z <= cam_up:
                        best = t
            if include_boxes:
                for b in range(nbox):
                    tn = -np.inf
                    tf = np.inf
                    ok = True
                    for axis in range(3):
                        if axis == 0:
                            d = dx
                        elif axis == 1:
                            d = dy
                        else:
                            d = dz
                        lo = boxes[b, axis]
                        hi = boxes[b, 3 + axis]
                        if d == 0.0:
                            if lo > 0.0 or hi < 0.0:
                                ok = False
                                break
                        else:
                            t1 = lo / d
                            t2 = hi / d
                            if t1 > t2:
                                t1, t2 = t2, t1
                            if t1 > tn:
                                tn = t1
                            if t2 < tf:
                                tf = t2
                    if ok and tn <= tf and 0.0 < tn < best:
                        best = tn
            out[i, j] = best
    return out


@njit(cache=True)
def _boundary_range_loop(edges, azimuths):
    out = np.empty(azimuths.shape[0], dtype=np.float64)
    for i in range(azimuths.shape[0]):
        out[i] = _ray_boundary_range(edges, np.cos(azimuths[i]), np.sin(azimuths[i]))
    return out


@njit(cache=True)
def _shell_outside_distance_loop(edges, cam_down, cam_up, points):
    out = np.empty(points.shape[0], dtype=np.float64)
    for p in range(points.shape[0]):
        x = points[p, 0]
        y = points[p, 1]
        z = points[p, 2]
        dv = 0.0
        if z > cam_up:
            dv = z - cam_up
        elif z < -cam_down:
            dv = -cam_down - z
        if _point_in_polygon(edges, x, y):
            dh = 0.0
        else:
            dh = np.inf
            for k in range(edges.shape[0]):
                ax = edges[k, 0]
                ay = edges[k, 1]
                ex = edges[k, 2] - ax
                ey = edges[k, 3] - ay
                ee = ex * ex + ey * ey
                s = ((x - ax) * ex + (y - ay) * ey) / ee
                if s < 0.0:
                    s = 0.0
                elif s > 1.0:
                    s = 1.0
                qx = ax + s * ex - x
                qy = ay + s * ey - y
                d2 = qx * qx + qy * qy
                if d2 < dh:
                    dh = d2
            dh = np.sqrt(dh)
        out[p] = np.sqrt(dh * dh + dv * dv)
    return out


# ---------------------------------------------------------------------------
# pure-numpy implementations


def _points_in_polygon_np(edges, px, py):
    inside = np.zeros(np.shape(px), dtype=bool)
    for ax, ay, bx, by in edges:
        cond = (ay > py) != (by > py)
        with np.errstate(divide="ignore", invalid="ignore"):
            xint = ax + (py - ay) * (bx - ax) / (by - ay)
        inside ^= cond & (px < xint)
    return inside


def raycast_numpy(edges, cam_down, cam_up, boxes, height, width, include_boxes):
    lat = (0.5 - (np.arange(height) + 0.5) / height)[:, None] * np.pi
    lon = (((np.arange(width) + 0.5) / width) * 2.0 - 1.0)[None, :] * np.pi
    cl = np.cos(lat)
    dx = cl * np.cos(lon)
    dy = cl * np.sin(lon)
    dz = np.broadcast_to(np.sin(lat), (height, width))
    best = np.full((height, width), np.inf)

    with np.errstate(divide="ignore", invalid="ignore"):
        for z0, mask in ((-cam_down, dz < 0.0), (cam_up, dz > 0.0)):
            t = np.where(mask, z0 / dz, np.inf)
            hit = mask & _points_in_polygon_np(edges, t * dx, t * dy)
            best = np.where(hit & (t < best), t, best)

        for ax, ay, bx, by in edges:
            ex = bx - ax
            ey = by - ay
            det = ex * dy - ey * dx
            t = (ex * ay - ey * ax) / det
            u = (dx * ay - dy * ax) / det
            z = t * dz
            hit = (
                (det != 0.0)
                & (t > 0.0)
                & (u >= 0.0)
                & (u <= 1.0)
                & (z >= -cam_down)
                & (z <= cam_up)
            )
            best = np.where(hit & (t < best), t, best)

        if include_boxes:
            dirs = np.stack([dx, dy, dz], axis=-1)
            for b in range(boxes.shape[0]):
                tn = np.full((height, width), -np.inf)
                tf = np.full((height, width), np.inf)
                ok = np.ones((height, width), dtype=bool)
                for axis in range(3):
                    d = dirs[..., axis]
                    lo = boxes[b, axis]
                    hi = boxes[b, 3 + axis]
                    zero = d == 0.0
                    ok &= ~(zero & ((lo > 0.0) | (hi < 0.0)))
                    t1 = np.where(zero, -np.inf, lo / np.where(zero, 1.0, d))
                    t2 = np.where(zero, np.inf, hi / np.where(zero, 1.0, d))
                    lo_t = np.minimum(t1, t2)
                    hi_t = np.maximum(t1, t2)
                    tn = np.where(zero, tn, np.maximum(tn, lo_t))
                    tf = np.where(zero, tf, np.minimum(tf, hi_t))
                hit = ok & (tn <= tf) & (tn > 0.0)
                best = np.where(hit & (tn < best), tn, best)
    return best


def boundary_range_numpy(edges, azimuths):
    dx = np.cos(azimuths)
    dy = np.sin(azimuths)
    best = np.full(azimuths.shape[0], np.inf)
    with np.errstate(divide="ignore", invalid="ignore"):
        for ax, ay, bx, by in edges:
            ex = bx - ax
            ey = by - ay
            det = ex * dy - ey * dx
            t = (ex * ay - ey * ax) / det
            u = (dx * ay - dy * ax) / det
            hit = (det != 0.0) & (t > 0.0) & (u >= 0.0) & (u <= 1.0)
            best = np.where(hit & (t < best), t, best)
    return best


def shell_outside_distance_numpy(edges, cam_down, cam_up, points):
    x = points[:, 0]
    y = points[:, 1]
    z = points[:, 2]
    dv = np.maximum(np.maximum(z - cam_up, -cam_down - z), 0.0)
    inside = _points_in_polygon_np(edges, x, y)
    dh2 = np.full(points.shape[0], np.inf)
    for ax, ay, bx, by in edges:
        ex = bx - ax
        ey = by - ay
        s = np.clip(((x - ax) * ex + (y - ay) * ey) / (ex * ex + ey * ey), 0.0, 1.0)
        qx = ax + s * ex - x
        qy = ay + s * ey - y
        dh2 = np.minimum(dh2, qx * qx + qy * qy)
    dh = np.where(inside, 0.0, np.sqrt(dh2))
    return np.hypot(dh, dv)


def raycast_numba(edges, cam_down, cam_up, boxes, height, width, include_boxes):
    return _raycast_loop(edges, cam_down, cam_up, boxes, height, width, include_boxes)


def boundary_range_numba(edges, azimuths):
    return _boundary_range_loop(edges, azimuths)


def shell_outside_distance_numba(edges, cam_down, cam_up, points):
    return _shell_outside_distance_loop(edges, cam_down, cam_up, points)


if USE_NUMBA:
    raycast = raycast_numba
    boundary_range = boundary_range_numba
    shell_outside_distance = shell_outside_distance_numba
else:
    raycast = raycast_numpy
    boundary_range = boundary_range_numpy
    shell_outside_distance = shell_outside_distance_numpy
