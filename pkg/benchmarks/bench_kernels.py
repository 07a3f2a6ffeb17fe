"""Compare the numba and numpy kernel backends.

Usage:
    python3 benchmarks/bench_kernels.py [--height 512] [--repeats 5]

Times the three hot kernels (panorama raycast, per-azimuth boundary range,
shell distance audit) on a generated scene and prints a small table. The
numba columns are skipped if numba is unavailable.
"""

import argparse
import time

import numpy as np

from panoroom import GridSpec, SceneConfig, generate_scene
from panoroom import _kernels


def timeit(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--height", type=int, default=512)
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    grid = GridSpec(width=2 * args.height, height=args.height)
    scene = generate_scene(args.seed, SceneConfig(plan="lshape", box_count_range=(2, 4)))
    room = scene.room
    edges = room.edges
    boxes = scene.boxes
    down, up = room.cam_to_floor, room.cam_to_ceil
    azimuths = (np.arange(grid.width) + 0.5) / grid.width * 2 * np.pi - np.pi
    rng = np.random.default_rng(1)
    pts = rng.uniform(-6, 6, size=(grid.height * grid.width, 3))

    cases = {
        "raycast": {
            "numpy": lambda: _kernels.raycast_numpy(
                edges, down, up, boxes, grid.height, grid.width, True
            ),
        },
        "boundary_range": {
            "numpy": lambda: _kernels.boundary_range_numpy(edges, azimuths),
        },
        "shell_distance": {
            "numpy": lambda: _kernels.shell_outside_distance_numpy(edges, down, up, pts),
        },
    }
    if _kernels._HAVE_NUMBA:
        cases["raycast"]["numba"] = lambda: _kernels.raycast_numba(
            edges, down, up, boxes, grid.height, grid.width, True
        )
        cases["boundary_range"]["numba"] = lambda: _kernels.boundary_range_numba(
            edges, azimuths
        )
        cases["shell_distance"]["numba"] = lambda: _kernels.shell_outside_distance_numba(
            edges, down, up, pts
        )

    print(f"grid {grid.width}x{grid.height}, {len(boxes)} boxes, "
          f"best of {args.repeats} runs")
    print(f"{'kernel':<16}{'numpy':>12}{'numba':>12}{'speedup':>10}")
    for name, impls in cases.items():
        results = {}
        for backend, fn in impls.items():
            fn()  # warm up (jit compile / cache touch)
            results[backend] = timeit(fn, args.repeats)
        t_np = results["numpy"]
        if "numba" in results:
            t_nb = results["numba"]
            print(f"{name:<16}{t_np * 1e3:>10.1f}ms{t_nb * 1e3:>10.1f}ms"
                  f"{t_np / t_nb:>9.1f}x")
        else:
            print(f"{name:<16}{t_np * 1e3:>10.1f}ms{'n/a':>12}{'n/a':>10}")


if __name__ == "__main__":
    main()
