"""Batch CLI tying the pipeline together.

Subcommands: synth, bg, fuse, seglabel, denoise, eval, pointcloud.
All randomness takes an explicit --seed. On failure the tool prints a
single machine-parseable line ``error: <code>: <message>`` to stderr and
exits nonzero.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import bgdepth, denoise, formats, fusion, metrics, synth
from .bgdepth import DepthMap
from .equirect import GridSpec
from .errors import PanoroomError
from .fusion import SegMap
from .layout import room_to_layout


def _grid_for(values: np.ndarray) -> GridSpec:
    h, w = values.shape
    return GridSpec(width=w, height=h)


def _load_depth(path: str) -> DepthMap:
    values = formats.read_pfm(path)
    return DepthMap(grid=_grid_for(values), values=values.astype(np.float64))


def _load_seg(path: str) -> SegMap:
    values = formats.read_pfm(path)
    return SegMap(grid=_grid_for(values), values=values.astype(np.float64))


def _cmd_synth(args) -> int:
    grid = GridSpec(width=2 * args.height, height=args.height)
    config = synth.SceneConfig(plan=args.plan, box_count_range=tuple(args.boxes))
    os.makedirs(args.out_dir, exist_ok=True)
    for i in range(args.count):
        scene_seed = (args.seed + i) % 2**64
        scene = synth.generate_scene(scene_seed, config)
        scene_dir = os.path.join(args.out_dir, f"scene_{i:03d}")
        os.makedirs(scene_dir, exist_ok=True)
        gt = synth.raycast_depth(scene, grid, include_foreground=True)
        bg = synth.raycast_depth(scene, grid, include_foreground=False)
        mask = synth.gt_background_mask(scene, grid)
        layout = room_to_layout(scene.room, grid)
        formats.write_json(formats.scene_to_dict(scene), os.path.join(scene_dir, "scene.json"))
        formats.write_pfm(gt.values, os.path.join(scene_dir, "gt.pfm"))
        formats.write_pfm(bg.values, os.path.join(scene_dir, "bg_gt.pfm"))
        formats.write_json(
            formats.layout_to_dict(layout, grid), os.path.join(scene_dir, "layout.json")
        )
        formats.write_pfm(mask.values, os.path.join(scene_dir, "segmask.pfm"))
    return 0


def _cmd_bg(args) -> int:
    layout, grid = formats.layout_from_dict(formats.read_json(args.layout))
    coarse = _load_depth(args.coarse)
    heights = bgdepth.resolve_camera_heights(layout, coarse, grid, aggregator=args.aggregator)
    mode = {"exact": "exact", "paper-literal": "paper-literal"}[args.mode]
    bg = bgdepth.resolve_background_depth(layout, heights, grid, mode=mode)
    formats.write_pfm(bg.values, args.out)
    return 0


def _cmd_fuse(args) -> int:
    coarse = _load_depth(args.coarse)
    bg = _load_depth(args.bg)
    seg = _load_seg(args.seg)
    fused = fusion.fuse_depth(coarse, bg, seg)
    formats.write_pfm(fused.values, args.out)
    return 0


def _cmd_seglabel(args) -> int:
    gt = _load_depth(args.gt)
    bg = _load_depth(args.bg)
    labels = fusion.derive_seg_labels(gt, bg, gamma=args.gamma)
    formats.write_pfm(labels.values, args.out)
    return 0


def _cmd_denoise(args) -> int:
    gt = _load_depth(args.gt)
    bg = _load_depth(args.bg)
    room = formats.room_from_dict(formats.read_json(args.room))
    cleaned = denoise.denoise_depth(gt, bg, room, gt.grid, slack=args.slack)
    formats.write_pfm(cleaned.values, args.out)
    return 0


def _cmd_eval(args) -> int:
    pred = _load_depth(args.pred)
    gt = _load_depth(args.gt)
    mask = _load_seg(args.mask) if args.mask else None
    report = metrics.eval_metrics(pred, gt, mask)
    formats._atomic_write_bytes(args.json, (report.to_json() + "\n").encode("ascii"))
    return 0


def _cmd_pointcloud(args) -> int:
    depth = _load_depth(args.depth)
    formats.write_ply_pointcloud(depth.values, depth.grid, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="panoroom")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate synthetic scenes with oracle renders")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--plan", choices=["rect", "lshape"], default="rect")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--height", type=int, default=512, help="image height H (W = 2H)")
    p.add_argument("--boxes", type=int, nargs=2, default=[0, 4], metavar=("LO", "HI"))
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("bg", help="resolve camera heights and background depth")
    p.add_argument("--layout", required=True)
    p.add_argument("--coarse", required=True)
    p.add_argument("--mode", choices=["exact", "paper-literal"], default="exact")
    p.add_argument("--aggregator", choices=["median", "mean"], default="median")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_bg)

    p = sub.add_parser("fuse", help="segmentation-weighted depth fusion")
    p.add_argument("--coarse", required=True)
    p.add_argument("--bg", required=True)
    p.add_argument("--seg", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_fuse)

    p = sub.add_parser("seglabel", help="derive binary background labels")
    p.add_argument("--gt", required=True)
    p.add_argument("--bg", required=True)
    p.add_argument("--gamma", type=float, default=fusion.DEFAULT_SEG_GAMMA)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_seglabel)

    p = sub.add_parser("denoise", help="layout-constrained depth denoising")
    p.add_argument("--gt", required=True)
    p.add_argument("--bg", required=True)
    p.add_argument("--room", required=True)
    p.add_argument("--slack", type=float, default=denoise.DEFAULT_SLACK)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_denoise)

    p = sub.add_parser("eval", help="depth metrics report as JSON")
    p.add_argument("--pred", required=True)
    p.add_argument("--gt", required=True)
    p.add_argument("--mask", default=None)
    p.add_argument("--json", required=True)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("pointcloud", help="export an ASCII PLY point cloud")
    p.add_argument("--depth", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_pointcloud)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PanoroomError as e:
        print(f"error: {e.code}: {e}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as e:
        print(f"error: io: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
