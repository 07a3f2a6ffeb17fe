import numpy as np
import pytest

from panoroom import (
    CEILING,
    FLOOR,
    WALL,
    CameraHeights,
    DepthMap,
    GridSpec,
    LayoutMap,
    classify_regions,
    raycast_depth,
    resolve_background_depth,
    resolve_camera_heights,
    room_to_layout,
)
from panoroom.bgdepth import floor_depth, sample_bilinear, wall_depth
from panoroom.errors import NoValidSamplesError

from conftest import make_scene, mixed_scenes

GRID = GridSpec(width=256, height=128)


def layout_for(scene, grid=GRID):
    return room_to_layout(scene.room, grid)


# --- camera height resolution ----------------------------------------------


def test_single_column_boundary_sampling_sin_formula():
    # floor boundary at phi_f = pi/6 and constant coarse depth 2.0 -> down = 1.0
    h, w = 128, 256
    grid = GridSpec(width=w, height=h)
    floor_row = h * (0.5 + (np.pi / 6) / np.pi)
    layout = LayoutMap(
        ceil_rows=np.full(w, h * 0.25),
        floor_rows=np.full(w, floor_row),
        corner_prob=np.zeros(w),
    )
    coarse = DepthMap(grid=grid, values=np.full((h, w), 2.0))
    heights = resolve_camera_heights(layout, coarse, grid, aggregator=7, sampling="boundary")
    assert heights.down == pytest.approx(1.0, abs=1e-12)


def test_oracle_recovery_exact():
    for scene in mixed_scenes(6):
        layout = layout_for(scene)
        coarse = raycast_depth(scene, GRID, include_foreground=False)
        heights = resolve_camera_heights(layout, coarse, GRID)
        assert heights.down == pytest.approx(scene.room.cam_to_floor, abs=1e-6)
        assert heights.up == pytest.approx(scene.room.cam_to_ceil, abs=1e-6)


def test_median_robust_to_corrupted_columns():
    scene = make_scene(5)
    layout = layout_for(scene)
    coarse = raycast_depth(scene, GRID, include_foreground=False).values.copy()
    rng = np.random.default_rng(0)
    bad = rng.choice(GRID.width, size=int(0.3 * GRID.width), replace=False)
    coarse[:, bad] *= 10.0
    heights = resolve_camera_heights(
        layout, DepthMap(grid=GRID, values=coarse), GRID, aggregator="median"
    )
    assert heights.down == pytest.approx(scene.room.cam_to_floor, abs=1e-6)
    assert heights.up == pytest.approx(scene.room.cam_to_ceil, abs=1e-6)


def test_all_invalid_raises():
    scene = make_scene(1)
    layout = layout_for(scene)
    empty = DepthMap(grid=GRID, values=np.zeros(GRID.shape))
    with pytest.raises(NoValidSamplesError):
        resolve_camera_heights(layout, empty, GRID)


def test_invalid_pixels_skipped_by_interior_walk():
    scene = make_scene(2)
    layout = layout_for(scene)
    coarse = raycast_depth(scene, GRID, include_foreground=False).values.copy()
    # punch holes at the rows adjacent to the boundaries in half the columns
    for col in range(0, GRID.width, 2):
        fi = int(np.floor(layout.floor_rows[col] - 0.5)) + 1
        ci = int(np.ceil(layout.ceil_rows[col] - 0.5)) - 1
        coarse[fi, col] = 0.0
        coarse[ci, col] = 0.0
    heights = resolve_camera_heights(layout, DepthMap(grid=GRID, values=coarse), GRID)
    assert heights.down == pytest.approx(scene.room.cam_to_floor, abs=1e-6)
    assert heights.up == pytest.approx(scene.room.cam_to_ceil, abs=1e-6)


def test_sample_bilinear_invalid_aware():
    v = np.zeros((4, 4))
    v[1, 1] = 2.0
    v[1, 2] = 4.0
    # midpoint between two valid centers
    assert sample_bilinear(v, 1.5, 2.0) == pytest.approx(3.0)
    # one neighbor invalid: weights renormalize to the valid one
    v[1, 2] = 0.0
    assert sample_bilinear(v, 1.5, 2.0) == pytest.approx(2.0)
    assert sample_bilinear(np.zeros((4, 4)), 1.5, 1.5) == 0.0


# --- region classification --------------------------------------------------


def test_classify_rows_extremes():
    scene = make_scene(3)
    region = classify_regions(layout_for(scene), GRID)
    assert np.all(region[0] == CEILING)
    assert np.all(region[-1] == FLOOR)


def test_classify_boundary_tie_is_wall():
    h, w = 64, 128
    grid = GridSpec(width=w, height=h)
    layout = LayoutMap(
        ceil_rows=np.full(w, 10.5),  # exactly a pixel-center row
        floor_rows=np.full(w, 50.5),
        corner_prob=np.zeros(w),
    )
    region = classify_regions(layout, grid)
    assert np.all(region[10] == WALL)
    assert np.all(region[50] == WALL)
    assert np.all(region[9] == CEILING)
    assert np.all(region[51] == FLOOR)


# --- background depth -------------------------------------------------------


def test_nadir_formulas():
    assert floor_depth(np.pi / 2, 1.5, "exact") == pytest.approx(1.5, abs=1e-15)
    assert floor_depth(np.pi / 2, 1.5, "paper-literal") == pytest.approx(3.0 / np.pi, abs=1e-12)
    assert wall_depth(0.0, 2.7, "exact") == 2.7
    assert wall_depth(0.0, 2.7, "paper-literal") == 2.7


def test_background_matches_raycast_oracle():
    for scene in mixed_scenes(6, seed0=20):
        layout = layout_for(scene)
        bg = resolve_background_depth(layout, scene.room.heights, GRID, mode="exact")
        oracle = raycast_depth(scene, GRID, include_foreground=False)
        rmse = np.sqrt(np.mean((bg.values - oracle.values) ** 2))
        assert rmse <= 1e-4


def test_paper_literal_lower_bounds_exact_on_caps():
    # d = h/|lat| underestimates d = h/sin|lat| since sin x <= x on (0, pi/2]
    scene = make_scene(9)
    layout = layout_for(scene)
    exact = resolve_background_depth(layout, scene.room.heights, GRID, "exact").values
    literal = resolve_background_depth(layout, scene.room.heights, GRID, "paper-literal").values
    region = classify_regions(layout, GRID)
    caps = region != WALL
    assert np.all(literal[caps] <= exact[caps])
    # ratio approaches 1 toward the horizon, 2/pi at the poles
    ratios = literal[caps] / exact[caps]
    assert ratios.min() >= 2.0 / np.pi - 1e-12
    assert ratios.max() <= 1.0
    assert ratios.max() > 0.95


def test_wall_depth_constant_at_equator_increasing_in_lat():
    scene = make_scene(4)
    layout = layout_for(scene)
    bg = resolve_background_depth(layout, scene.room.heights, GRID).values
    region = classify_regions(layout, GRID)
    h = GRID.height
    for col in (0, 64, 131, 200):
        rows = np.nonzero(region[:, col] == WALL)[0]
        vals = bg[rows, col]
        upper = vals[rows < h / 2]  # above the horizon: |lat| shrinks downward
        lower = vals[rows >= h / 2]  # below: |lat| grows downward
        assert np.all(np.diff(upper) < 0)
        assert np.all(np.diff(lower) > 0)
        # the two rows straddling the equator share |lat|, hence depth
        assert upper[-1] == pytest.approx(lower[0], rel=1e-12)


def test_scale_equivariance():
    scene = make_scene(6)
    layout = layout_for(scene)
    h1 = scene.room.heights
    k = 2.75
    h2 = CameraHeights(up=k * h1.up, down=k * h1.down)
    # scaling heights alone does not preserve the layout; rebuild a scaled room
    scaled_layout = room_to_layout(
        type(scene.room)(scene.room.vertices * k, k * h1.down, k * h1.up), GRID
    )
    np.testing.assert_allclose(scaled_layout.floor_rows, layout.floor_rows, atol=1e-9)
    bg1 = resolve_background_depth(layout, h1, GRID).values
    bg2 = resolve_background_depth(scaled_layout, h2, GRID).values
    np.testing.assert_allclose(bg2, k * bg1, rtol=1e-12)


def test_background_all_positive():
    for scene in mixed_scenes(4, seed0=30):
        layout = layout_for(scene)
        for mode in ("exact", "paper-literal"):
            bg = resolve_background_depth(layout, scene.room.heights, GRID, mode)
            assert np.all(bg.values > 0)
