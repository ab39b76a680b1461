"""Python bindings of the road topology toolkit."""

from ._core import (  # noqa: F401
    GridSpec,
    LaneGraph,
    MassFunction,
    NoiseSpec,
    RtkError,
    SceneSpec,
    baseline,
    cli,
    complexity_bucket,
    decode,
    ds_combine,
    encode,
    evaluate,
    generate_scene,
    ground_truth,
    mae,
    match_keypoints,
    occupancy_value,
    prune_graph,
    rasterize,
    ssim,
    structurally_equal,
)

TEMPLATES = ("straight", "curve", "fork", "lane_split", "four_way", "u_turn")
