"""
Backward warping of the centerview through disparity fields, plus synthetic scenes
"""

from .disparity import D_MAX, DisparityField, WarpGradient
from .scenes import (
    SyntheticScene,
    multiscale_texture,
    plane_scene,
    ramp_texture,
    refocus_scene,
    scene_suite,
    smooth_texture,
    two_plane_scene,
)
from .warp import (
    render_lf,
    render_views,
    warp_consistency_grad,
    warp_consistency_sample,
    warp_view,
    warp_view_grad,
)

__all__ = [
    "D_MAX",
    "DisparityField",
    "SyntheticScene",
    "WarpGradient",
    "multiscale_texture",
    "plane_scene",
    "ramp_texture",
    "refocus_scene",
    "render_lf",
    "render_views",
    "scene_suite",
    "smooth_texture",
    "two_plane_scene",
    "warp_consistency_grad",
    "warp_consistency_sample",
    "warp_view",
    "warp_view_grad",
]
