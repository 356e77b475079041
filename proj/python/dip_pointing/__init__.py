"""Pointing-gesture area of interest, object localization and approach simulation."""

from ._core import (
    DipError,
    Point2,
    Rect,
    Triangle,
    angular_difference,
    build_area_of_interest,
    circular_variance,
    extend_pointing_segment,
    mean_angle,
    point_in_triangle,
    pointing_angle,
    render_scene_frame,
    run_frame,
    simulate,
)

__all__ = [
    "DipError",
    "Point2",
    "Rect",
    "Triangle",
    "angular_difference",
    "build_area_of_interest",
    "circular_variance",
    "extend_pointing_segment",
    "mean_angle",
    "point_in_triangle",
    "pointing_angle",
    "render_scene_frame",
    "run_frame",
    "simulate",
]
