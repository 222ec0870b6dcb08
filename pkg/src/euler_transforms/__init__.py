"""Euler-characteristic integral transforms of planar constructible functions."""
from .euler_core import (
    CircularProfile,
    GridFunction,
    GridSpec,
    IntervalProfile,
    RealGridFunction,
    circle_integral_ceil,
    circle_integral_floor,
    contour_euler_integral,
    euler_char,
    euler_integral,
    excursion_mask,
    real_integral_ceil,
    real_integral_floor,
    segment_euler_integral,
)
from .geometry import (
    CriticalPoint,
    Direction,
    Polygon,
    Scene,
    distance_critical_points,
    height_critical_points,
    rasterize,
    scene_eval,
)
from .index import ball_bessel_closed_form, bessel_index, bessel_index_split, fourier_index
from .pipeline import count_targets, discriminate, find_local_minima, localize
from .transforms import (
    NormProfile,
    SvaFamily,
    TransformField,
    bessel_transform,
    bessel_transform_raster,
    contour_sample,
    fourier_profile,
    fourier_transform,
    sva_transform,
)

__version__ = "0.1.0"
