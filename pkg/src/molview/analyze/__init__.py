"""Interactive analysis: measurements, Kabsch superposition, CE alignment."""

from .align import Alignment, ce_align, kabsch, transform_points
from .measure import measure_angle, measure_distance

__all__ = [
    "measure_distance", "measure_angle", "kabsch", "ce_align",
    "Alignment", "transform_points",
]
