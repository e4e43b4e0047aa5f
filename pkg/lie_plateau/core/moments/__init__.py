"""
Second-moment operators of Haar brickwork circuits and depth estimates
"""

from .operators import (
    SU4_BLOCK,
    ReducedMomentOperator,
    DeviationOperator,
    build_layer_moment,
    build_group_moment,
    group_weights,
    swap_counts,
)
from .depth import (
    lambda_max,
    depth_for_epsilon,
    variance_gap_bound,
    ExpressivenessReport,
    expressiveness_report,
)

__all__ = [
    'SU4_BLOCK',
    'ReducedMomentOperator',
    'DeviationOperator',
    'build_layer_moment',
    'build_group_moment',
    'group_weights',
    'swap_counts',
    'lambda_max',
    'depth_for_epsilon',
    'variance_gap_bound',
    'ExpressivenessReport',
    'expressiveness_report',
]
