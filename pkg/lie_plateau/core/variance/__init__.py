"""
Exact loss statistics, BP diagnosis and weight-state closed forms
"""

from .exact import (
    IdealContribution,
    VariancePrediction,
    loss_mean,
    loss_variance,
    two_design_variance,
)
from .diagnosis import FamilyPoint, TrendFit, BpDiagnosis, fit_trend, bp_diagnose, evaluate_family
from .weights import WeightVector, weight_vector, weight_state_variance, weight_variance_upper_bound
from .spin import spin_matrices, spin_variance, numerical_spin_variance

__all__ = [
    'IdealContribution',
    'VariancePrediction',
    'loss_mean',
    'loss_variance',
    'two_design_variance',
    'FamilyPoint',
    'TrendFit',
    'BpDiagnosis',
    'fit_trend',
    'bp_diagnose',
    'evaluate_family',
    'WeightVector',
    'weight_vector',
    'weight_state_variance',
    'weight_variance_upper_bound',
    'spin_matrices',
    'spin_variance',
    'numerical_spin_variance',
]
