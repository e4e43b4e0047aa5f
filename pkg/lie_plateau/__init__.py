"""
LiePlateau - barren plateau prediction from dynamical Lie algebras
Exact loss variances from the DLA structure, checked against Monte Carlo simulation
and brickwork 2-design depth bounds.
"""
__version__ = "1.0.0"
