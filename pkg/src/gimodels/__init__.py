"""
Graphical interaction models for stationary multivariate time series.

Fits GI(p,G) / VAR(p,G) models by minimizing Whittle's likelihood with an
alternating-projection algorithm and selects (order, graph) pairs by BIC.
"""

__version__ = "0.1.0"
