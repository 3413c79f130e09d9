"""Whittle likelihood, gradient, likelihood equations and asymptotics."""

from gimodels.whittle.likelihood import (
    ResidualReport,
    asymptotic_covariance,
    information_matrix,
    likelihood_residuals,
    standard_errors,
    whittle_gradient,
    whittle_loglik,
    whittle_loglik_var,
)

__all__ = [
    "ResidualReport",
    "asymptotic_covariance",
    "information_matrix",
    "likelihood_residuals",
    "standard_errors",
    "whittle_gradient",
    "whittle_loglik",
    "whittle_loglik_var",
]
