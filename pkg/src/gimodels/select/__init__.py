"""BIC model selection over orders and graphs."""

from gimodels.select.bic import ModelRow, SelectionReport, bic, select_models

__all__ = ["ModelRow", "SelectionReport", "bic", "select_models"]
