"""File formats: series CSV, graph and parameter JSON, spectra tables."""

from gimodels.io.files import (
    coherence_frame,
    grid_frame,
    parse_edges,
    read_fit_json,
    read_graph_json,
    read_graphs_file,
    read_series_csv,
    read_var_json,
    write_grid_csv,
    write_json,
    write_series_csv,
)

__all__ = [
    "coherence_frame",
    "grid_frame",
    "parse_edges",
    "read_fit_json",
    "read_graph_json",
    "read_graphs_file",
    "read_series_csv",
    "read_var_json",
    "write_grid_csv",
    "write_json",
    "write_series_csv",
]
