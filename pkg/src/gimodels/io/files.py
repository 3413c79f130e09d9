"""
Readers and writers for the documented file schemas.

Series CSV    header row of variable names, one row per time point, no gaps.
Graph JSON    {"d": int, "edges": [[a, b], ...]}; a graphs file is a JSON
              array of such objects.
VAR JSON      {"d", "p", "a": [a(1), ..., a(p)], "sigma", "labels"?}.
Grid CSV      freq_index, lambda, a, b, re, im (every entry of every
              frequency) with a JSON sidecar {d, N, taper}.
Pair CSV      freq_index, lambda, a, b, re, im, abs for a < b and
              frequencies 0..N/2, used for coherence and partial coherence.

Floats are written with Python's shortest round-trip repr.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd

from gimodels.core.graph import UndirectedGraph
from gimodels.core.params import GIParams, VarParams
from gimodels.errors import ArgumentError, DataError
from gimodels.spectral.grid import SpectralGrid
from gimodels.spectral.series import TimeSeries
from gimodels.spectral.taper import TaperSpec
from gimodels.spectral.transforms import PairGrids

PathLike = Union[str, Path]

logger = logging.getLogger(__name__)


# ----------------------------
# Series
# ----------------------------

def read_series_csv(path: PathLike) -> TimeSeries:
    """
    Read a T x d series. Unparsable or missing cells raise DataError citing
    the file line (header is line 1) and the column name.
    """
    path = Path(path)
    try:
        raw = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    except FileNotFoundError as exc:
        raise DataError(f"Series file not found: {path}") from exc
    except pd.errors.EmptyDataError as exc:
        raise DataError(f"{path}: file is empty") from exc
    except pd.errors.ParserError as exc:
        raise DataError(f"{path}: {exc}") from exc
    if raw.shape[1] == 0 or raw.shape[0] == 0:
        raise DataError(f"{path}: no data rows below the header")

    values = np.empty(raw.shape)
    for j, col in enumerate(raw.columns):
        cells = raw[col].str.strip()
        parsed = pd.to_numeric(cells, errors="coerce")
        bad = np.flatnonzero(parsed.isna().to_numpy())
        if bad.size:
            i = int(bad[0])
            what = "missing value" if cells.iloc[i] in ("", "nan", "NaN", "NA") else (
                f"non-numeric value {cells.iloc[i]!r}"
            )
            raise DataError(f"{path}: {what} at row {i + 2}, column {j + 1} ({col!r})")
        # to_numeric is only a validity check; float() parses repr output exactly
        values[:, j] = cells.astype(float).to_numpy()

    logger.debug(f"Read {raw.shape[0]} x {raw.shape[1]} series from {path}")
    return TimeSeries(values, tuple(str(c) for c in raw.columns))


def write_series_csv(X: TimeSeries, path: PathLike) -> None:
    pd.DataFrame(X.data, columns=list(X.labels)).to_csv(path, index=False)
    logger.info(f"Wrote {X.T} rows x {X.d} columns to {path}")


# ----------------------------
# JSON documents
# ----------------------------

def write_json(obj: dict, path: PathLike) -> None:
    Path(path).write_text(json.dumps(obj, indent=2) + "\n", encoding="utf-8")
    logger.info(f"Wrote {path}")


def _load_json(path: PathLike, what: str):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise ArgumentError(f"{what} file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ArgumentError(f"Malformed {what} JSON in {path}: {exc}") from exc


def read_graph_json(path: PathLike) -> UndirectedGraph:
    obj = _load_json(path, "graph")
    if not isinstance(obj, dict):
        raise ArgumentError(f"Graph JSON in {path} must be an object with 'd' and 'edges'")
    return UndirectedGraph.from_dict(obj)


def read_graphs_file(path: PathLike, d: Optional[int] = None) -> list[UndirectedGraph]:
    obj = _load_json(path, "graphs")
    if not isinstance(obj, list) or not obj:
        raise ArgumentError(f"Graphs file {path} must hold a nonempty JSON array of graphs")
    graphs = [UndirectedGraph.from_dict(g) for g in obj]
    if d is not None:
        for G in graphs:
            if G.d != d:
                raise ArgumentError(f"Graph {G} in {path} does not have d={d} vertices")
    return graphs


def parse_edges(text: str, d: int) -> UndirectedGraph:
    """Parse "0-1,1-2"; an empty string means the empty graph."""
    edges = []
    for token in filter(None, (t.strip() for t in text.split(","))):
        try:
            a, b = (int(v) for v in token.split("-"))
        except ValueError as exc:
            raise ArgumentError(f"Edge {token!r} is not of the form a-b") from exc
        edges.append((a, b))
    return UndirectedGraph.from_edges(d, edges)


def read_var_json(path: PathLike) -> tuple[VarParams, tuple[str, ...]]:
    obj = _load_json(path, "VAR parameter")
    if not isinstance(obj, dict):
        raise ArgumentError(f"VAR parameter JSON in {path} must be an object")
    params = VarParams.from_dict(obj)
    labels = tuple(str(v) for v in obj.get("labels", ()))
    if labels and len(labels) != params.d:
        raise ArgumentError(f"{path}: {len(labels)} labels for d={params.d}")
    return params, labels


def read_fit_json(path: PathLike) -> tuple[UndirectedGraph, GIParams, int, tuple[str, ...]]:
    """(graph, gi, N, labels) from a FitResult document."""
    obj = _load_json(path, "fit result")
    try:
        graph = UndirectedGraph.from_dict(obj["spec"]["graph"])
        p = int(obj["spec"]["p"])
        gi = GIParams(d=graph.d, p=p, gamma_inv=np.array(obj["gamma_inv"], dtype=float))
        N = int(obj["N"])
        labels = tuple(str(v) for v in obj.get("labels", ()))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ArgumentError):
            raise
        raise ArgumentError(f"Malformed fit result JSON in {path}: {exc}") from exc
    return graph, gi, N, labels


# ----------------------------
# Spectral tables
# ----------------------------

def grid_frame(f: SpectralGrid) -> pd.DataFrame:
    N, d = f.N, f.d
    j, a, b = np.meshgrid(np.arange(N), np.arange(d), np.arange(d), indexing="ij")
    v = f.values.reshape(-1)
    return pd.DataFrame(
        {
            "freq_index": j.reshape(-1),
            "lambda": f.lambdas[j.reshape(-1)],
            "a": a.reshape(-1),
            "b": b.reshape(-1),
            "re": v.real,
            "im": v.imag,
        }
    )


def write_grid_csv(f: SpectralGrid, path: PathLike, taper: Optional[TaperSpec] = None) -> Path:
    """Write the grid CSV and its sidecar; returns the sidecar path."""
    path = Path(path)
    grid_frame(f).to_csv(path, index=False)
    sidecar = path.with_suffix(".json")
    meta = {"d": f.d, "N": f.N, "taper": (taper or TaperSpec.none()).to_dict()}
    sidecar.write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
    logger.info(f"Wrote spectral grid (d={f.d}, N={f.N}) to {path}")
    return sidecar


def coherence_frame(pairs: PairGrids, N: int) -> pd.DataFrame:
    """Long table of pairwise coherency-type grids over frequencies 0..N/2."""
    half = np.arange(N // 2 + 1)
    lam = 2.0 * np.pi * half / N
    frames = []
    for (a, b), values in sorted(pairs.items()):
        v = np.asarray(values)[: N // 2 + 1]
        frames.append(
            pd.DataFrame(
                {
                    "freq_index": half,
                    "lambda": lam,
                    "a": a,
                    "b": b,
                    "re": v.real + 0.0,  # no negative zeros
                    "im": v.imag + 0.0,
                    "abs": np.abs(v),
                }
            )
        )
    cols = ["freq_index", "lambda", "a", "b", "re", "im", "abs"]
    return pd.concat(frames, ignore_index=True) if frames else pd.DataFrame(columns=cols)
