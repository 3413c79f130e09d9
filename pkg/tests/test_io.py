import json

import numpy as np
import pandas as pd
import pytest

from gimodels.core.graph import ModelSpec, UndirectedGraph
from gimodels.errors import ArgumentError, DataError
from gimodels.fit.estimate import fit_gi
from gimodels.io.files import (
    coherence_frame,
    grid_frame,
    parse_edges,
    read_fit_json,
    read_graphs_file,
    read_series_csv,
    read_var_json,
    write_grid_csv,
    write_json,
    write_series_csv,
)
from gimodels.spectral.grid import periodogram
from gimodels.spectral.series import TimeSeries
from gimodels.spectral.transforms import coherence


def test_series_csv_round_trip(tmp_path):
    X = TimeSeries(np.random.default_rng(0).standard_normal((20, 3)), ("p", "q", "r"))
    write_series_csv(X, tmp_path / "x.csv")
    Y = read_series_csv(tmp_path / "x.csv")
    assert Y.labels == ("p", "q", "r")
    np.testing.assert_array_equal(Y.data, X.data)


def test_series_csv_reads_every_digit(tmp_path):
    values = np.array(
        [
            [0.1 + 0.2, 1e-300],
            [np.nextafter(1.0, 2.0), -2.0 / 3.0],
            [5e-324, 1.7976931348623157e308],
        ]
    )
    write_series_csv(TimeSeries(values, ("a", "b")), tmp_path / "x.csv")
    Y = read_series_csv(tmp_path / "x.csv")
    assert Y.data.tobytes() == values.tobytes()


@pytest.mark.parametrize(
    "body, fragment",
    [
        ("a,b\n1,2\n3,x\n", "non-numeric value 'x' at row 3, column 2 ('b')"),
        ("a,b\n1,2\n,4\n", "missing value at row 3, column 1 ('a')"),
        ("a,b\n", "no data rows"),
        ("", "file is empty"),
    ],
)
def test_series_csv_errors(tmp_path, body, fragment):
    path = tmp_path / "bad.csv"
    path.write_text(body)
    with pytest.raises(DataError, match=fragment.replace("(", r"\(").replace(")", r"\)")):
        read_series_csv(path)


def test_series_csv_missing_file(tmp_path):
    with pytest.raises(DataError, match="not found"):
        read_series_csv(tmp_path / "none.csv")


def test_parse_edges():
    G = parse_edges("1-0, 1-2", 3)
    assert G == UndirectedGraph.from_edges(3, [(0, 1), (1, 2)])
    assert parse_edges("", 3).n_edges == 0
    with pytest.raises(ArgumentError, match="form a-b"):
        parse_edges("0:1", 3)
    with pytest.raises(ArgumentError):
        parse_edges("0-3", 3)


def test_graphs_file(tmp_path):
    path = tmp_path / "graphs.json"
    path.write_text(json.dumps([{"d": 3, "edges": []}, {"d": 3, "edges": [[0, 2]]}]))
    graphs = read_graphs_file(path, 3)
    assert [G.n_edges for G in graphs] == [0, 1]
    with pytest.raises(ArgumentError, match="d=4"):
        read_graphs_file(path, 4)
    path.write_text("[]")
    with pytest.raises(ArgumentError, match="nonempty"):
        read_graphs_file(path)


def test_var_json_labels(tmp_path):
    path = tmp_path / "var.json"
    path.write_text(json.dumps({"d": 1, "p": 1, "a": [[[0.3]]], "sigma": [[2.0]], "labels": ["y"]}))
    params, labels = read_var_json(path)
    assert labels == ("y",)
    assert params.sigma[0, 0] == 2.0
    path.write_text(json.dumps({"d": 1, "p": 1, "a": [[[0.3]]], "sigma": [[2.0]], "labels": ["y", "z"]}))
    with pytest.raises(ArgumentError, match="2 labels"):
        read_var_json(path)


def test_fit_json_round_trip(tmp_path, white_noise):
    result = fit_gi(white_noise, ModelSpec(1, UndirectedGraph.empty(2)))
    write_json(result.to_dict(), tmp_path / "fit.json")
    graph, gi, N, labels = read_fit_json(tmp_path / "fit.json")
    assert graph == result.spec.graph
    assert N == result.N
    assert labels == ("u", "v")
    np.testing.assert_array_equal(gi.gamma_inv, result.gi.gamma_inv)


def test_grid_csv_schema(tmp_path, white_noise):
    f = periodogram(white_noise, N=1024)
    sidecar = write_grid_csv(f, tmp_path / "grid.csv")
    frame = pd.read_csv(tmp_path / "grid.csv")
    assert len(frame) == 1024 * 4
    assert json.loads(sidecar.read_text()) == {
        "d": 2, "N": 1024, "taper": {"kind": "none", "fraction": 0.0}
    }
    assert len(grid_frame(f)) == len(frame)


def test_coherence_frame_half_grid(white_noise):
    f = periodogram(white_noise, N=1024)
    frame = coherence_frame(coherence(f), 1024)
    assert len(frame) == 513
    assert frame["lambda"].iloc[-1] == pytest.approx(np.pi)
    assert set(zip(frame["a"], frame["b"])) == {(0, 1)}
    # raw periodogram has rank one at every frequency
    np.testing.assert_allclose(frame["abs"], 1.0, atol=1e-8)
