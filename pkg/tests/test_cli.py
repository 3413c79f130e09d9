import json

import numpy as np
import pandas as pd
import pytest
from conftest import chain_var

from gimodels.cli import main
from gimodels.io.files import write_series_csv
from gimodels.spectral.series import TimeSeries
from gimodels.varmod.var import simulate_var


@pytest.fixture(autouse=True)
def isolated(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("GIMODELS_CONFIG", raising=False)


@pytest.fixture
def chain_csv(tmp_path):
    path = tmp_path / "chain.csv"
    write_series_csv(simulate_var(chain_var(), 600, seed=2), path)
    return path


@pytest.fixture
def toy_csv(tmp_path):
    path = tmp_path / "toy.csv"
    X = TimeSeries(np.random.default_rng(3).standard_normal((300, 2)), ("a", "b"))
    write_series_csv(X, path)
    return path


def test_fit_writes_result(chain_csv, tmp_path):
    out = tmp_path / "res"
    assert main(["fit", str(chain_csv), "--p", "1", "--out", str(out)]) == 0
    obj = json.loads((out / "fit.json").read_text())
    assert obj["converged"] is True
    assert obj["spec"]["graph"]["edges"] == [[0, 1], [0, 2], [1, 2]]
    assert obj["labels"] == ["x0", "x1", "x2"]
    grid = pd.read_csv(out / "fit_spectrum.csv")
    assert list(grid.columns) == ["freq_index", "lambda", "a", "b", "re", "im"]
    assert json.loads((out / "fit_spectrum.json").read_text())["d"] == 3
    assert (out / "fit_pcoh.csv").exists()
    fitted = pd.read_csv(out / "fit_coherence.csv")
    assert list(fitted.columns) == ["freq_index", "lambda", "a", "b", "re", "im", "abs"]
    assert len(fitted) == 3 * (obj["N"] // 2 + 1)
    assert ((fitted["abs"] > 0) & (fitted["abs"] < 1)).all()


def test_fit_with_graph_and_pcoh(chain_csv, tmp_path):
    out = tmp_path / "res"
    assert main(["fit", str(chain_csv), "--p", "1", "--edges", "0-1,1-2", "--out", str(out)]) == 0
    assert main(["pcoh", str(out / "fit.json"), "--out", str(out / "pcoh.csv")]) == 0
    table = pd.read_csv(out / "pcoh.csv")
    assert list(table.columns) == ["freq_index", "lambda", "a", "b", "re", "im", "abs", "edge"]
    constrained = table[(table["a"] == 0) & (table["b"] == 2)]
    assert len(constrained) > 0
    assert (constrained["abs"] == 0.0).all()
    assert not constrained["edge"].any()
    assert (table[table["edge"]]["abs"] > 0).all()


def test_pcoh_of_complete_fit_has_no_forced_zeros(chain_csv, tmp_path):
    out = tmp_path / "res"
    assert main(["fit", str(chain_csv), "--p", "1", "--out", str(out)]) == 0
    assert main(["pcoh", str(out / "fit.json"), "--out", str(out / "pcoh.csv")]) == 0
    table = pd.read_csv(out / "pcoh.csv")
    assert table["edge"].all()
    assert (table["abs"] > 0).all()


def test_fit_graph_json(chain_csv, tmp_path):
    graph = tmp_path / "graph.json"
    graph.write_text(json.dumps({"d": 3, "edges": [[0, 1]]}))
    assert main(["fit", str(chain_csv), "--p", "1", "--graph-json", str(graph)]) == 0
    obj = json.loads((tmp_path / "fit.json").read_text())
    assert obj["spec"]["graph"]["edges"] == [[0, 1]]


def test_non_numeric_cell_is_input_error(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("a,b\n1.0,2.0\n3.0,oops\n5.0,6.0\n")
    assert main(["fit", str(path), "--p", "1"]) == 2
    err = capsys.readouterr().err
    assert "row 3" in err and "column 2" in err


def test_missing_value_is_input_error(tmp_path, capsys):
    path = tmp_path / "gap.csv"
    path.write_text("a,b\n1.0,2.0\n,4.0\n5.0,6.0\n")
    assert main(["fit", str(path), "--p", "0"]) == 2
    assert "missing value" in capsys.readouterr().err


def test_constant_column_is_numerical_error(tmp_path, capsys):
    path = tmp_path / "const.csv"
    x = np.random.default_rng(0).standard_normal((200, 2))
    x[:, 1] = 1.5
    pd.DataFrame(x, columns=["a", "b"]).to_csv(path, index=False)
    assert main(["fit", str(path), "--p", "1"]) == 3
    assert "positive definite" in capsys.readouterr().err


def test_fit_non_convergence_exit_code(chain_csv, tmp_path):
    out = tmp_path / "res"
    code = main([
        "fit", str(chain_csv), "--p", "1", "--edges", "", "--tol", "1e-14",
        "--max-cycles", "1", "--out", str(out),
    ])
    assert code == 4
    assert json.loads((out / "fit.json").read_text())["converged"] is False


def test_select_toy_report(toy_csv, tmp_path, capsys):
    out = tmp_path / "sel"
    args = ["select", str(toy_csv), "--p-min", "1", "--p-max", "1", "--all-graphs"]
    assert main(args + ["--out", str(out)]) == 0
    assert len(pd.read_csv(out / "selection.csv")) == 2
    assert "best:" in capsys.readouterr().out


def test_select_jobs_give_identical_files(toy_csv, tmp_path):
    base = ["select", str(toy_csv), "--p-min", "1", "--p-max", "2"]
    assert main(base + ["--jobs", "1", "--out", str(tmp_path / "one")]) == 0
    assert main(base + ["--jobs", "8", "--out", str(tmp_path / "eight")]) == 0
    for name in ("selection.csv", "selection.json"):
        assert (tmp_path / "one" / name).read_bytes() == (tmp_path / "eight" / name).read_bytes()


def test_select_enumeration_cap(tmp_path, capsys):
    path = tmp_path / "six.csv"
    pd.DataFrame(np.random.default_rng(1).standard_normal((100, 6))).to_csv(path, index=False)
    assert main(["select", str(path), "--all-graphs"]) == 2
    assert "32768" in capsys.readouterr().err


def test_select_graphs_file(toy_csv, tmp_path):
    graphs = tmp_path / "graphs.json"
    graphs.write_text(json.dumps([{"d": 2, "edges": [[0, 1]]}]))
    out = tmp_path / "sel"
    assert main(["select", str(toy_csv), "--p-min", "1", "--p-max", "2",
                 "--graphs-file", str(graphs), "--out", str(out)]) == 0
    assert len(pd.read_csv(out / "selection.csv")) == 2


def test_spectra_outputs(toy_csv, tmp_path):
    out = tmp_path / "spec"
    assert main(["spectra", str(toy_csv), "--bandwidth", "21", "--out", str(out)]) == 0
    grid = pd.read_csv(out / "spectrum.csv")
    assert list(grid.columns) == ["freq_index", "lambda", "a", "b", "re", "im"]
    diag = grid[(grid["a"] == 0) & (grid["b"] == 0)]["re"]
    # white noise: flat at 1/2pi up to sampling error
    assert abs(diag.mean() - 1 / (2 * np.pi)) < 0.03
    assert list(pd.read_csv(out / "pcoh.csv").columns) == [
        "freq_index", "lambda", "a", "b", "re", "im", "abs"
    ]
    assert (out / "coherence.csv").exists()


def test_spectra_bandwidth_one_skips_partial_coherence(toy_csv, tmp_path):
    out = tmp_path / "spec"
    assert main(["spectra", str(toy_csv), "--bandwidth", "1", "--out", str(out)]) == 0
    assert (out / "spectrum.csv").exists()
    assert not (out / "pcoh.csv").exists()


def test_spectra_bandwidth_too_large(toy_csv):
    assert main(["spectra", str(toy_csv), "--bandwidth", "2049"]) == 2


def _write_params(path, a):
    path.write_text(json.dumps({"d": 1, "p": 1, "a": [[[a]]], "sigma": [[1.0]]}))


def test_simulate_reproducible(tmp_path):
    params = tmp_path / "params.json"
    _write_params(params, 0.5)
    for name in ("s1.csv", "s2.csv"):
        assert main(["simulate", str(params), "--T", "50", "--seed", "9", "--out", str(tmp_path / name)]) == 0
    assert (tmp_path / "s1.csv").read_bytes() == (tmp_path / "s2.csv").read_bytes()
    frame = pd.read_csv(tmp_path / "s1.csv")
    assert len(frame) == 50
    assert list(frame.columns) == ["x0"]


def test_simulate_rejects_unstable(tmp_path):
    params = tmp_path / "params.json"
    _write_params(params, 1.0)
    assert main(["simulate", str(params), "--T", "50"]) == 3


def test_pcoh_malformed_json(tmp_path):
    path = tmp_path / "fit.json"
    path.write_text("{not json")
    assert main(["pcoh", str(path)]) == 2
    path.write_text(json.dumps({"spec": {"p": 1}}))
    assert main(["pcoh", str(path)]) == 2
