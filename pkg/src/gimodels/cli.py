"""
Command-line entry point (`gimodels`).

    gimodels fit      series.csv --p 1 --edges 0-1,1-2 --out results/
    gimodels select   series.csv --p-min 1 --p-max 3 --all-graphs --out results/
    gimodels spectra  series.csv --bandwidth 11 --out results/
    gimodels simulate params.json --T 2000 --seed 1 --out series.csv
    gimodels pcoh     results/fit.json --out results/pcoh_fit.csv

Values not given on the command line come from config.toml (see
gimodels.config). Exit codes: 0 ok, 2 input error, 3 numerical error,
4 non-convergence.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from gimodels import __version__
from gimodels.config import RunConfig, load_config
from gimodels.core.graph import ModelSpec, UndirectedGraph, enumerate_graphs
from gimodels.core.params import apply_zero_pattern
from gimodels.errors import ArgumentError, ConvergenceError, GIModelError
from gimodels.fit.estimate import FitOptions, fit_gi
from gimodels.io.files import (
    coherence_frame,
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
from gimodels.logs import configure_logging
from gimodels.select.bic import select_models
from gimodels.spectral.grid import data_grid_size, periodogram, smooth_periodogram
from gimodels.spectral.series import demean
from gimodels.spectral.taper import TAPER_KINDS, TaperSpec
from gimodels.spectral.transforms import (
    coherence,
    inverse_spectrum_from_gi,
    partial_coherence,
    partial_coherence_from_inverse,
    spectrum_from_gi,
)
from gimodels.varmod.var import simulate_var, var_spectrum

logger = logging.getLogger("gimodels.cli")


def _pick(value, default):
    return default if value is None else value


# ----------------------------
# Shared option handling
# ----------------------------

def _taper(args: argparse.Namespace, cfg: RunConfig) -> TaperSpec:
    kind = _pick(args.taper, cfg.fit.taper.kind)
    fraction = _pick(args.taper_fraction, cfg.fit.taper.fraction)
    return TaperSpec.none() if kind == "none" else TaperSpec(kind=kind, fraction=fraction)


def _fit_options(args: argparse.Namespace, cfg: RunConfig) -> FitOptions:
    return FitOptions(
        tolerance=_pick(args.tol, cfg.fit.tolerance),
        max_cycles=_pick(args.max_cycles, cfg.fit.max_cycles),
        N=_pick(args.grid, cfg.fit.grid),
        taper=_taper(args, cfg),
        demean=cfg.fit.demean and not args.no_demean,
    )


def _out_dir(args: argparse.Namespace) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _graph_for(args: argparse.Namespace, d: int) -> UndirectedGraph:
    if args.graph_json:
        G = read_graph_json(args.graph_json)
        if G.d != d:
            raise ArgumentError(f"Graph in {args.graph_json} has d={G.d}, series has d={d}")
        return G
    if args.edges is not None:
        return parse_edges(args.edges, d)
    return UndirectedGraph.complete(d)


# ----------------------------
# Commands
# ----------------------------

def cmd_fit(args: argparse.Namespace, cfg: RunConfig) -> int:
    X = read_series_csv(args.csv)
    spec = ModelSpec(args.p, _graph_for(args, X.d))
    opts = _fit_options(args, cfg)
    result = fit_gi(X, spec, opts)

    out = _out_dir(args)
    write_json(result.to_dict(include_asymptotics=args.asymptotics), out / "fit.json")

    f = var_spectrum(result.var, result.N)
    write_grid_csv(f, out / "fit_spectrum.csv", opts.taper)
    pcoh = partial_coherence_from_inverse(
        inverse_spectrum_from_gi(apply_zero_pattern(result.gi, spec.graph), result.N)
    )
    coherence_frame(coherence(f), result.N).to_csv(out / "fit_coherence.csv", index=False)
    coherence_frame(pcoh, result.N).to_csv(out / "fit_pcoh.csv", index=False)

    print(
        f"GI({spec.p}, {spec.graph}): loglik={result.loglik!r} cycles={result.cycles} "
        f"converged={result.converged}"
    )
    if not result.converged:
        raise ConvergenceError(
            f"Fit did not converge in {result.cycles} cycles "
            f"(moment={result.residuals.moment_residual:.3e}, "
            f"constraint={result.residuals.constraint_residual:.3e}); results written anyway"
        )
    return 0


def cmd_select(args: argparse.Namespace, cfg: RunConfig) -> int:
    X = read_series_csv(args.csv)
    p_min = _pick(args.p_min, cfg.select.p_min)
    p_max = _pick(args.p_max, cfg.select.p_max)
    if p_min < 0 or p_max < p_min:
        raise ArgumentError(f"Need 0 <= p-min <= p-max, got {p_min}..{p_max}")
    if args.graphs_file:
        graphs = read_graphs_file(args.graphs_file, X.d)
    else:
        graphs = enumerate_graphs(X.d, _pick(args.max_vertices, cfg.select.max_vertices))

    report = select_models(
        X,
        range(p_min, p_max + 1),
        graphs=graphs,
        opts=_fit_options(args, cfg),
        jobs=_pick(args.jobs, cfg.select.jobs),
        literal=args.bic_literal or cfg.select.bic_literal,
        delta=cfg.select.within,
    )
    report = report.top(_pick(args.top, cfg.select.top))
    within = report.within()

    out = _out_dir(args)
    report.to_csv(out / "selection.csv")
    report.to_json(out / "selection.json")

    best = report.best
    print(f"best: p={best.p} {best.graph} BIC={best.bic!r} q={best.q}")
    print(f"within {report.delta:g} BIC of best: {len(within)} model(s)")
    for row in within:
        print(f"  p={row.p} {row.graph} BIC={row.bic!r}")
    return 0


def cmd_spectra(args: argparse.Namespace, cfg: RunConfig) -> int:
    X = read_series_csv(args.csv)
    if cfg.fit.demean and not args.no_demean:
        X = demean(X)
    taper = _taper(args, cfg)
    bandwidth = _pick(args.bandwidth, cfg.bandwidth)
    N = _pick(args.grid, data_grid_size(X.T))

    f = smooth_periodogram(periodogram(X, taper, N), bandwidth)
    out = _out_dir(args)
    write_grid_csv(f, out / "spectrum.csv", taper)
    coherence_frame(coherence(f), f.N).to_csv(out / "coherence.csv", index=False)

    if bandwidth == 1 or bandwidth < X.d:
        logger.warning(
            f"Bandwidth {bandwidth} leaves the smoothed spectral matrix rank deficient "
            f"for d={X.d}; partial coherence not written"
        )
    else:
        coherence_frame(partial_coherence(f), f.N).to_csv(out / "pcoh.csv", index=False)
    print(f"spectra written to {out} (N={f.N}, bandwidth={bandwidth})")
    return 0


def cmd_simulate(args: argparse.Namespace, cfg: RunConfig) -> int:
    params, labels = read_var_json(args.params_json)
    X = simulate_var(
        params,
        T=_pick(args.T, cfg.simulate.T),
        burnin=_pick(args.burnin, cfg.simulate.burnin),
        seed=_pick(args.seed, cfg.simulate.seed),
        labels=labels,
    )
    if args.out:
        write_series_csv(X, args.out)
    else:
        write_series_csv(X, sys.stdout)
    return 0


def cmd_pcoh(args: argparse.Namespace, cfg: RunConfig) -> int:
    graph, gi, N, _ = read_fit_json(args.fit_json)
    N = _pick(args.grid, N)
    theta = apply_zero_pattern(gi, graph)
    spectrum_from_gi(theta, N)  # rejects parameters without a pd spectrum
    pairs = partial_coherence_from_inverse(inverse_spectrum_from_gi(theta, N))
    frame = coherence_frame(pairs, N)
    frame["edge"] = [graph.has_edge(a, b) for a, b in zip(frame["a"], frame["b"])]
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(out, index=False)
    logger.info(f"Wrote partial coherence of {len(pairs)} pair(s) on N={N} to {out}")
    return 0


# ----------------------------
# Parser
# ----------------------------

def _add_fit_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--taper", choices=TAPER_KINDS, default=None)
    sp.add_argument("--taper-fraction", type=float, default=None)
    sp.add_argument("--tol", type=float, default=None, help="scaled residual tolerance")
    sp.add_argument("--max-cycles", type=int, default=None)
    sp.add_argument("--grid", type=int, default=None, help="model grid size N (even)")
    sp.add_argument("--no-demean", action="store_true", help="series is already centred")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="gimodels",
        description="Fit and select graphical interaction models GI(p,G) for multivariate time series.",
    )
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("--config", default=None, help="config TOML (default: $GIMODELS_CONFIG or ./config.toml)")
    ap.add_argument("--log-level", default=None, help="overrides [logging] level")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("fit", help="fit one GI(p,G) model")
    sp.add_argument("csv")
    sp.add_argument("--p", type=int, required=True)
    graph = sp.add_mutually_exclusive_group()
    graph.add_argument("--edges", default=None, help='e.g. "0-1,1-2"; "" for the empty graph')
    graph.add_argument("--graph-json", default=None)
    _add_fit_flags(sp)
    sp.add_argument("--asymptotics", action="store_true", help="include Lambda and standard errors")
    sp.add_argument("--out", default=".")
    sp.set_defaults(handler=cmd_fit)

    sp = sub.add_parser("select", help="rank (p, G) models by BIC")
    sp.add_argument("csv")
    sp.add_argument("--p-min", type=int, default=None)
    sp.add_argument("--p-max", type=int, default=None)
    graphs = sp.add_mutually_exclusive_group()
    graphs.add_argument("--all-graphs", action="store_true", help="enumerate every graph (default)")
    graphs.add_argument("--graphs-file", default=None, help="JSON array of graphs")
    sp.add_argument("--max-vertices", type=int, default=None, help="enumeration cap on d")
    sp.add_argument("--top", type=int, default=None, help="keep the k best rows (0 keeps all)")
    sp.add_argument("--bic-literal", action="store_true", help="score T*det(Sigma) instead of T*logdet")
    sp.add_argument("--jobs", type=int, default=None)
    _add_fit_flags(sp)
    sp.add_argument("--out", default=".")
    sp.set_defaults(handler=cmd_select)

    sp = sub.add_parser("spectra", help="nonparametric spectra and coherencies")
    sp.add_argument("csv")
    sp.add_argument("--bandwidth", type=int, default=None, help="odd kernel width")
    sp.add_argument("--taper", choices=TAPER_KINDS, default=None)
    sp.add_argument("--taper-fraction", type=float, default=None)
    sp.add_argument("--grid", type=int, default=None, help="grid size N (>= T, even)")
    sp.add_argument("--no-demean", action="store_true")
    sp.add_argument("--out", default=".")
    sp.set_defaults(handler=cmd_spectra)

    sp = sub.add_parser("simulate", help="simulate a Gaussian VAR(p)")
    sp.add_argument("params_json")
    sp.add_argument("--T", type=int, default=None)
    sp.add_argument("--burnin", type=int, default=None)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--out", default=None, help="CSV path (default: stdout)")
    sp.set_defaults(handler=cmd_simulate)

    sp = sub.add_parser("pcoh", help="partial coherence of a fitted model")
    sp.add_argument("fit_json")
    sp.add_argument("--grid", type=int, default=None, help="grid size N (default: the fit's)")
    sp.add_argument("--out", default="pcoh_fit.csv")
    sp.set_defaults(handler=cmd_pcoh)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    configure_logging(cfg.logging, args.log_level)

    try:
        return args.handler(args, cfg)
    except GIModelError as exc:
        logger.debug("command failed", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
