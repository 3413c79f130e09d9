"""
BIC scoring and exhaustive (order, graph) model search.

Every requested (p, G) pair is fitted independently; the report is assembled
by a pure sort over the fitted rows, so the ranking does not depend on the
order in which concurrent fits finish.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import numpy as np
import pandas as pd

from gimodels.core.graph import (
    DEFAULT_ENUMERATION_CAP,
    ModelSpec,
    UndirectedGraph,
    enumerate_graphs,
)
from gimodels.core.params import param_count
from gimodels.errors import (
    ArgumentError,
    DegeneracyError,
    NumericalError,
    SelectionError,
)
from gimodels.fit.estimate import FitOptions, FitResult, fit_gi
from gimodels.spectral.series import TimeSeries

PathLike = Union[str, Path]

logger = logging.getLogger(__name__)

INDISTINGUISHABLE_BIC = 2.0


def bic(fit: FitResult, T: int, literal: bool = False) -> float:
    """
    T log det Sigma_hat + log(T) q, with q = param_count(p, G).

    literal=True scores T det Sigma_hat + log(T) q instead.
    """
    if not fit.converged:
        raise ArgumentError(f"Cannot score unconverged fit of {fit.spec.graph} p={fit.spec.p}")
    if T < 2:
        raise ArgumentError(f"T must be >= 2, got {T}")
    sign, logdet = np.linalg.slogdet(fit.var.sigma)
    if sign <= 0:
        raise DegeneracyError("Fitted innovation covariance is not positive definite")
    q = param_count(fit.spec.p, fit.spec.graph)
    fit_term = T * np.exp(logdet) if literal else T * logdet
    return float(fit_term + np.log(T) * q)


def _finite_or_none(x: float) -> Optional[float]:
    return x if np.isfinite(x) else None


@dataclass(frozen=True)
class ModelRow:
    graph: UndirectedGraph
    p: int
    q: int
    order: int  # position in the requested lattice
    bic: float = float("nan")
    loglik: float = float("nan")
    converged: bool = False
    cycles: int = 0
    error: str = ""

    @property
    def sort_key(self) -> tuple:
        if self.converged:
            return (0, self.bic, self.q, self.order)
        return (1, 0.0, 0, self.order)

    def to_dict(self) -> dict:
        return {
            "graph": self.graph.to_dict(),
            "edges": str(self.graph),
            "p": self.p,
            "bic": _finite_or_none(self.bic),
            "q": self.q,
            "loglik": _finite_or_none(self.loglik),
            "converged": self.converged,
            "cycles": self.cycles,
            "error": self.error,
        }


@dataclass(frozen=True)
class SelectionReport:
    rows: tuple[ModelRow, ...]
    T: int
    d: int
    labels: tuple[str, ...] = ()
    literal: bool = False
    delta: float = field(default=INDISTINGUISHABLE_BIC)
    # within-delta set of the full lattice, kept when rows are truncated by top()
    kept_within: Optional[tuple[ModelRow, ...]] = field(default=None, repr=False)

    @property
    def ranked(self) -> list[ModelRow]:
        return [r for r in self.rows if r.converged]

    @property
    def best(self) -> ModelRow:
        ranked = self.ranked
        if not ranked:
            raise SelectionError("No converged model in the report")
        return ranked[0]

    def within(self, delta: Optional[float] = None) -> list[ModelRow]:
        """Converged models whose BIC is within delta of the best."""
        if delta is None and self.kept_within is not None:
            return list(self.kept_within)
        delta = self.delta if delta is None else delta
        cut = self.best.bic + delta
        return [r for r in self.ranked if r.bic <= cut]

    def top(self, k: int) -> "SelectionReport":
        """Keep the k best rows; k <= 0 keeps everything."""
        if k <= 0:
            return self
        kept = tuple(self.within()) if self.ranked else ()
        return SelectionReport(
            self.rows[:k], self.T, self.d, self.labels, self.literal, self.delta, kept
        )

    def to_frame(self) -> pd.DataFrame:
        cols = ["rank", "p", "edges", "bitmask", "q", "bic", "loglik", "converged", "cycles", "error"]
        data = [
            {
                "rank": i + 1 if r.converged else None,
                "p": r.p,
                "edges": ";".join(f"{a}-{b}" for a, b in r.graph.sorted_edges()),
                "bitmask": r.graph.bitmask,
                "q": r.q,
                "bic": r.bic,
                "loglik": r.loglik,
                "converged": r.converged,
                "cycles": r.cycles,
                "error": r.error,
            }
            for i, r in enumerate(self.rows)
        ]
        frame = pd.DataFrame(data, columns=cols)
        frame["rank"] = frame["rank"].astype("Int64")
        return frame

    def to_dict(self) -> dict:
        out = {
            "data": {"T": self.T, "d": self.d, "labels": list(self.labels)},
            "criterion": "T*det(Sigma)+log(T)*q" if self.literal else "T*logdet(Sigma)+log(T)*q",
            "rows": [r.to_dict() for r in self.rows],
        }
        if self.ranked:
            out["best"] = self.best.to_dict()
            out["within"] = {
                "delta": self.delta,
                "models": [r.to_dict() for r in self.within()],
            }
        return out

    def to_json(self, path: PathLike) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n", encoding="utf-8")

    def to_csv(self, path: PathLike) -> None:
        self.to_frame().to_csv(path, index=False)


# ----------------------------
# Search
# ----------------------------

def _fit_row(X: TimeSeries, spec: ModelSpec, order: int, opts: FitOptions, literal: bool) -> ModelRow:
    q = param_count(spec.p, spec.graph)
    if X.T <= X.d * (spec.p + 1):
        message = (
            f"too few observations for p={spec.p}: "
            f"T={X.T} must exceed d(p+1)={X.d * (spec.p + 1)}"
        )
        logger.warning(f"Skipping {spec.graph} p={spec.p}: {message}")
        return ModelRow(spec.graph, spec.p, q, order, error=message)
    try:
        fit = fit_gi(X, spec, opts)
    except NumericalError as exc:
        logger.warning(f"Skipping {spec.graph} p={spec.p}: {exc}")
        return ModelRow(spec.graph, spec.p, q, order, error=str(exc))
    if not fit.converged:
        logger.warning(f"Not ranking {spec.graph} p={spec.p}: no convergence in {fit.cycles} cycles")
        return ModelRow(spec.graph, spec.p, q, order, loglik=fit.loglik, cycles=fit.cycles)
    score = bic(fit, X.T, literal)
    logger.info(f"{spec.graph} p={spec.p}: BIC={score:.6g} q={q} cycles={fit.cycles}")
    return ModelRow(
        spec.graph, spec.p, q, order,
        bic=score, loglik=fit.loglik, converged=True, cycles=fit.cycles,
    )


def select_models(
    X: TimeSeries,
    p_range: Iterable[int],
    graphs: Optional[Sequence[UndirectedGraph]] = None,
    opts: Optional[FitOptions] = None,
    jobs: int = 1,
    literal: bool = False,
    cap: int = DEFAULT_ENUMERATION_CAP,
    delta: float = INDISTINGUISHABLE_BIC,
) -> SelectionReport:
    """
    Fit every (p, G) pair and rank converged fits by (BIC, q, lattice order).

    The lattice is ordered by p first, then by the position of G in `graphs`
    (bitmask order when all graphs are enumerated).
    """
    opts = opts or FitOptions()
    orders = sorted(set(int(p) for p in p_range))
    if not orders:
        raise ArgumentError("p_range must not be empty")
    if graphs is None:
        graphs = enumerate_graphs(X.d, cap)
    graphs = list(graphs)
    if not graphs:
        raise ArgumentError("At least one graph is required")
    for G in graphs:
        if G.d != X.d:
            raise ArgumentError(f"Graph {G} does not match series dimension d={X.d}")
    if jobs < 1:
        raise ArgumentError(f"jobs must be >= 1, got {jobs}")

    specs = [ModelSpec(p, G) for p in orders for G in graphs]
    logger.info(f"Fitting {len(specs)} models ({len(orders)} orders x {len(graphs)} graphs)")

    def run(item: tuple[int, ModelSpec]) -> ModelRow:
        order, spec = item
        return _fit_row(X, spec, order, opts, literal)

    if jobs == 1:
        rows = [run(item) for item in enumerate(specs)]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(run, enumerate(specs)))

    rows.sort(key=lambda r: r.sort_key)
    report = SelectionReport(tuple(rows), X.T, X.d, X.labels, literal, delta)
    if not report.ranked:
        raise SelectionError(
            f"None of the {len(rows)} models converged; see the log for per-model diagnostics"
        )
    best = report.best
    logger.info(f"Best model: {best.graph} p={best.p} BIC={best.bic:.6g}")
    return report
