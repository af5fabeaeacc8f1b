"""Sweep engine: Monte Carlo ensembles versus analytical predictions.

A sweep walks a grid of degree models, and at every grid point builds a
few graph realizations, runs many spreading trials with uniformly random
seed nodes, and writes empirical and predicted columns side by side to
CSV.  Every random stream is derived from (master seed, grid index, trial
index), so a sweep is bit-reproducible and trials are independent, which
also makes them safe to run concurrently.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .analytics import (
    ConvergenceError,
    emergence_probability,
    jacobian,
    size_heuristic,
    spectral_radius,
)
from .degree_models import ClusterTunable, DoublyPoisson, JointDegreeModel
from .graph_gen import assemble, sample_degree_sequence
from .spread_sim import SimulationOutcome, StrainParams, classify, simulate

__all__ = [
    "SweepPoint",
    "SweepConfig",
    "SweepRow",
    "CSV_HEADER",
    "doubly_poisson_grid",
    "cluster_tunable_grid",
    "empirical_estimates",
    "run_sweep",
    "rows_to_csv",
    "rows_from_csv",
]

CSV_HEADER = [
    "grid_param", "lambda_s", "lambda_t", "c", "n", "trials",
    "rho_J", "pe_pred", "pe_emp", "size_pred", "size_emp",
    "trials_epidemic", "error",
]

# Sub-stream tags so graph building and trials never share a generator.
_GRAPH_STREAM = 0
_TRIAL_STREAM = 1


@dataclass(frozen=True)
class SweepPoint:
    """One grid point: the swept scalar and the model it selects."""

    grid_param: float
    model: JointDegreeModel


@dataclass(frozen=True)
class SweepConfig:
    points: tuple[SweepPoint, ...]
    params: StrainParams
    n: int
    trials: int
    frac_threshold: float = 0.05
    seed: int = 0
    graphs_per_point: int = 10
    seed_strain: int = 1

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if not self.points:
            raise ValueError("sweep grid must be nonempty")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.n < 10:
            raise ValueError("n must be at least 10")
        if not 0.0 < self.frac_threshold < 1.0:
            raise ValueError("frac_threshold must lie strictly between 0 and 1")
        if self.graphs_per_point < 1:
            raise ValueError("graphs_per_point must be at least 1")
        if self.seed_strain not in (1, 2):
            raise ValueError("seed_strain must be 1 or 2")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")


@dataclass(frozen=True)
class SweepRow:
    """One CSV row; lambda columns carry the model's mean single-edge and
    triangle counts, c only applies to the cluster-tunable family."""

    grid_param: float
    lambda_s: float
    lambda_t: float
    c: float | None
    n: int
    trials: int
    rho_J: float
    pe_pred: float
    pe_emp: float
    size_pred: float
    size_emp: float | None
    trials_epidemic: int
    error: str = ""


def doubly_poisson_grid(lams: Iterable[float]) -> tuple[SweepPoint, ...]:
    """Grid over lambda with lambda_s = lambda_t = lambda."""
    return tuple(SweepPoint(float(l), DoublyPoisson(float(l), float(l))) for l in lams)


def cluster_tunable_grid(lams: Iterable[float], c: float) -> tuple[SweepPoint, ...]:
    """Grid over the scale lambda at a fixed clustering knob c."""
    return tuple(SweepPoint(float(l), ClusterTunable(float(l), float(c))) for l in lams)


def empirical_estimates(outcomes: Sequence[SimulationOutcome], n: int,
                        frac_threshold: float) -> tuple[float, float | None]:
    """Fraction of trials classified epidemic, and the conditional mean
    infected fraction over those trials (None when no trial qualified)."""
    if not outcomes:
        raise ValueError("need at least one outcome")
    epidemic_sizes = [
        o.total_infected / n for o in outcomes if classify(o, n, frac_threshold)
    ]
    pe_emp = len(epidemic_sizes) / len(outcomes)
    size_emp = float(np.mean(epidemic_sizes)) if epidemic_sizes else None
    return pe_emp, size_emp


def _trial_split(trials: int, graphs: int) -> list[int]:
    base, extra = divmod(trials, graphs)
    return [base + (1 if i < extra else 0) for i in range(graphs)]


def run_sweep(config: SweepConfig) -> list[SweepRow]:
    """Run the full grid; analytics failures mark the row instead of aborting."""
    rows = []
    for gp, point in enumerate(config.points):
        rho = pe_pred = size_pred = float("nan")
        error = ""
        try:
            rho = spectral_radius(jacobian(point.model, config.params))
            solution = emergence_probability(point.model, config.params)
            pe_pred = solution.prob_emergence[config.seed_strain - 1]
            size_pred = size_heuristic(point.model, config.params)
        except (ValueError, ConvergenceError) as exc:
            error = f"{type(exc).__name__}: {exc}"

        outcomes: list[SimulationOutcome] = []
        trial = 0
        for rep, quota in enumerate(_trial_split(config.trials, config.graphs_per_point)):
            graph_rng = np.random.default_rng(
                [config.seed, gp, _GRAPH_STREAM, rep]
            )
            seq = sample_degree_sequence(point.model, config.n, graph_rng)
            graph = assemble(seq, graph_rng)
            for _ in range(quota):
                trial_rng = np.random.default_rng(
                    [config.seed, gp, _TRIAL_STREAM, trial]
                )
                seed_node = int(trial_rng.integers(config.n))
                outcomes.append(
                    simulate(graph, config.params, seed_node, config.seed_strain, trial_rng)
                )
                trial += 1
        pe_emp, size_emp = empirical_estimates(outcomes, config.n, config.frac_threshold)
        trials_epidemic = sum(
            classify(o, config.n, config.frac_threshold) for o in outcomes
        )

        mom = point.model.moments()
        rows.append(SweepRow(
            grid_param=point.grid_param,
            lambda_s=mom.mean_s,
            lambda_t=mom.mean_t,
            c=point.model.c if isinstance(point.model, ClusterTunable) else None,
            n=config.n,
            trials=len(outcomes),
            rho_J=rho,
            pe_pred=pe_pred,
            pe_emp=pe_emp,
            size_pred=size_pred,
            size_emp=size_emp,
            trials_epidemic=trials_epidemic,
            error=error,
        ))
    return rows


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return "NaN" if math.isnan(value) else repr(value)
    return str(value)


def rows_to_csv(rows: Sequence[SweepRow], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for r in rows:
            writer.writerow([
                _fmt(r.grid_param), _fmt(r.lambda_s), _fmt(r.lambda_t), _fmt(r.c),
                _fmt(r.n), _fmt(r.trials), _fmt(r.rho_J), _fmt(r.pe_pred),
                _fmt(r.pe_emp), _fmt(r.size_pred), _fmt(r.size_emp),
                _fmt(r.trials_epidemic), r.error,
            ])


def rows_from_csv(path) -> list[SweepRow]:
    def opt_float(text: str) -> float | None:
        return None if text == "" else float(text)

    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != CSV_HEADER:
            raise ValueError(f"unexpected sweep CSV header in {path}")
        for rec in reader:
            rows.append(SweepRow(
                grid_param=float(rec[0]),
                lambda_s=float(rec[1]),
                lambda_t=float(rec[2]),
                c=opt_float(rec[3]),
                n=int(rec[4]),
                trials=int(rec[5]),
                rho_J=float(rec[6]),
                pe_pred=float(rec[7]),
                pe_emp=float(rec[8]),
                size_pred=float(rec[9]),
                size_emp=opt_float(rec[10]),
                trials_epidemic=int(rec[11]),
                error=rec[12],
            ))
    return rows
