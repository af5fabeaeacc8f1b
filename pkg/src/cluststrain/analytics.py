"""Branching-process analytics for two-strain spreading on clustered graphs.

Everything here is closed-form or a small fixed-point/eigenvalue problem:
the six triangle-endpoint configuration probabilities, the emergence
probability (smallest nonnegative root of a 4-d monotone fixed point), the
linearization Jacobian whose spectral radius locates the epidemic
threshold, the closed-form threshold for one-step irreversible mutation on
doubly Poisson networks, a bisection for critical model parameters, and the
single-strain collapse used as an epidemic-size heuristic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .degree_models import JointDegreeModel
from .spread_sim import StrainParams

__all__ = [
    "ConfigProbs",
    "EmergenceSolution",
    "ConvergenceError",
    "triangle_config_probs",
    "emergence_probability",
    "jacobian",
    "spectral_radius",
    "one_step_irreversible_rho",
    "critical_parameter",
    "size_heuristic",
    "progeny_mean_matrix",
]

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 10**6


class ConvergenceError(RuntimeError):
    """Fixed-point iteration ran out of its iteration budget."""

    def __init__(self, message: str, iterations: int, residual: float):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual


@dataclass(frozen=True)
class ConfigProbs:
    """Probabilities of the six endpoint configurations of a triangle.

    Row i-1 holds p_{i1}..p_{i6} for a parent carrying strain i: neither
    endpoint infected; one endpoint infected ending as strain 1; both as
    strain 1; one as strain 2; both as strain 2; one of each.  Each row
    sums to 1.
    """

    p: np.ndarray  # shape (2, 6)

    def __post_init__(self):
        p = np.asarray(self.p, dtype=np.float64)
        p.setflags(write=False)
        object.__setattr__(self, "p", p)

    @property
    def delta(self) -> np.ndarray:
        """Mean endpoint counts by acquired strain: Delta_ij = mean number of
        strain-j infections among the two endpoints, given a strain-i parent."""
        d1 = self.p[:, 1] + 2.0 * self.p[:, 2] + self.p[:, 5]
        d2 = self.p[:, 3] + 2.0 * self.p[:, 4] + self.p[:, 5]
        return np.stack([d1, d2], axis=1)


def triangle_config_probs(params: StrainParams) -> ConfigProbs:
    """Exact configuration probabilities for both parent strains.

    Each formula accounts for direct infection of the endpoints by the
    parent plus the one possible second-round infection between endpoints,
    with mutation applied after every transmission.
    """
    t = (params.t1, params.t2)
    mu = params.mu
    t1, t2 = t
    rows = np.empty((2, 6), dtype=np.float64)
    for i in (0, 1):
        ti = t[i]
        mi1, mi2 = mu[i, 0], mu[i, 1]
        rows[i, 0] = (1.0 - ti) ** 2
        rows[i, 1] = 2.0 * ti * mi1 * (1.0 - ti) * (1.0 - t1)
        rows[i, 2] = (ti * mi1) ** 2 + 2.0 * ti * mi1 * (1.0 - ti) * t1 * mu[0, 0]
        rows[i, 3] = 2.0 * ti * mi2 * (1.0 - ti) * (1.0 - t2)
        rows[i, 4] = (ti * mi2) ** 2 + 2.0 * ti * mi2 * (1.0 - ti) * t2 * mu[1, 1]
        rows[i, 5] = 2.0 * (
            ti * ti * mi1 * mi2
            + ti * mi1 * (1.0 - ti) * t1 * mu[0, 1]
            + ti * mi2 * (1.0 - ti) * t2 * mu[1, 0]
        )
    return ConfigProbs(rows)


@dataclass(frozen=True)
class EmergenceSolution:
    """Fixed point of the extinction equations plus the emergence probability.

    h[i], g[i] are the extinction probabilities along a single-edge and a
    triangle emanating from a strain-(i+1) carrier; prob_emergence[i] is the
    probability a uniformly seeded strain-(i+1) outbreak grows unboundedly.
    For decomposable mutation above threshold the fixed point need not be
    unique; the solver always reports the smallest root, which remains the
    correct extinction probability.
    """

    h: tuple[float, float]
    g: tuple[float, float]
    prob_emergence: tuple[float, float]
    iterations: int
    residual: float
    decomposable: bool


def emergence_probability(model: JointDegreeModel, params: StrainParams, *,
                          tol: float = DEFAULT_TOL,
                          max_iter: int = DEFAULT_MAX_ITER) -> EmergenceSolution:
    """Solve the 4-d fixed point for (h1, h2, g1, g2) at x = 1.

    Synchronous iteration from the all-zeros start: the maps are monotone
    polynomials with nonnegative coefficients, so iterates increase
    componentwise toward the smallest nonnegative root.  Stops when the
    sup-norm update falls below ``tol``; raises ConvergenceError past
    ``max_iter``.
    """
    probs = triangle_config_probs(params).p
    t = (params.t1, params.t2)
    mu = params.mu
    h = [0.0, 0.0]
    g = [0.0, 0.0]
    residual = float("inf")
    for iteration in range(1, max_iter + 1):
        terms1 = model.pgf_terms(h[0], g[0])
        terms2 = model.pgf_terms(h[1], g[1])
        edge = (terms1.g_edge, terms2.g_edge)
        tri = (terms1.g_tri, terms2.g_tri)
        h_new = [
            1.0 - t[i] + t[i] * (mu[i, 0] * edge[0] + mu[i, 1] * edge[1])
            for i in (0, 1)
        ]
        g_new = [
            probs[i, 0]
            + probs[i, 1] * tri[0]
            + probs[i, 2] * tri[0] ** 2
            + probs[i, 3] * tri[1]
            + probs[i, 4] * tri[1] ** 2
            + probs[i, 5] * tri[0] * tri[1]
            for i in (0, 1)
        ]
        residual = max(
            abs(h_new[0] - h[0]), abs(h_new[1] - h[1]),
            abs(g_new[0] - g[0]), abs(g_new[1] - g[1]),
        )
        # Guard against one-ulp overshoot of the invariant region.
        h = [min(v, 1.0) for v in h_new]
        g = [min(v, 1.0) for v in g_new]
        if residual < tol:
            break
    else:
        raise ConvergenceError(
            f"emergence fixed point did not converge in {max_iter} iterations "
            f"(residual {residual:.3e})",
            iterations=max_iter,
            residual=residual,
        )
    pe = tuple(1.0 - model.pgf_terms(h[i], g[i]).g for i in (0, 1))
    return EmergenceSolution(
        h=(h[0], h[1]),
        g=(g[0], g[1]),
        prob_emergence=pe,
        iterations=iteration,
        residual=residual,
        decomposable=params.decomposable,
    )


def jacobian(model: JointDegreeModel, params: StrainParams) -> np.ndarray:
    """Linearization of the fixed-point maps at the all-ones point.

    4x4 in block order (h1, h2, g1, g2):

        [[Pi * beta_s,      Pi * <st>/<s>],
         [Delta * <st>/<t>, Delta * beta_t]]

    with beta_s = (<s^2> - <s>)/<s> and beta_t likewise for t.  A missing
    stub type contributes zero (its coordinates never move), so the radius
    reduces to the surviving block; a model with neither stub type is
    rejected.
    """
    mom = model.moments()
    if mom.mean_s == 0 and mom.mean_t == 0:
        raise ValueError("degenerate model: no single-edges and no triangles")
    pi = params.pi
    delta = triangle_config_probs(params).delta
    top = np.hstack([pi * mom.excess_s, pi * mom.cross_over_s])
    bottom = np.hstack([delta * mom.cross_over_t, delta * mom.excess_t])
    return np.vstack([top, bottom])


def spectral_radius(m: np.ndarray) -> float:
    """Largest eigenvalue modulus, via a dense eigensolver.

    Works for reducible matrices (decomposable mutation), where power
    iteration would be fragile.
    """
    return float(np.max(np.abs(np.linalg.eigvals(np.asarray(m, dtype=np.float64)))))


def one_step_irreversible_rho(lambda_s: float, lambda_t: float, t2: float) -> float:
    """Closed-form threshold radius for one-step irreversible mutation on
    doubly Poisson networks:

        rho = lambda_s * T2 * (1 + (2 lambda_t / lambda_s) (1 - T2^2 + T2))

    Valid for mu22 = 1, mu21 = 0 with strain 2 the more transmissible
    (T1 < T2), which makes the strain-2 branch dominate the spectrum.
    """
    if lambda_s <= 0:
        raise ValueError("lambda_s must be positive")
    if lambda_t < 0:
        raise ValueError("lambda_t must be nonnegative")
    if not 0.0 <= t2 <= 1.0:
        raise ValueError("t2 must lie in [0, 1]")
    return lambda_s * t2 * (1.0 + (2.0 * lambda_t / lambda_s) * (1.0 - t2 * t2 + t2))


def critical_parameter(family: Callable[[float], JointDegreeModel],
                       params: StrainParams,
                       bracket: tuple[float, float], *,
                       tol: float = 1e-9, max_iter: int = 200) -> float:
    """Bisect ``family`` for the parameter where the threshold radius is 1.

    ``family`` maps a scalar to a model; the radius must be below 1 at the
    low end of the bracket and above 1 at the high end, and monotone in
    between (true for the doubly Poisson lambda sweeps).
    """
    lo, hi = bracket
    if not lo < hi:
        raise ValueError(f"invalid bracket {bracket!r}")

    def rho_at(lam: float) -> float:
        return spectral_radius(jacobian(family(lam), params))

    if not (rho_at(lo) < 1.0 < rho_at(hi)):
        raise ValueError("bracket does not straddle the threshold")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        rho = rho_at(mid)
        if abs(rho - 1.0) < tol:
            return mid
        if rho < 1.0:
            lo = mid
        else:
            hi = mid
    raise ConvergenceError(
        f"bisection did not reach |rho - 1| < {tol} in {max_iter} steps",
        iterations=max_iter,
        residual=abs(rho_at(0.5 * (lo + hi)) - 1.0),
    )


def size_heuristic(model: JointDegreeModel, params: StrainParams, *,
                   tol: float = DEFAULT_TOL,
                   max_iter: int = DEFAULT_MAX_ITER) -> float:
    """Predicted conditional epidemic size via the single-strain collapse.

    The two-strain process is replaced by one strain with effective
    transmissibility rho(Pi) and identity mutation.  Under a uniform
    transmissibility, bond percolation is undirected, so the collapsed
    emergence probability doubles as the mean epidemic size.
    """
    t_eff = spectral_radius(params.pi)
    collapsed = StrainParams(t_eff, t_eff, np.eye(2))
    solution = emergence_probability(model, collapsed, tol=tol, max_iter=max_iter)
    return solution.prob_emergence[0]


def progeny_mean_matrix(params: StrainParams) -> np.ndarray:
    """Mean-progeny matrix of the collapse, divided by the excess degree.

    Types index (infected-by, mutated-to) pairs in the order
    (1,1), (1,2), (2,1), (2,2); entry (i, j) is the mean number of type-j
    children per type-i parent over the shared excess-degree factor.  Its
    spectral radius equals rho(Pi), which motivates the collapse.
    """
    pi = params.pi
    row_a = np.array([pi[0, 0], pi[0, 1], 0.0, 0.0])
    row_b = np.array([0.0, 0.0, pi[1, 0], pi[1, 1]])
    return np.stack([row_a, row_b, row_a, row_b])
