"""Round-synchronous two-strain SIR spreading with in-host mutation.

Each infectious node carrying strain i attempts to infect every susceptible
neighbor independently with probability T_i and recovers after exactly one
round.  A susceptible node exposed to x successful strain-1 attempts and y
strain-2 attempts in the same round adopts strain 1 with probability
x/(x+y), then mutates once (i -> j with probability mu_ij); the mutated
strain is what the node transmits next round and what the tallies record.
The seed never mutates: it transmits its assigned strain in its one round.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph_gen import ClusteredGraph

__all__ = ["StrainParams", "SimulationOutcome", "simulate", "classify"]

_MU_ROW_TOL = 1e-12


@dataclass(frozen=True)
class StrainParams:
    """Transmissibilities (t1, t2) and the row-stochastic 2x2 mutation matrix."""

    t1: float
    t2: float
    mu: np.ndarray

    def __post_init__(self):
        for name, val in (("t1", self.t1), ("t2", self.t2)):
            if not 0.0 <= val <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {val!r}")
        mu = np.array(self.mu, dtype=np.float64)
        if mu.shape != (2, 2):
            raise ValueError("mu must be a 2x2 matrix")
        if np.any(mu < 0):
            raise ValueError("mutation probabilities must be nonnegative")
        if np.max(np.abs(mu.sum(axis=1) - 1.0)) > _MU_ROW_TOL:
            raise ValueError("mutation matrix rows must sum to 1")
        mu.setflags(write=False)
        object.__setattr__(self, "mu", mu)

    @classmethod
    def one_step_irreversible(cls, t1: float, t2: float, mu12: float) -> "StrainParams":
        """Strain 2 never reverts: mu = [[1 - mu12, mu12], [0, 1]]."""
        return cls(t1, t2, np.array([[1.0 - mu12, mu12], [0.0, 1.0]]))

    @property
    def transmissibility(self) -> np.ndarray:
        return np.array([self.t1, self.t2])

    @property
    def pi(self) -> np.ndarray:
        """Single-edge transmission-with-mutation kernel, Pi_ij = T_i mu_ij."""
        return self.transmissibility[:, None] * self.mu

    @property
    def decomposable(self) -> bool:
        """True when one strain cannot mutate into the other."""
        return self.mu[0, 1] == 0.0 or self.mu[1, 0] == 0.0


@dataclass(frozen=True)
class SimulationOutcome:
    """Final tallies of a single spreading trial."""

    total_infected: int
    infected_by_strain: tuple[int, int]
    rounds: int
    seed_node: int
    seed_strain: int


def simulate(graph: ClusteredGraph, params: StrainParams, seed_node: int,
             seed_strain: int, rng: np.random.Generator) -> SimulationOutcome:
    """Run one SIR trial to extinction; all nodes start susceptible.

    Deterministic given (graph, params, seed_node, seed_strain, rng state).
    """
    n = graph.n
    if not 0 <= seed_node < n:
        raise ValueError(f"seed_node {seed_node} outside [0, {n})")
    if seed_strain not in (1, 2):
        raise ValueError("seed_strain must be 1 or 2")

    t_of = (params.t1, params.t2)
    mu = params.mu
    susceptible = np.ones(n, dtype=bool)
    susceptible[seed_node] = False
    frontier = np.array([seed_node], dtype=np.int64)
    carried = np.array([seed_strain - 1], dtype=np.int8)
    by_strain = [0, 0]
    by_strain[seed_strain - 1] = 1
    rounds = 0

    while frontier.size:
        rounds += 1
        # All attempts of the round are resolved before any adoption draw.
        hits = []
        for k in (0, 1):
            nbrs = graph.neighbor_block(frontier[carried == k])
            nbrs = nbrs[susceptible[nbrs]]
            hits.append(nbrs[rng.random(nbrs.size) < t_of[k]])
        n1 = hits[0].size
        struck = np.concatenate(hits)
        if struck.size == 0:
            break
        targets, inv = np.unique(struck, return_inverse=True)
        x = np.bincount(inv[:n1], minlength=targets.size)
        y = np.bincount(inv[n1:], minlength=targets.size)
        adopted = np.where(
            rng.random(targets.size) < x / (x + y), 0, 1
        ).astype(np.int8)
        to_one = rng.random(targets.size) < mu[adopted, 0]
        final = np.where(to_one, 0, 1).astype(np.int8)
        susceptible[targets] = False
        by_strain[0] += int(np.count_nonzero(to_one))
        by_strain[1] += int(targets.size - np.count_nonzero(to_one))
        frontier, carried = targets, final

    return SimulationOutcome(
        total_infected=by_strain[0] + by_strain[1],
        infected_by_strain=(by_strain[0], by_strain[1]),
        rounds=rounds,
        seed_node=seed_node,
        seed_strain=seed_strain,
    )


def classify(outcome: SimulationOutcome, n: int, frac_threshold: float = 0.05) -> bool:
    """True when the infected fraction reaches the threshold (inclusive)."""
    if not 0.0 < frac_threshold < 1.0:
        raise ValueError("frac_threshold must lie strictly between 0 and 1")
    return outcome.total_infected / n >= frac_threshold
