"""Joint degree distributions over single-edges and triangle corners.

A node's connectivity is a pair (s, t): s single-edge stubs and t triangle
corners, for a total degree of s + 2t.  Three families are supported:
independent Poisson counts in both coordinates, a clustering-tunable family
that trades single-edges for triangles while pinning the mean and variance
of the total degree, and finite tables for everything else.  Heavy-tailed
custom distributions must be supplied as pre-truncated tables; the built-in
families use exact closed forms throughout, so there is no hidden series
truncation anywhere.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

__all__ = [
    "JointDegreeModel",
    "DoublyPoisson",
    "ClusterTunable",
    "Table",
    "MomentSet",
    "PgfTerms",
]

_TABLE_SUM_TOL = 1e-12
_CSV_SUM_TOL = 1e-9


class PgfTerms(NamedTuple):
    """Values of the three generating-function sums at a point (a, b)."""

    g: float       # sum_{s,t} q_{s,t} a^s b^t
    g_edge: float  # sum_{s,t} (s q_{s,t} / <s>) a^(s-1) b^t, or 1 if <s> = 0
    g_tri: float   # sum_{s,t} (t q_{s,t} / <t>) a^s b^(t-1), or 1 if <t> = 0


@dataclass(frozen=True)
class MomentSet:
    """First and second moments of a joint (s, t) degree distribution."""

    mean_s: float
    mean_t: float
    ex2_s: float
    ex2_t: float
    cross: float

    @property
    def excess_s(self) -> float:
        """(<s^2> - <s>) / <s>; 0 by convention when <s> = 0."""
        return (self.ex2_s - self.mean_s) / self.mean_s if self.mean_s > 0 else 0.0

    @property
    def excess_t(self) -> float:
        """(<t^2> - <t>) / <t>; 0 by convention when <t> = 0."""
        return (self.ex2_t - self.mean_t) / self.mean_t if self.mean_t > 0 else 0.0

    @property
    def cross_over_s(self) -> float:
        """<st> / <s>; 0 by convention when <s> = 0."""
        return self.cross / self.mean_s if self.mean_s > 0 else 0.0

    @property
    def cross_over_t(self) -> float:
        """<st> / <t>; 0 by convention when <t> = 0."""
        return self.cross / self.mean_t if self.mean_t > 0 else 0.0


def _poisson_pmf(k: int, lam: float) -> float:
    if k < 0:
        return 0.0
    if lam == 0.0:
        return 1.0 if k == 0 else 0.0
    return math.exp(k * math.log(lam) - lam - math.lgamma(k + 1))


def _check_unit_interval(a: float, b: float) -> None:
    if not (0.0 <= a <= 1.0 and 0.0 <= b <= 1.0):
        raise ValueError(f"pgf arguments must lie in [0, 1], got a={a!r}, b={b!r}")


class JointDegreeModel:
    """Distribution over joint degrees (s, t).

    Models are immutable after construction and safe to share across
    threads.  Subclasses provide the probability mass function, exact
    moments, a sampler, and the three generating-function sums used by the
    emergence fixed point.
    """

    def pmf(self, s: int, t: int) -> float:
        """Probability that a node has s single-edges and t triangles."""
        raise NotImplementedError

    def moments(self) -> MomentSet:
        raise NotImplementedError

    def sample_joint_degree(self, rng: np.random.Generator, size: int | None = None):
        """Draw (s, t); scalars if size is None, else a pair of arrays."""
        raise NotImplementedError

    def pgf_terms(self, a: float, b: float) -> PgfTerms:
        """Evaluate (G, G_edge, G_tri) at 0 <= a, b <= 1.

        G_edge and G_tri are the size-biased sums over single-edges and
        triangles with one stub consumed by the incoming connection.  When
        the corresponding mean degree is zero the sum is undefined and is
        returned as 1: with no stubs of that type to follow, spreading
        along it goes extinct immediately.
        """
        raise NotImplementedError


@dataclass(frozen=True)
class DoublyPoisson(JointDegreeModel):
    """Independent Poisson(lambda_s) single-edges and Poisson(lambda_t) triangles."""

    lambda_s: float
    lambda_t: float

    def __post_init__(self):
        if self.lambda_s < 0 or self.lambda_t < 0:
            raise ValueError("Poisson rates must be nonnegative")

    def pmf(self, s: int, t: int) -> float:
        return _poisson_pmf(s, self.lambda_s) * _poisson_pmf(t, self.lambda_t)

    def moments(self) -> MomentSet:
        ls, lt = self.lambda_s, self.lambda_t
        return MomentSet(
            mean_s=ls,
            mean_t=lt,
            ex2_s=ls + ls * ls,
            ex2_t=lt + lt * lt,
            cross=ls * lt,
        )

    def sample_joint_degree(self, rng: np.random.Generator, size: int | None = None):
        return rng.poisson(self.lambda_s, size=size), rng.poisson(self.lambda_t, size=size)

    def pgf_terms(self, a: float, b: float) -> PgfTerms:
        _check_unit_interval(a, b)
        g = math.exp(self.lambda_s * (a - 1.0) + self.lambda_t * (b - 1.0))
        # Poisson size-biasing leaves the generating function unchanged, so
        # all three sums share the same closed form.
        return PgfTerms(
            g=g,
            g_edge=g if self.lambda_s > 0 else 1.0,
            g_tri=g if self.lambda_t > 0 else 1.0,
        )


@dataclass(frozen=True)
class ClusterTunable(JointDegreeModel):
    """Clustering knob at fixed total-degree mean and variance.

    s = 2 * Poisson(((4 - c) / 2) * lam) and t ~ Poisson((c / 2) * lam),
    independently.  For every c in [0, 4] the total degree s + 2t has mean
    4*lam and variance 8*lam; c = 0 gives an unclustered network, c = 4 a
    network of triangles only.
    """

    lam: float
    c: float

    def __post_init__(self):
        if self.lam <= 0:
            raise ValueError("lam must be positive")
        if not 0.0 <= self.c <= 4.0:
            raise ValueError("c must lie in [0, 4]")

    @property
    def _rate_x(self) -> float:
        return 0.5 * (4.0 - self.c) * self.lam

    @property
    def _rate_t(self) -> float:
        return 0.5 * self.c * self.lam

    def pmf(self, s: int, t: int) -> float:
        if s % 2:
            return 0.0
        return _poisson_pmf(s // 2, self._rate_x) * _poisson_pmf(t, self._rate_t)

    def moments(self) -> MomentSet:
        a, b = self._rate_x, self._rate_t
        return MomentSet(
            mean_s=2.0 * a,
            mean_t=b,
            ex2_s=4.0 * (a + a * a),
            ex2_t=b + b * b,
            cross=2.0 * a * b,
        )

    def sample_joint_degree(self, rng: np.random.Generator, size: int | None = None):
        return 2 * rng.poisson(self._rate_x, size=size), rng.poisson(self._rate_t, size=size)

    def pgf_terms(self, a: float, b: float) -> PgfTerms:
        _check_unit_interval(a, b)
        ax, bt = self._rate_x, self._rate_t
        # E[a^s] = E[(a^2)^X] for s = 2X.
        g = math.exp(ax * (a * a - 1.0) + bt * (b - 1.0))
        return PgfTerms(
            g=g,
            g_edge=a * g if ax > 0 else 1.0,
            g_tri=g if bt > 0 else 1.0,
        )


class Table(JointDegreeModel):
    """Finite-support joint degree distribution given as (s, t, p) rows.

    Rows must have distinct (s, t) pairs, nonnegative probabilities, and
    sum to 1 within 1e-12.  All moments and generating-function sums are
    exact finite sums over the rows.
    """

    def __init__(self, rows: Sequence[tuple[int, int, float]]):
        if not rows:
            raise ValueError("table needs at least one row")
        s = np.array([r[0] for r in rows], dtype=np.int64)
        t = np.array([r[1] for r in rows], dtype=np.int64)
        p = np.array([r[2] for r in rows], dtype=np.float64)
        if np.any(s < 0) or np.any(t < 0):
            raise ValueError("degrees must be nonnegative")
        if np.any(p < 0):
            raise ValueError("probabilities must be nonnegative")
        total = float(p.sum())
        if abs(total - 1.0) > _TABLE_SUM_TOL:
            raise ValueError(f"probabilities sum to {total!r}, not 1")
        if len({(int(a), int(b)) for a, b in zip(s, t)}) != len(rows):
            raise ValueError("(s, t) pairs must be distinct")
        self._s, self._t, self._p = s, t, p
        self._lookup = {(int(a), int(b)): float(q) for a, b, q in zip(s, t, p)}
        mean_s = float(np.sum(s * p))
        mean_t = float(np.sum(t * p))
        self._moments = MomentSet(
            mean_s=mean_s,
            mean_t=mean_t,
            ex2_s=float(np.sum(s.astype(float) ** 2 * p)),
            ex2_t=float(np.sum(t.astype(float) ** 2 * p)),
            cross=float(np.sum(s * t * p)),
        )
        # Size-biased row weights, restricted to rows that can be entered
        # through a stub of the given type.
        if mean_s > 0:
            keep = s > 0
            self._edge_s = s[keep] - 1
            self._edge_t = t[keep]
            self._edge_w = s[keep] * p[keep] / mean_s
        else:
            self._edge_s = self._edge_t = self._edge_w = None
        if mean_t > 0:
            keep = t > 0
            self._tri_s = s[keep]
            self._tri_t = t[keep] - 1
            self._tri_w = t[keep] * p[keep] / mean_t
        else:
            self._tri_s = self._tri_t = self._tri_w = None

    @classmethod
    def from_csv(cls, path) -> "Table":
        """Load rows from a CSV file with exact header ``s,t,p``.

        The column sum may deviate from 1 by at most 1e-9 (rounded input is
        renormalized); anything worse is rejected.
        """
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or [h.strip() for h in header] != ["s", "t", "p"]:
                raise ValueError(f"expected CSV header 's,t,p' in {path}")
            rows = [(int(r[0]), int(r[1]), float(r[2])) for r in reader if r]
        total = sum(p for _, _, p in rows)
        if not (1.0 - _CSV_SUM_TOL <= total <= 1.0 + _CSV_SUM_TOL):
            raise ValueError(
                f"table probabilities sum to {total!r}, outside [1-1e-9, 1+1e-9]"
            )
        return cls([(s, t, p / total) for s, t, p in rows])

    @property
    def rows(self) -> list[tuple[int, int, float]]:
        return [(int(a), int(b), float(q)) for a, b, q in zip(self._s, self._t, self._p)]

    def pmf(self, s: int, t: int) -> float:
        return self._lookup.get((s, t), 0.0)

    def moments(self) -> MomentSet:
        return self._moments

    def sample_joint_degree(self, rng: np.random.Generator, size: int | None = None):
        idx = rng.choice(self._s.size, size=size, p=self._p)
        return self._s[idx], self._t[idx]

    def pgf_terms(self, a: float, b: float) -> PgfTerms:
        _check_unit_interval(a, b)
        g = float(np.sum(self._p * np.power(a, self._s) * np.power(b, self._t)))
        if self._edge_w is not None:
            g_edge = float(
                np.sum(self._edge_w * np.power(a, self._edge_s) * np.power(b, self._edge_t))
            )
        else:
            g_edge = 1.0
        if self._tri_w is not None:
            g_tri = float(
                np.sum(self._tri_w * np.power(a, self._tri_s) * np.power(b, self._tri_t))
            )
        else:
            g_tri = 1.0
        return PgfTerms(g=g, g_edge=g_edge, g_tri=g_tri)

    def __repr__(self) -> str:
        return f"Table({self.rows!r})"
