"""Numerical stability invariant on weighted filtrations and its optimizers.

A piece is numerical data (rank, degree) with slope mu = 2*degree/rank.  The
invariant of a weighted filtration of a total (rank, degree) is

    nu_alpha = sum_i w_i * (2*deg_i - rk_i*(mu(total) + alpha))
               / sqrt(sum_i w_i^2 * rk_i),

homogeneous of degree zero in the weights, so maximizers are rays.  The
closed-form maximizer puts w_i = mu_i - mu(total) (clamped at the marked
index); ``numeric_maximize`` is an independent projected-ascent check of it.
Numerator and radicand are kept as exact rationals; only the final square
root is floating point.
"""

from __future__ import annotations

import math
import os
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DomainError

_DEFAULT_SEED = 20240915


def _env_seed() -> int:
    raw = os.environ.get("THETA_STRATA_SEED")
    if raw is None:
        return _DEFAULT_SEED
    try:
        return int(raw)
    except ValueError as exc:
        raise DomainError(f"THETA_STRATA_SEED must be an integer, got {raw!r}") from exc


@dataclass(frozen=True)
class Piece:
    """Numerical shadow of a graded piece; slope needs positive rank."""

    rank: int
    degree: int

    def __post_init__(self):
        if self.rank < 0:
            raise DomainError("rank must be nonnegative")

    @property
    def slope(self) -> Fraction:
        if self.rank == 0:
            raise DomainError("slope undefined for rank 0")
        return Fraction(2 * self.degree, self.rank)


@dataclass(frozen=True)
class WeightedFiltration:
    """Jumps (weight, piece) with strictly increasing weights.

    j, when present, marks the piece whose subobject must contain the marked
    image; its weight is required to be nonnegative.  At most one piece may
    have rank zero (the degenerate marked piece).
    """

    jumps: tuple[tuple[Fraction, Piece], ...]
    j: Optional[int] = None

    def __post_init__(self):
        if not self.jumps:
            raise DomainError("filtration needs at least one jump")
        weights = [w for w, _ in self.jumps]
        if any(weights[i] >= weights[i + 1] for i in range(len(weights) - 1)):
            raise DomainError("jump weights must be strictly increasing")
        if sum(1 for _, p in self.jumps if p.rank == 0) > 1:
            raise DomainError("at most one rank-0 piece allowed")
        if self.j is not None:
            if not (0 <= self.j < len(self.jumps)):
                raise DomainError(f"marked index {self.j} out of range")
            if weights[self.j] < 0:
                raise DomainError("marked piece must have nonnegative weight")

    def total(self) -> Piece:
        return Piece(
            sum(p.rank for _, p in self.jumps), sum(p.degree for _, p in self.jumps)
        )


@dataclass(frozen=True)
class ToyObject:
    """Multiset of positive-rank constituents standing in for a pure object."""

    constituents: tuple[Piece, ...]

    def __post_init__(self):
        if not self.constituents:
            raise DomainError("object needs at least one constituent")
        if any(p.rank <= 0 for p in self.constituents):
            raise DomainError("constituents must have positive rank")

    def total(self) -> Piece:
        return Piece(
            sum(p.rank for p in self.constituents),
            sum(p.degree for p in self.constituents),
        )


def norm_b(f: WeightedFiltration) -> Fraction:
    """Radicand of the invariant's denominator: sum of weight^2 * rank."""
    return sum((w * w * p.rank for w, p in f.jumps), Fraction(0))


def nu_parts(
    f: WeightedFiltration, total: Piece, alpha: Fraction | int = 0
) -> tuple[Fraction, Fraction]:
    """Exact (numerator, radicand) of the invariant; rejects zero norm."""
    alpha = Fraction(alpha)
    if alpha < 0:
        raise DomainError("alpha must be nonnegative")
    rank_sum = sum(p.rank for _, p in f.jumps)
    deg_sum = sum(p.degree for _, p in f.jumps)
    if (rank_sum, deg_sum) != (total.rank, total.degree):
        raise DomainError(
            f"pieces sum to (rank, degree) = ({rank_sum}, {deg_sum}), "
            f"expected ({total.rank}, {total.degree})"
        )
    mu = total.slope
    numerator = sum(
        (w * (2 * p.degree - p.rank * (mu + alpha)) for w, p in f.jumps), Fraction(0)
    )
    radicand = norm_b(f)
    if radicand == 0:
        raise DomainError("zero norm: no jump carries positive weight^2 * rank")
    return numerator, radicand


def nu(f: WeightedFiltration, total: Piece, alpha: Fraction | int = 0) -> float:
    """The invariant as a float; numerator and radicand are exact inside."""
    numerator, radicand = nu_parts(f, total, alpha)
    return float(numerator) / math.sqrt(float(radicand))


def optimal_weights(
    slopes_ranks: Sequence[tuple[Fraction, int]],
    total_slope: Fraction,
    j: Optional[int] = None,
    alpha: Fraction | int = 0,
) -> WeightedFiltration:
    """Closed-form maximizing weights for given (slope, rank) pieces.

    Weights are mu_i - (mu + alpha); the marked weight is clamped at 0.  The
    overall positive scale is conventional (the invariant is scale-free), so
    it is fixed to 1.  Slopes must be strictly increasing and each slope must
    come from an integer degree (slope * rank even).
    """
    if not slopes_ranks:
        raise DomainError("need at least one piece")
    alpha = Fraction(alpha)
    slopes = [Fraction(mu) for mu, _ in slopes_ranks]
    if any(slopes[i] >= slopes[i + 1] for i in range(len(slopes) - 1)):
        raise DomainError("slopes must be strictly increasing")
    center = Fraction(total_slope) + alpha
    jumps = []
    for i, (mu_i, r_i) in enumerate(slopes_ranks):
        deg = Fraction(mu_i) * r_i / 2
        if deg.denominator != 1:
            raise DomainError(f"slope {mu_i} with rank {r_i} has no integer degree")
        w = Fraction(mu_i) - center
        if j is not None and i == j:
            w = max(w, Fraction(0))
        jumps.append((w, Piece(r_i, int(deg))))
    filtration = WeightedFiltration(tuple(jumps), j=j)
    if norm_b(filtration) == 0:
        raise DomainError("no destabilizing filtration: all weights vanish")
    return filtration


def hn_filtration(obj: ToyObject) -> WeightedFiltration:
    """Canonical maximizing filtration: group constituents by slope, order by
    increasing slope, weight each group by its slope minus the total slope.

    A single slope group yields the trivial weight-0 filtration (semistable;
    the invariant is undefined on it)."""
    groups = slope_groups(obj)
    mu = obj.total().slope
    jumps = tuple(
        (slope - mu, Piece(rank, degree)) for slope, rank, degree in groups
    )
    return WeightedFiltration(jumps)


def slope_groups(obj: ToyObject) -> list[tuple[Fraction, int, int]]:
    """(slope, rank, degree) of the slope-grouped constituents, ascending."""
    acc: dict[Fraction, tuple[int, int]] = {}
    for p in obj.constituents:
        r, d = acc.get(p.slope, (0, 0))
        acc[p.slope] = (r + p.rank, d + p.degree)
    return [(s, r, d) for s, (r, d) in sorted(acc.items())]


def mu_max_gap_bound(obj: ToyObject) -> tuple[float, float]:
    """Invariant of the one-step filtration by the maximal-slope part, and the
    slope gap; the invariant is sqrt(rank) * gap >= gap.

    The inequality is asserted exactly before returning floats."""
    groups = slope_groups(obj)
    if len(groups) < 2:
        raise DomainError("need at least two distinct slopes; gap is 0")
    total = obj.total()
    mu = total.slope
    top_slope, top_rank, top_degree = groups[-1]
    rest = Piece(total.rank - top_rank, total.degree - top_degree)
    f = WeightedFiltration(((Fraction(0), rest), (Fraction(1), Piece(top_rank, top_degree))))
    numerator, radicand = nu_parts(f, total)
    gap = top_slope - mu
    # nu^2 = rank(top) * gap^2 >= gap^2 since rank(top) >= 1
    assert numerator == top_rank * gap and radicand == top_rank
    assert numerator * numerator >= gap * gap * radicand
    return float(numerator) / math.sqrt(float(radicand)), float(gap)


# -- independent numeric maximizer -------------------------------------------


def _pava_float(values: list[float], weights: list[float]) -> list[float]:
    """Weighted least-squares projection onto nondecreasing vectors."""
    blocks: list[list[float]] = []  # [weight, weighted sum, count]
    for x, w in zip(values, weights):
        blocks.append([w, w * x, 1])
        while len(blocks) > 1 and blocks[-2][1] * blocks[-1][0] > blocks[-1][1] * blocks[-2][0]:
            w2, s2, c2 = blocks.pop()
            blocks[-1][0] += w2
            blocks[-1][1] += s2
            blocks[-1][2] += c2
    out: list[float] = []
    for w, s, c in blocks:
        out.extend([s / w] * c)
    return out


def _project_cone(
    x: list[float], ranks: list[float], j: Optional[int], iters: int = 120
) -> list[float]:
    """Projection onto {nondecreasing} (and {w_j >= 0} if marked) in the
    rank-weighted metric; Dykstra's alternating scheme when both apply."""
    if j is None:
        return _pava_float(x, ranks)
    p = [0.0] * len(x)
    q = [0.0] * len(x)
    w = list(x)
    for _ in range(iters):
        y = _pava_float([w[i] + p[i] for i in range(len(w))], ranks)
        p = [w[i] + p[i] - y[i] for i in range(len(w))]
        w_new = [y[i] + q[i] for i in range(len(w))]
        w_new[j] = max(w_new[j], 0.0)
        q = [y[i] + q[i] - w_new[i] for i in range(len(w))]
        if max(abs(w_new[i] - w[i]) for i in range(len(w))) < 1e-15:
            w = w_new
            break
        w = w_new
    return w


def numeric_maximize(
    slopes_ranks: Sequence[tuple[Fraction, int]],
    total_slope: Fraction,
    j: Optional[int] = None,
    alpha: Fraction | int = 0,
    tolerance: float = 1e-12,
    seed: Optional[int] = None,
    max_iters: int = 400,
) -> tuple[list[float], float]:
    """Maximize the invariant over weight rays by projected ascent.

    Feasible set: weights nondecreasing (closure of the strict order), with
    w_j >= 0 when a marked index is given; the norm is fixed to 1.  Growing
    ascent steps plus projection converge to the cone-projected gradient
    direction.  Deterministic for a fixed seed; raises on non-convergence.
    """
    if not slopes_ranks:
        raise DomainError("need at least one piece")
    rng = random.Random(_env_seed() if seed is None else seed)
    alpha_f = float(alpha)
    center = float(total_slope) + alpha_f
    z = [float(mu) - center for mu, _ in slopes_ranks]
    ranks = [float(r) for _, r in slopes_ranks]

    def normalize(w: list[float]) -> Optional[list[float]]:
        norm = math.sqrt(sum(ranks[i] * w[i] * w[i] for i in range(len(w))))
        if norm < 1e-300:
            return None
        return [x / norm for x in w]

    def value(w: list[float]) -> float:
        return sum(ranks[i] * z[i] * w[i] for i in range(len(w)))

    w = normalize(_project_cone([z[i] + 1e-3 * rng.uniform(-1, 1) for i in range(len(z))], ranks, j))
    if w is None:
        w = normalize(_project_cone([rng.uniform(0, 1) * (i + 1) for i in range(len(z))], ranks, j))
    if w is None:
        raise DomainError("could not find a feasible nonzero starting ray")
    best = value(w)
    step = 1.0
    for _ in range(max_iters):
        candidate = _project_cone([w[i] + step * z[i] for i in range(len(w))], ranks, j)
        candidate = normalize(candidate)
        if candidate is None:
            step *= 0.5
            continue
        v = value(candidate)
        if v >= best:
            improved = v - best
            w, best = candidate, v
            step *= 2.0
            if improved <= tolerance * max(1.0, abs(best)):
                return w, best
        else:
            step *= 0.5
            if step < 1e-18:
                return w, best
    raise DomainError(f"projected ascent did not converge in {max_iters} iterations")
