"""Index calculus for instability strata of marked sheaves on stable curves.

A stratum is labeled either by graded-piece degrees and ranks with a
distinguished index, or by the weakly increasing vector of (clamped) slopes
repeated by rank.  The two encodings are mutually inverse; all arithmetic is
exact.  The admissibility routine certifies a radius outside of which every
stratum's twisted weight interval is strictly negative, then enumerates the
finitely many lattice vectors inside.

The per-marking contribution to the multiplicity-line weight is summed over
the p outgoing markings (each marking distributes total rank N over the
graded pieces), giving the interval [p*N*min(v), p*N*max(v)];
``LK_BOUND_NOTE`` flags this for the diagnostics channel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .errors import DomainError

LK_BOUND_NOTE = (
    "multiplicity-line weight interval is summed over the p outgoing markings "
    "(p*N*min(v) .. p*N*max(v)); a stated bound elsewhere uses n in place of p, "
    "which does not match the sum it abbreviates"
)


@dataclass(frozen=True)
class StrataParams:
    """Rank N, genus g, n incoming and p outgoing markings, total degree d.

    h = 2g - 2 + n + p is the log-canonical degree and must be positive, so
    the polarized rank N*h makes sense; M = lcm(1, ..., N*h) clears every
    slope denominator.
    """

    N: int
    g: int
    n: int
    p: int
    d: int

    def __post_init__(self):
        if self.N < 1:
            raise DomainError("rank N must be a positive integer")
        if min(self.g, self.n, self.p) < 0:
            raise DomainError("g, n, p must be nonnegative")
        if self.h < 1:
            raise DomainError(f"2g-2+n+p = {self.h} must be positive")

    @property
    def h(self) -> int:
        return 2 * self.g - 2 + self.n + self.p

    @property
    def nh(self) -> int:
        return self.N * self.h

    @property
    def M(self) -> int:
        return math.lcm(*range(1, self.nh + 1))

    @property
    def mean_slope(self) -> Fraction:
        return Fraction(self.d, self.nh)


@dataclass(frozen=True)
class StratumLabel:
    """Degrees (d_0..d_q), ranks (r_0..r_q), and the distinguished index j."""

    degrees: tuple[int, ...]
    ranks: tuple[int, ...]
    j: int


@dataclass(frozen=True)
class WeightVector:
    """Weakly increasing slope vector; j_prime is 1-based and marks the first
    entry of the distinguished block."""

    w: tuple[Fraction, ...]
    j_prime: int


@dataclass(frozen=True)
class CenterWeights:
    """Exact torus weights of the tautological lines on a stratum center.

    v lists the integer weight of each graded piece; wt_e is always 0; the
    two intervals bound the multiplicity-line weight over all rank
    distributions and the user-supplied input-complex weight bound; the
    combined interval is for level^a (x) rank^b twisted by the input complex.
    """

    v: tuple[int, ...]
    wt_rk: int
    wt_deg: Fraction
    wt_e: int
    wt_k_interval: tuple[int, int]
    wt_ev_interval: tuple[int, int]
    combined_interval: tuple[Fraction, Fraction]


def validate_label(label: StratumLabel, params: StrataParams) -> list[str]:
    """Violations of the label conditions; empty means the label is valid."""
    problems = []
    degs, ranks, j = label.degrees, label.ranks, label.j
    q = len(ranks) - 1
    if len(degs) != len(ranks) or not ranks:
        problems.append("degrees and ranks must be nonempty lists of equal length")
        return problems
    if any(r < 1 for r in ranks):
        problems.append("ranks must be positive")
    if not (0 <= j <= q):
        problems.append(f"index j={j} out of range 0..{q}")
    if sum(degs) != params.d:
        problems.append(f"degrees sum to {sum(degs)}, expected {params.d}")
    if sum(ranks) != params.nh:
        problems.append(f"ranks sum to {sum(ranks)}, expected {params.nh}")
    if problems:
        return problems
    values = [
        max(Fraction(degs[i], ranks[i]), params.mean_slope)
        if i == j
        else Fraction(degs[i], ranks[i])
        for i in range(q + 1)
    ]
    for i in range(q):
        if not values[i] < values[i + 1]:
            problems.append(
                f"slope chain violated at positions {i},{i+1}: {values[i]} !< {values[i+1]}"
            )
    return problems


def label_to_weights(label: StratumLabel, params: StrataParams) -> WeightVector:
    """Repeat each block value by its rank; the j-th block is clamped from
    below by the mean slope.  j_prime points at the start of that block."""
    problems = validate_label(label, params)
    if problems:
        raise DomainError("invalid label: " + "; ".join(problems))
    w: list[Fraction] = []
    j_prime = 1
    for i, (deg, rank) in enumerate(zip(label.degrees, label.ranks)):
        value = Fraction(deg, rank)
        if i == label.j:
            j_prime = len(w) + 1
            value = max(value, params.mean_slope)
        w.extend([value] * rank)
    return WeightVector(tuple(w), j_prime)


def _blocks(w: tuple[Fraction, ...]):
    """Run-length decomposition: list of (value, rank, first position 1-based)."""
    out = []
    i = 0
    while i < len(w):
        k = i
        while k < len(w) and w[k] == w[i]:
            k += 1
        out.append((w[i], k - i, i + 1))
        i = k
    return out


def weights_to_label(wv: WeightVector, params: StrataParams) -> StratumLabel:
    """Recover ranks by run-length counting and degrees by value * rank; the
    distinguished degree is forced by the total.  Rejects vectors that do not
    encode a stratum (non-integral degree or clamp mismatch)."""
    w = wv.w
    if len(w) != params.nh:
        raise DomainError(f"weight vector has length {len(w)}, expected {params.nh}")
    if any(w[i] > w[i + 1] for i in range(len(w) - 1)):
        raise DomainError("weight vector must be weakly increasing")
    if any((x * params.M).denominator != 1 for x in w):
        raise DomainError(f"entries must have denominator dividing M={params.M}")
    blocks = _blocks(w)
    starts = [start for _, _, start in blocks]
    if wv.j_prime not in starts:
        raise DomainError(
            f"j_prime={wv.j_prime} is not the first position of its block"
        )
    j = starts.index(wv.j_prime)
    degrees: list[int] = []
    for i, (value, rank, _) in enumerate(blocks):
        if i == j:
            degrees.append(0)  # placeholder, forced below
            continue
        deg = value * rank
        if deg.denominator != 1:
            raise DomainError(
                f"block {i} has non-integral degree {deg}; not a stratum"
            )
        degrees.append(int(deg))
    ranks = [rank for _, rank, _ in blocks]
    degrees[j] = params.d - sum(degrees[:j] + degrees[j + 1 :])
    clamped = max(Fraction(degrees[j], ranks[j]), params.mean_slope)
    if clamped != blocks[j][0]:
        raise DomainError(
            f"distinguished block value {blocks[j][0]} does not match "
            f"max(recovered slope, mean slope) = {clamped}; not a stratum"
        )
    label = StratumLabel(tuple(degrees), tuple(ranks), j)
    problems = validate_label(label, params)
    if problems:
        raise DomainError("recovered label invalid: " + "; ".join(problems))
    return label


def center_weights(
    wv: WeightVector, params: StrataParams, a: int, b: int, kappa: int
) -> CenterWeights:
    """Exact tautological weights on the center indexed by the given vector.

    wt_rk = M * 1.(w - mean) and wt_deg = -2M * w.(w - mean) are identities;
    the multiplicity interval ranges over all distributions of rank N per
    outgoing marking; the input-complex interval is +-kappa*(|max v|+|min v|).
    The combined interval is for level^a (x) rank^b (x) input complex, whose
    level part contributes degree weight minus the multiplicity weight.
    """
    if kappa < 0:
        raise DomainError("kappa must be nonnegative")
    M, mean = params.M, params.mean_slope
    w = wv.w
    if len(w) != params.nh:
        raise DomainError(f"weight vector has length {len(w)}, expected {params.nh}")
    blocks = _blocks(w)
    v = []
    for value, _, _ in blocks:
        vi = M * (value - mean)
        if vi.denominator != 1:
            raise DomainError(f"entry {value} not in (1/M)Z after clearing M={M}")
        v.append(int(vi))
    wt_rk_f = M * sum((x - mean for x in w), Fraction(0))
    wt_rk = int(wt_rk_f)
    wt_deg = -2 * M * sum((x * (x - mean) for x in w), Fraction(0))
    pn = params.p * params.N
    wt_k = (pn * min(v), pn * max(v))
    bound = kappa * (abs(max(v)) + abs(min(v)))
    wt_ev = (-bound, bound)
    base = a * wt_deg + b * wt_rk
    combined = (base - a * wt_k[1] + wt_ev[0], base - a * wt_k[0] + wt_ev[1])
    return CenterWeights(tuple(v), wt_rk, wt_deg, 0, wt_k, wt_ev, combined)


def wt_deg_piecewise(label: StratumLabel, params: StrataParams) -> Fraction:
    """Degree-line weight recomputed from the graded pieces.

    The piecewise identity gives nh*wt_deg + 2d*wt_rk = -sum_i 2*(nh*d_i -
    d*r_i)*v_i with the actual recovered degrees; solving for wt_deg is the
    independent route cross-checked against the vector formula.
    """
    wv = label_to_weights(label, params)
    M, mean, nh, d = params.M, params.mean_slope, params.nh, params.d
    blocks = _blocks(wv.w)
    v = [int(M * (value - mean)) for value, _, _ in blocks]
    ranks = label.ranks
    degs = label.degrees
    mixed = -sum(2 * (nh * degs[i] - d * ranks[i]) * v[i] for i in range(len(v)))
    wt_rk = sum(ranks[i] * v[i] for i in range(len(v)))
    return Fraction(mixed - 2 * d * wt_rk, nh)


def certificate_radius(params: StrataParams, a: int, b: int, kappa: int) -> Fraction:
    """Rational radius R: any vector whose combined interval reaches 0 has
    ||w - mean|| <= R.  Negative-definiteness of the quadratic term makes the
    linear terms' coefficients explicit; sqrt(nh) is bounded by its ceiling.
    The result is rounded up to the lattice granularity 1/M."""
    if a < 1:
        raise DomainError("a must be a positive integer")
    if kappa < 0:
        raise DomainError("kappa must be nonnegative")
    nh = params.nh
    s = isqrt(nh - 1) + 1  # ceil(sqrt(nh))
    linear = (
        Fraction(2 * a * abs(params.d) * s, nh)
        + abs(b) * s
        + a * params.p * params.N
        + 2 * kappa
    )
    radius = linear / (2 * a)
    M = params.M
    return Fraction(math.ceil(radius * M), M)


def _sorted_lattice_vectors(dim: int, bound_sq: int):
    """Weakly increasing integer vectors with squared euclidean norm <= bound_sq."""
    c = [0] * dim
    lo0 = -isqrt(bound_sq)

    def rec(i: int, lo: int, s: int):
        if i == dim:
            yield tuple(c)
            return
        v = lo
        remaining = dim - i
        while True:
            sq = v * v
            needed = s + (sq * remaining if v >= 0 else sq)
            if v > 0 and needed > bound_sq:
                break
            if needed <= bound_sq:
                c[i] = v
                yield from rec(i + 1, v, s + sq)
            v += 1

    yield from rec(0, lo0, 0)


def _decode_c(cvec: tuple[int, ...], params: StrataParams):
    """Valid distinguished block choices for the scaled deviation vector.

    cvec = M*(w - mean).  Yields (j_prime, block index) for every decode that
    produces a genuine label: non-distinguished degrees integral, and the
    distinguished block value equal to max(recovered slope, mean slope).
    """
    M, nh, d = params.M, params.nh, params.d
    blocks = []
    i = 0
    while i < len(cvec):
        k = i
        while k < len(cvec) and cvec[k] == cvec[i]:
            k += 1
        blocks.append((cvec[i], k - i, i + 1))
        i = k
    denom = M * nh
    # degree numerators: d_i = r_i*(c_i*nh + d*M) / (M*nh)
    numers = [rank * (cv * nh + d * M) for cv, rank, _ in blocks]
    for jb, (cv, rank, start) in enumerate(blocks):
        if cv < 0:
            continue  # distinguished value is clamped from below by the mean
        total_other = 0
        ok = True
        for i, num in enumerate(numers):
            if i == jb:
                continue
            if num % denom:
                ok = False
                break
            total_other += num // denom
        if not ok:
            continue
        dj = d - total_other
        if cv == 0:
            # clamp active: recovered slope must not exceed the mean slope
            if dj * nh <= d * rank:
                yield start, jb
        else:
            if dj * denom == rank * (cv * nh + d * M):
                yield start, jb


def admissible_strata(
    params: StrataParams, a: int, b: int, kappa: int
) -> tuple[Fraction, list[WeightVector]]:
    """Certified-finite enumeration of strata whose twisted weight interval
    touches [0, oo).

    Returns the certificate radius and every weight vector (with distinguished
    index) inside it that decodes to a valid label and whose combined interval
    for level^a (x) rank^b (x) input complex has nonnegative upper end."""
    radius = certificate_radius(params, a, b, kappa)
    M, nh, d = params.M, params.nh, params.d
    bound = int(radius * M)
    bound_sq = bound * bound
    pn = params.p * params.N
    out: list[WeightVector] = []
    mean = params.mean_slope
    for cvec in _sorted_lattice_vectors(nh, bound_sq):
        # upper interval end, scaled by M*nh to stay integral:
        # wt_deg = -2*sum(c^2)/M - 2*d*sum(c)/nh ; wt_rk = sum(c)
        sum_c = sum(cvec)
        sum_sq = sum(x * x for x in cvec)
        cmin, cmax = cvec[0], cvec[-1]
        upper = a * (-2 * nh * sum_sq - 2 * d * M * sum_c) + M * nh * (
            b * sum_c - a * pn * cmin + kappa * (abs(cmax) + abs(cmin))
        )
        if upper < 0:
            continue
        decodes = list(_decode_c(cvec, params))
        if not decodes:
            continue
        w = tuple(Fraction(cv, M) + mean for cv in cvec)
        for j_prime, _ in decodes:
            out.append(WeightVector(w, j_prime))
    out.sort(key=lambda wv: (wv.w, wv.j_prime))
    return radius, out
