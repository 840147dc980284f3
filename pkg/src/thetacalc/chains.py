"""Splitting types of rank-N bundles on contracted rational chains.

A splitting type is an N x l matrix of line-bundle degrees: row j records the
degrees of the j-th summand along the l components of the chain.  Admissible
types are exactly those that are nonnegative (counit positivity), have a
positive entry in every column (relative ampleness of the determinant), and
have each row equal to zero or to a standard basis vector (purity of the
pushforward).  Those three conditions force l <= N.

Bridges (chains joining two branches) and tails (chains ending at an outgoing
marking) satisfy the same matrix conditions; the optional kind tag is only
reporting metadata.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import comb
from typing import Optional

from .errors import DomainError


@dataclass(frozen=True)
class SplittingType:
    rank: int
    length: int
    rows: tuple[tuple[int, ...], ...]
    kind: Optional[str] = None  # "bridge" | "tail" | None

    def __post_init__(self):
        if self.rank < 1 or self.length < 1:
            raise DomainError("rank and length must be positive")
        if len(self.rows) != self.rank or any(len(r) != self.length for r in self.rows):
            raise DomainError(
                f"matrix must be {self.rank} x {self.length}, got rows {self.rows}"
            )
        if self.kind not in (None, "bridge", "tail"):
            raise DomainError(f"unknown kind {self.kind!r}")


def is_counit_positive(t: SplittingType) -> bool:
    """All degrees nonnegative: the counit of the contraction is surjective."""
    return all(e >= 0 for row in t.rows for e in row)


def is_strictly_positive(t: SplittingType) -> bool:
    """Every component carries a positive degree in some summand."""
    return all(any(row[i] > 0 for row in t.rows) for i in range(t.length))


def _row_is_pure(row: tuple[int, ...]) -> bool:
    return all(e == 0 for e in row) or (
        sum(row) == 1 and all(e in (0, 1) for e in row)
    )


def is_pure(t: SplittingType) -> bool:
    """Each summand is trivial or has degree one on a single component."""
    return all(_row_is_pure(row) for row in t.rows)


def is_admissible(t: SplittingType) -> bool:
    return is_counit_positive(t) and is_strictly_positive(t) and is_pure(t)


def enum_admissible(n: int, l: int, kind: Optional[str] = None) -> list[SplittingType]:
    """All admissible N x l types, rows ordered, in lexicographic row order.

    Rows range over the zero row and the l basis rows; every assignment whose
    columns are all covered is admissible, so the list size matches the
    inclusion-exclusion count.  Empty exactly when l > N.
    """
    if n < 1 or l < 1:
        raise DomainError("rank and length must be positive")
    zero = tuple([0] * l)
    basis = [tuple(1 if k == i else 0 for k in range(l)) for i in range(l)]
    out = []
    for rows in product([zero] + basis, repeat=n):
        t = SplittingType(n, l, rows, kind)
        if is_admissible(t):
            out.append(t)
    out.sort(key=lambda t: t.rows)
    return out


def distinct_summand_types(n: int, l: int) -> list[SplittingType]:
    """Admissible types up to reordering the summands (rows sorted, deduped)."""
    seen = {}
    for t in enum_admissible(n, l):
        key = tuple(sorted(t.rows))
        seen.setdefault(key, SplittingType(n, l, key))
    return [seen[k] for k in sorted(seen)]


def inclusion_exclusion_count(n: int, l: int) -> int:
    """Independent count of admissible row assignments.

    Subtract assignments missing at least j required columns:
    sum_j (-1)^j C(l, j) (l + 1 - j)^n.
    """
    return sum((-1) ** j * comb(l, j) * (l + 1 - j) ** n for j in range(l + 1))


def per_component_form(t: SplittingType, i: int) -> int:
    """Multiplicity k of the degree-one summands on component i.

    The restriction to that component is O(1)^k + O^(N-k); admissibility
    forces 0 < k <= N."""
    if not is_admissible(t):
        raise DomainError("splitting type is not admissible")
    if not (0 <= i < t.length):
        raise DomainError(f"component index {i} out of range 0..{t.length - 1}")
    k = sum(1 for row in t.rows if row[i] == 1)
    if not (0 < k <= t.rank):
        raise DomainError(f"component {i} has multiplicity {k} outside (0, {t.rank}]")
    return k


def chain_degree(t: SplittingType) -> int:
    """Total degree of the restriction: sum of all matrix entries."""
    return sum(sum(row) for row in t.rows)
