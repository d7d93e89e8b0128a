"""Matrix monomial orders with rational weight rows."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .poly import Mono, Poly


class AmbiguityError(ValueError):
    """Several maximal monomials tie under the order."""

    def __init__(self, msg: str, tied: list[Mono]):
        super().__init__(msg)
        self.tied = tied


class ShrinkTooLargeError(ValueError):
    """Collapsing rows lost the separation of the checked support."""


LESS, EQUAL, GREATER = -1, 0, 1


@dataclass(frozen=True)
class OrderMatrix:
    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in r) for r in self.rows)
        if len({len(r) for r in rows}) > 1:
            raise ValueError("rows of unequal length")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def of(cls, rows: Iterable[Iterable]) -> OrderMatrix:
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def identity(cls, n: int) -> OrderMatrix:
        return cls.of([[int(i == j) for j in range(n)] for i in range(n)])

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def weight(self, m: Mono) -> tuple[Fraction, ...]:
        return tuple(sum((a * b for a, b in zip(r, m) if b), Fraction(0)) for r in self.rows)

    def stack(self, more: Iterable[Iterable]) -> OrderMatrix:
        return OrderMatrix(self.rows + tuple(tuple(r) for r in more))

    def rank(self) -> int:
        return _rank([list(r) for r in self.rows])

    def complete(self) -> OrderMatrix:
        """Append identity rows until the matrix has full column rank."""
        rows = [list(r) for r in self.rows]
        n = len(rows[0]) if rows else 0
        out = list(self.rows)
        for j in range(n):
            if _rank(rows) == n:
                break
            e = [Fraction(int(i == j)) for i in range(n)]
            if _rank(rows + [e]) > _rank(rows):
                rows.append(e)
                out.append(tuple(e))
        return OrderMatrix(tuple(out))

    def to_text(self) -> str:
        return "".join(" ".join(str(x) for x in r) + "\n" for r in self.rows)

    @classmethod
    def from_text(cls, text: str) -> OrderMatrix:
        return cls.of(
            [Fraction(x) for x in line.split()]
            for line in text.splitlines()
            if line.strip() and not line.lstrip().startswith("#")
        )


def _rank(rows: list[list[Fraction]]) -> int:
    m = [list(map(Fraction, r)) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c]:
                f = m[i][c] / m[rank][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def compare(order: OrderMatrix, m1: Mono, m2: Mono) -> int:
    """Lexicographic comparison of the weight vectors of m1 and m2."""
    for r in order.rows:
        d = sum(a * (x - y) for a, x, y in zip(r, m1, m2) if x != y)
        if d > 0:
            return GREATER
        if d < 0:
            return LESS
    return EQUAL


def leading_monomial(order: OrderMatrix, f: Poly) -> Mono:
    if not f:
        raise ValueError("leading monomial of zero")
    best = max(f.terms, key=order.weight)
    w = order.weight(best)
    tied = [m for m in f.terms if order.weight(m) == w]
    if len(tied) > 1:
        raise AmbiguityError(f"{len(tied)} monomials tie for the lead", tied)
    return best


def is_admissible(order: OrderMatrix, support: Iterable[Mono]) -> bool:
    """True when no two distinct monomials of the support tie."""
    seen = {}
    for m in set(map(tuple, support)):
        w = order.weight(m)
        if w in seen:
            return False
        seen[w] = m
    return True


def collapse_rows(order: OrderMatrix, shrink: Fraction, check: Sequence[Poly] = ()) -> OrderMatrix:
    """Fold all rows into row_1 + shrink*row_2 + shrink^2*row_3 + ...

    Leading monomials of the polynomials in ``check`` must survive the fold.
    """
    shrink = Fraction(shrink)
    if not 0 < shrink < 1:
        raise ValueError("shrink must lie in (0, 1)")
    if len(order.rows) <= 1:
        return order
    n = order.ncols
    row = [Fraction(0)] * n
    scale = Fraction(1)
    for r in order.rows:
        row = [a + scale * b for a, b in zip(row, r)]
        scale *= shrink
    out = OrderMatrix((tuple(row),))
    for f in check:
        before = leading_monomial(order, f)
        try:
            after = leading_monomial(out, f)
        except AmbiguityError as e:
            raise ShrinkTooLargeError(f"tie after collapse: {e.tied}") from None
        if after != before:
            raise ShrinkTooLargeError(f"leading monomial changed from {before} to {after}")
    return out


def separating_shrink(order: OrderMatrix, support: Iterable[Mono]) -> Fraction:
    """A shrink factor small enough to keep every pairwise comparison on the support."""
    pts = sorted(set(map(tuple, support)))
    gap = Fraction(0)
    for a, b in combinations(pts, 2):
        w = [x - y for x, y in zip(order.weight(a), order.weight(b))]
        gap = max(gap, *(abs(x) for x in w))
    # each later row can move a difference by at most gap * (s + s^2 + ...)
    return Fraction(1, 1 + 2 * int(gap) + 1) if gap else Fraction(1, 2)
