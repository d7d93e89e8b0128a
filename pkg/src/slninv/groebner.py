"""Buchberger's algorithm, quotient Hilbert series and complete-intersection series."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from heapq import heappop, heappush
from itertools import combinations
from math import lcm
from typing import Mapping, Sequence

from .order import OrderMatrix, leading_monomial
from .poly import (
    FactoredRatFunc,
    HilbertSeries,
    Mono,
    Poly,
    VarContext,
    mono_div,
    mono_divides,
    mono_lcm,
    ratfunc_normalize,
)

MultiDeg = tuple[int, ...]

COPRIME = "coprime-criterion"


class IncompleteError(RuntimeError):
    """The S-pair budget ran out; ``partial`` holds the basis so far."""

    def __init__(self, msg: str, partial: list[Poly]):
        super().__init__(msg)
        self.partial = partial


class HomogeneityError(ValueError):
    pass


@dataclass(frozen=True)
class GradedRing:
    ctx: VarContext
    grading: VarContext
    degree_of: Mapping[str, MultiDeg]

    def __post_init__(self):
        for n in self.ctx.names:
            d = tuple(self.degree_of[n])
            if len(d) != self.grading.arity or min(d) < 0 or sum(d) <= 0:
                raise ValueError(f"bad degree {d} for variable {n}")

    @classmethod
    def univariate(cls, ctx: VarContext, degrees: Sequence[int], name: str = "t") -> GradedRing:
        return cls(ctx, VarContext.of([name]), {n: (d,) for n, d in zip(ctx.names, degrees)})

    def degree_matrix(self) -> list[MultiDeg]:
        return [tuple(self.degree_of[n]) for n in self.ctx.names]

    def mono_degree(self, m: Mono) -> MultiDeg:
        out = [0] * self.grading.arity
        for e, d in zip(m, self.degree_matrix()):
            if e:
                for i, x in enumerate(d):
                    out[i] += e * x
        return tuple(out)

    def poly_degree(self, f: Poly) -> MultiDeg:
        degs = {self.mono_degree(m) for m in f.terms}
        if len(degs) != 1:
            raise HomogeneityError(f"{f} is not homogeneous: degrees {sorted(degs)}")
        return degs.pop()


@dataclass(frozen=True)
class IdealBasis:
    generators: tuple[Poly, ...]
    ring: GradedRing | None = None
    certificate: str | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        if self.ring is not None:
            for g in self.generators:
                if g.ctx != self.ring.ctx:
                    raise ValueError("generator context differs from ring")
                self.ring.poly_degree(g)

    def __iter__(self):
        return iter(self.generators)

    def __len__(self) -> int:
        return len(self.generators)


class _IntOrder:
    """Integer-scaled copy of an OrderMatrix for fast weight tuples."""

    def __init__(self, order: OrderMatrix):
        self.order = order
        self.rows = []
        for r in order.rows:
            den = lcm(*(x.denominator for x in r)) if r else 1
            self.rows.append(tuple(int(x * den) for x in r))
        self._cache: dict[Mono, tuple[int, ...]] = {}

    def weight(self, m: Mono) -> tuple[int, ...]:
        w = self._cache.get(m)
        if w is None:
            w = tuple(sum(a * b for a, b in zip(r, m) if b) for r in self.rows)
            self._cache[m] = w
        return w

    def lead(self, f: Poly) -> Mono:
        best = None
        bw = None
        tie = False
        for m in f.terms:
            w = self.weight(m)
            if bw is None or w > bw:
                best, bw, tie = m, w, False
            elif w == bw:
                tie = True
        if tie:
            leading_monomial(self.order, f)  # raises the ambiguity error
        return best


def _as_list(basis) -> list[Poly]:
    return list(basis.generators if isinstance(basis, IdealBasis) else basis)


def s_polynomial(f: Poly, g: Poly, order: OrderMatrix) -> Poly:
    io = _IntOrder(order)
    return _spoly(f, g, io.lead(f), io.lead(g))


def _spoly(f: Poly, g: Poly, lf: Mono, lg: Mono) -> Poly:
    L = mono_lcm(lf, lg)
    return f.scale(1 / f.terms[lf], mono_div(L, lf)) - g.scale(1 / g.terms[lg], mono_div(L, lg))


def _reduce(f: Poly, basis: list[Poly], leads: list[Mono], io: _IntOrder) -> Poly:
    rem: dict[Mono, Fraction] = {}
    p = dict(f.terms)
    ctx = f.ctx
    while p:
        top = max(p, key=io.weight)
        c = p[top]
        for g, lg in zip(basis, leads):
            if mono_divides(lg, top):
                q = c / g.terms[lg]
                shift = mono_div(top, lg)
                for m, gc in g.terms.items():
                    mm = tuple(a + b for a, b in zip(m, shift))
                    v = p.get(mm, 0) - q * gc
                    if v:
                        p[mm] = v
                    else:
                        p.pop(mm, None)
                break
        else:
            rem[top] = c
            del p[top]
    return Poly._raw(ctx, rem)


def reduce(f: Poly, basis, order: OrderMatrix) -> Poly:
    """Full multivariate division remainder; divisors are tried in basis order."""
    gens = _as_list(basis)
    io = _IntOrder(order)
    return _reduce(f, gens, [io.lead(g) for g in gens], io)


def _coprime(a: Mono, b: Mono) -> bool:
    return all(not (x and y) for x, y in zip(a, b))


def buchberger(basis, order: OrderMatrix, budget: int = 10000) -> IdealBasis:
    """Groebner basis by normal-strategy Buchberger with the coprime criterion."""
    ring = basis.ring if isinstance(basis, IdealBasis) else None
    gens = [g for g in _as_list(basis) if g]
    io = _IntOrder(order)
    leads = [io.lead(g) for g in gens]
    if all(_coprime(a, b) for a, b in combinations(leads, 2)):
        return IdealBasis(tuple(gens), ring, COPRIME)

    def key(i: int, j: int):
        L = mono_lcm(leads[i], leads[j])
        return (sum(L), io.weight(L), i, j)

    queue: list = []
    for i, j in combinations(range(len(gens)), 2):
        if not _coprime(leads[i], leads[j]):
            heappush(queue, key(i, j))
    processed = 0
    while queue:
        *_, i, j = heappop(queue)
        if processed >= budget:
            raise IncompleteError(f"S-pair budget {budget} exhausted", list(gens))
        processed += 1
        h = _reduce(_spoly(gens[i], gens[j], leads[i], leads[j]), gens, leads, io)
        if not h:
            continue
        h = h.scale(1 / h.terms[io.lead(h)])
        gens.append(h)
        leads.append(io.lead(h))
        n = len(gens) - 1
        for k in range(n):
            if not _coprime(leads[k], leads[n]):
                heappush(queue, key(k, n))
    return IdealBasis(tuple(gens), ring, "buchberger")


def reduced_basis(gb: IdealBasis, order: OrderMatrix) -> IdealBasis:
    """Minimal, interreduced, monic form of a Groebner basis."""
    io = _IntOrder(order)
    gens = [g for g in gb.generators if g]
    leads = [io.lead(g) for g in gens]
    keep = []
    for i, (g, lg) in enumerate(zip(gens, leads)):
        if any(
            mono_divides(leads[j], lg) and (leads[j] != lg or j < i)
            for j in range(len(gens))
            if j != i
        ):
            continue
        keep.append(g)
    out = []
    for i, g in enumerate(keep):
        others = keep[:i] + keep[i + 1:]
        r = _reduce(g, others, [io.lead(o) for o in others], io)
        out.append(r.scale(1 / r.terms[io.lead(r)]))
    return IdealBasis(tuple(out), gb.ring, gb.certificate)


# ---------------------------------------------------------------------------
# Hilbert series of monomial quotients


def _minimalize(gens) -> tuple[Mono, ...]:
    out: list[Mono] = []
    for m in sorted(set(gens), key=sum):
        if not any(mono_divides(g, m) for g in out):
            out.append(m)
    return tuple(sorted(out))


def monomial_hilbert_numerator(gens: Sequence[Mono], degrees: Sequence[MultiDeg], grading: VarContext) -> Poly:
    """Numerator N with HS(R/I) = N / prod(1 - t^deg x) for a monomial ideal I."""
    nvar = len(degrees)

    def mdeg(m: Mono) -> Mono:
        out = [0] * grading.arity
        for e, d in zip(m, degrees):
            if e:
                for i, x in enumerate(d):
                    out[i] += e * x
        return tuple(out)

    one = Poly.const(grading, 1)

    @lru_cache(maxsize=None)
    def rec(I: tuple[Mono, ...]) -> Poly:
        if not I:
            return one
        if any(not any(m) for m in I):
            return Poly.zero(grading)
        counts = Counter()
        overlapping = False
        for a, b in combinations(I, 2):
            if not _coprime(a, b):
                overlapping = True
                break
        if not overlapping:
            out = one
            for m in I:
                out = out * (one - Poly.monomial(grading, mdeg(m)))
            return out
        for m in I:
            for v in range(nvar):
                if m[v]:
                    counts[v] += 1
        # most frequent variable; appears in two or more generators so x is not in I
        x = max(range(nvar), key=lambda v: (counts[v], -v))
        ex = tuple(int(v == x) for v in range(nvar))
        plus = _minimalize([m for m in I if not m[x]] + [ex])
        colon = _minimalize([tuple(max(e - 1, 0) if v == x else e for v, e in enumerate(m)) for m in I])
        return rec(plus) + rec(colon).scale(1, mdeg(ex))

    return rec(_minimalize(tuple(gens)))


def hilbert_series_quotient(ring: GradedRing, basis, order: OrderMatrix, budget: int = 10000) -> HilbertSeries:
    """Multigraded Hilbert series of ring/ideal through its leading-term ideal."""
    gb = buchberger(basis, order, budget)
    io = _IntOrder(order)
    leads = [io.lead(g) for g in gb.generators]
    degs = ring.degree_matrix()
    num = monomial_hilbert_numerator(leads, degs, ring.grading)
    value = ratfunc_normalize(FactoredRatFunc.build(ring.grading, num, [(d, 1) for d in degs]))
    return HilbertSeries(value, gb.certificate or "buchberger", {"basis_size": len(gb)})


def ci_series(gen_degrees: Sequence[MultiDeg], syz_degrees: Sequence[MultiDeg], grading: VarContext | None = None) -> HilbertSeries:
    """prod(1 - t^syz) / prod(1 - t^gen), normalized."""
    gen_degrees = [tuple(d) if not isinstance(d, int) else (d,) for d in gen_degrees]
    syz_degrees = [tuple(d) if not isinstance(d, int) else (d,) for d in syz_degrees]
    k = len(gen_degrees[0]) if gen_degrees else (len(syz_degrees[0]) if syz_degrees else 1)
    if grading is None:
        grading = VarContext.of(["t"] if k == 1 else [f"t{i + 1}" for i in range(k)])
    one = Poly.const(grading, 1)
    num = one
    for d in syz_degrees:
        num = num * (one - Poly.monomial(grading, d))
    return HilbertSeries(ratfunc_normalize(FactoredRatFunc.build(grading, num, [(d, 1) for d in gen_degrees])), "ci")
